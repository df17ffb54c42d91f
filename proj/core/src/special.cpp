// SPDX-License-Identifier: Apache-2.0
#include "ordlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ordlab/quadrature.hpp"

namespace ordlab {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

namespace {

// Acklam's rational approximation to the inverse normal CDF.
double acklam_icdf(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_icdf: p must be in (0,1)");
  double x = acklam_icdf(p);
  // One Halley step against erfc brings the result to near machine accuracy.
  const double e = normal_cdf(x) - p;
  const double u = e * 2.5066282746310005024 * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double normal_stop_loss(double sigma, double a) {
  if (sigma <= 0.0) return a < 0.0 ? -a : 0.0;
  const double z = a / sigma;
  const double phi = std::exp(-0.5 * z * z) * 0.39894228040143267794;
  return sigma * phi - a * (1.0 - normal_cdf(z));
}

namespace {

// Ascending series, A&S 9.6.10-13. Valid for all x but loses relative
// accuracy to cancellation as x grows; below kBesselSwitch the loss stays
// under ~1e-8.
void bessel_k01_series(double x, double* k0_out, double* k1_out) {
  const double q = 0.25 * x * x;
  const double lh = std::log(0.5 * x);
  const double euler_gamma = 0.57721566490153286061;

  // I0, I1 and the companion log-free sums accumulated together.
  double term0 = 1.0;  // q^k / (k!)^2
  double i0 = 1.0;
  double s0 = 0.0;     // sum H_k q^k/(k!)^2, H_0 = 0
  double term1 = 1.0;  // q^k / (k!(k+1)!)
  double i1s = 1.0;    // sum for 2*I1/x
  double s1 = 1.0;     // sum (H_k + H_{k+1}) q^k/(k!(k+1)!), k=0 term: H_0+H_1 = 1
  double hk = 0.0;
  for (int k = 1; k < 200; ++k) {
    hk += 1.0 / k;
    term0 *= q / (static_cast<double>(k) * k);
    i0 += term0;
    s0 += term0 * hk;
    term1 *= q / (static_cast<double>(k) * (k + 1));
    i1s += term1;
    s1 += term1 * (2.0 * hk + 1.0 / (k + 1));
    if (term0 < 1e-19 * i0 && k > 3) break;
  }
  const double i1 = 0.5 * x * i1s;
  *k0_out = -(lh + euler_gamma) * i0 + s0;
  *k1_out = 1.0 / x + lh * i1 - 0.25 * x * (s1 - 2.0 * euler_gamma * i1s);
}

// Asymptotic expansion sum for e^x K_nu(x) / sqrt(pi/(2x)), truncated at the
// smallest term. Adequate (rel err < 1e-9) for x >= kBesselSwitch.
double bessel_k_asym_sum(double four_nu_sq, double x) {
  double sum = 1.0;
  double term = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double num = four_nu_sq - static_cast<double>(2 * k - 1) * (2 * k - 1);
    term *= num / (8.0 * x * k);
    if (std::fabs(term) >= std::fabs(prev)) break;  // divergence floor reached
    sum += term;
    prev = term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_k0_scaled(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_k0: x must be positive");
  if (x <= kBesselSwitch) {
    double k0, k1;
    bessel_k01_series(x, &k0, &k1);
    return k0 * std::exp(x);
  }
  return std::sqrt(1.5707963267948966192 / x) * bessel_k_asym_sum(0.0, x);
}

double bessel_k1_scaled(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_k1: x must be positive");
  if (x <= kBesselSwitch) {
    double k0, k1;
    bessel_k01_series(x, &k0, &k1);
    return k1 * std::exp(x);
  }
  return std::sqrt(1.5707963267948966192 / x) * bessel_k_asym_sum(4.0, x);
}

double bessel_k0(double x) { return bessel_k0_scaled(x) * std::exp(-x); }
double bessel_k1(double x) { return bessel_k1_scaled(x) * std::exp(-x); }

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be positive");
  nu = std::fabs(nu);
  const double twice = 2.0 * nu;
  const double nearest = std::round(twice);
  if (std::fabs(twice - nearest) < 1e-12) {
    const int n2 = static_cast<int>(nearest);
    if (n2 % 2 == 0) {
      // integer order, forward recurrence K_{m+1} = K_{m-1} + (2m/x) K_m
      const int n = n2 / 2;
      if (n == 0) return bessel_k0(x);
      if (n == 1) return bessel_k1(x);
      double km1 = bessel_k0(x);
      double km = bessel_k1(x);
      for (int m = 1; m < n; ++m) {
        const double next = km1 + (2.0 * m / x) * km;
        km1 = km;
        km = next;
      }
      return km;
    }
    // half-integer order n + 1/2, seeded by K_{-1/2} = K_{1/2} = sqrt(pi/(2x)) e^{-x}
    const int n = (n2 - 1) / 2;
    const double half = std::sqrt(1.5707963267948966192 / x) * std::exp(-x);
    double km1 = half;
    double km = half;
    for (int m = 0; m < n; ++m) {
      const double next = km1 + (2.0 * (m + 0.5) / x) * km;
      km1 = km;
      km = next;
    }
    return km;
  }
  // cosh integral representation K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt.
  // The integrand is negligible once x cosh t exceeds ~ x + 45 log(10).
  const double tmax = std::acosh((std::min(740.0, x + 110.0)) / x);
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  return integrate(
      [nu, x](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); }, 0.0, tmax,
      opt);
}

}  // namespace ordlab
