// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar special functions: standard normal CDF / inverse CDF and the
// modified Bessel functions of the third kind K0, K1 (plus real order
// through recurrence or the cosh integral representation).

namespace ordlab {

// P(Z <= x) for Z ~ N(0,1).
double normal_cdf(double x);

// Inverse of normal_cdf on (0,1). Acklam's rational approximation with one
// Halley refinement step; absolute error below 1e-13 over (1e-300, 1-1e-16).
double normal_icdf(double p);

// E (Z - a)_+ for Z ~ N(0, sigma^2): sigma*phi(a/sigma) - a*(1 - Phi(a/sigma)).
double normal_stop_loss(double sigma, double a);

// Modified Bessel functions K0(x), K1(x) for x > 0.
//
// Ascending series for x <= kBesselSwitch, minimal-term truncation of the
// large-argument asymptotic expansion above. The switchover sits where the
// series cancellation error and the smallest asymptotic term are both below
// 1e-8 relative in double precision.
inline constexpr double kBesselSwitch = 10.0;

double bessel_k0(double x);
double bessel_k1(double x);

// Exponentially scaled variants e^x K(x); usable up to very large x where
// the unscaled value underflows.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

// K_nu(x) for real order nu >= 0 (K_{-nu} = K_nu). Integer and half-integer
// orders use forward recurrence from the closed-form seeds; other orders
// fall back to adaptive quadrature of the cosh integral representation.
double bessel_k(double nu, double x);

}  // namespace ordlab
