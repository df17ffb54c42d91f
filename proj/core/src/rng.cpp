// SPDX-License-Identifier: Apache-2.0
#include "ordlab/rng.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "ordlab/special.hpp"

namespace ordlab {

double RngEngine::normal() { return normal_icdf(uniform01()); }

double RngEngine::exponential(double rate) { return -std::log(uniform01()) / rate; }

std::int64_t RngEngine::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    // Knuth: multiply uniforms until the product drops below e^-mean.
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = uniform01();
    while (prod > limit) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }
  // Hoermann's PTRD transformed rejection (W. Hoermann, "The transformed
  // rejection method for generating Poisson random variables", 1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    double u;
    double v = uniform01();
    if (v <= 0.86 * v_r) {
      u = v / v_r - 0.43;
      return static_cast<std::int64_t>(
          std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
    }
    if (v >= v_r) {
      u = uniform01() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0 ? -0.5 : 0.5) - u;
      v = uniform01() * v_r;
    }
    const double us = 0.5 - std::fabs(u);
    if (us < 0.013 && v > us) continue;
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    v = v * inv_alpha / (a / (us * us) + b);
    if (k >= 10.0) {
      const double log_sqrt_2pi = 0.91893853320467267;
      if (std::log(v * smu) <=
          (k + 0.5) * std::log(mean / k) - mean - log_sqrt_2pi + k -
              (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
        return static_cast<std::int64_t>(k);
      }
    } else if (k >= 0.0) {
      // lgamma is exact enough in the small-k branch
      if (std::log(v) <= k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
        return static_cast<std::int64_t>(k);
      }
    }
  }
}

void parallel_for(std::size_t n, int num_threads, const std::function<void(std::size_t)>& body) {
  if (num_threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      // contiguous block split: indices [w*n/W, (w+1)*n/W)
      const std::size_t lo = w * n / workers;
      const std::size_t hi = (w + 1) * n / workers;
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ordlab
