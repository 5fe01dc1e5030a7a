#include "chunksim/rng.hpp"

#include <cmath>

namespace chunksim {

namespace {

// Poisson by inversion (unconditionally correct, O(mean) uniforms).
long long poisson_small(double mean, RngStream& rng) {
  const double limit = std::exp(-mean);
  double prod = 1.0;
  long long k = -1;
  do {
    prod *= rng.uniform_pos();
    ++k;
  } while (prod > limit);
  return k;
}

// Poisson by transformed rejection (Hormann PTRS), valid for mean >= 10.
long long poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform_pos();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        kf * loglam - mean - std::lgamma(kf + 1.0)) {
      return static_cast<long long>(kf);
    }
  }
}

}  // namespace

long long RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw InvalidParameter("poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_small(mean, *this);
  return poisson_ptrs(mean, *this);
}

// Marsaglia-Tsang; for shape < 1 boosted via the U^(1/shape) trick.
double RngStream::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw InvalidParameter("gamma shape and scale must be positive");
  if (shape < 1.0) {
    const double u = uniform_pos();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

long long RngStream::binomial(long long n, double p) {
  if (n < 0) throw InvalidParameter("binomial n must be >= 0");
  if (!(p >= 0.0) || p > 1.0) throw InvalidParameter("binomial p in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  // Count successes as the number of inter-success geometric gaps that fit
  // in n trials: O(n*p) instead of O(n) draws.
  long long count = 0;
  long long pos = -1;
  for (;;) {
    pos += geometric_failures(p) + 1;
    if (pos >= n) break;
    ++count;
  }
  return count;
}

long long RngStream::negative_binomial(double r, double p_success) {
  if (!(r > 0.0)) throw InvalidParameter("negative_binomial r must be > 0");
  if (!(p_success > 0.0) || p_success > 1.0)
    throw InvalidParameter("negative_binomial p in (0,1]");
  if (p_success == 1.0) return 0;
  if (r <= 64.0 && r == std::floor(r)) {
    long long total = 0;
    for (long long i = 0; i < static_cast<long long>(r); ++i)
      total += geometric_failures(p_success);
    return total;
  }
  const double lambda = gamma(r, (1.0 - p_success) / p_success);
  return poisson(lambda);
}

}  // namespace chunksim
