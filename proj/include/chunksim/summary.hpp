#ifndef CHUNKSIM_SUMMARY_HPP
#define CHUNKSIM_SUMMARY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "chunksim/errors.hpp"

namespace chunksim {

// Neumaier-compensated accumulator; order of additions changes the result by
// at most a few ulps, which keeps aggregation permutation-invariant in
// practice.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Monte Carlo point estimate with a two-sided normal CI.
struct EstimateSummary {
  double mean = 0.0;
  double ci_half_width = 0.0;
  double std_error = 0.0;
  long long replications = 0;
  std::uint64_t base_seed = 0;
  double confidence_level = 0.95;
};

// Quantile of the standard normal (Acklam's rational approximation,
// |relative error| < 1.2e-9).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

// Mean / SE / CI of per-replication statistics. Compensated two-pass
// computation, so permuting values moves the result by ulps only.
EstimateSummary summarize(const std::vector<double>& values,
                          std::uint64_t base_seed,
                          double confidence_level = 0.95);

}  // namespace chunksim

#endif  // CHUNKSIM_SUMMARY_HPP
