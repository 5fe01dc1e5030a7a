#include "chunksim/summary.hpp"

#include <cmath>

namespace chunksim {

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw InvalidParameter("normal_quantile needs p in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

EstimateSummary summarize(const std::vector<double>& values,
                          std::uint64_t base_seed, double confidence_level) {
  if (values.empty()) throw InvalidParameter("summarize: no values");
  if (!(confidence_level > 0.0) || !(confidence_level < 1.0))
    throw InvalidParameter("confidence level in (0,1)");

  const auto n = static_cast<long long>(values.size());
  KahanSum total;
  for (double v : values) total.add(v);
  const double mean = total.value() / static_cast<double>(n);

  EstimateSummary s;
  s.mean = mean;
  s.replications = n;
  s.base_seed = base_seed;
  s.confidence_level = confidence_level;
  if (n >= 2) {
    KahanSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    const double var = sq.value() / static_cast<double>(n - 1);
    s.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    const double z = normal_quantile(0.5 + confidence_level / 2.0);
    s.ci_half_width = z * s.std_error;
  }
  return s;
}

}  // namespace chunksim
