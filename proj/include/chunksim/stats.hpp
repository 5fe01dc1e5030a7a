// Goodness-of-fit and regression helpers used by the validation suite and
// the test oracles.

#ifndef CHUNKSIM_STATS_HPP
#define CHUNKSIM_STATS_HPP

#include <functional>
#include <vector>

namespace chunksim {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Upper tail of the chi-squared distribution with k degrees of freedom.
double chi2_sf(double x, double k);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value (Stephens'
// effective-sample-size correction). Conservative on tied/integer data.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  long long dof = 0;
};

// Pearson chi-squared test of observed counts against expected counts
// (already scaled to the same total). Cells are assumed pre-binned so that
// expected counts are not tiny.
Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected);

// Bins integer samples >= 1 against Geometric{1,2,...}(success) and runs the
// chi-squared fit; the right tail is merged so every expected count is at
// least min_expected.
Chi2Result chi2_geometric_fit(const std::vector<long long>& samples,
                              double success, double min_expected = 5.0);

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_rel_residual = 0.0;
};

// Least-squares y ~ intercept + slope * x; max_rel_residual is
// max |fit - y| / max(|y|, floor).
AffineFit fit_affine(const std::vector<double>& x,
                     const std::vector<double>& y,
                     double denom_floor = 1e-12);

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

}  // namespace chunksim

#endif  // CHUNKSIM_STATS_HPP
