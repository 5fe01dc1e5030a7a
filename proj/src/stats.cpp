#include "chunksim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "chunksim/errors.hpp"
#include "chunksim/summary.hpp"

namespace chunksim {

namespace {

// Lower incomplete gamma P(a,x) by series (x < a+1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma Q(a,x) by Lentz continued fraction (x >= a+1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Asymptotic Kolmogorov tail: 2 sum (-1)^{k-1} exp(-2 k^2 lam^2).
double kolmogorov_tail(double lam) {
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lam * lam);
    sum += sign * 2.0 * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::min(std::max(sum, 0.0), 1.0);
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0))
    throw InvalidParameter("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, double k) { return gamma_q(k / 2.0, x / 2.0); }

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw InvalidParameter("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  return {d, kolmogorov_tail(lam)};
}

Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw InvalidParameter("chi2_gof: need matching bins (>= 2)");
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (!(expected[k] > 0.0))
      throw InvalidParameter("chi2_gof: expected counts must be positive");
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
  }
  const long long dof = static_cast<long long>(observed.size()) - 1;
  return {stat, chi2_sf(stat, static_cast<double>(dof)), dof};
}

Chi2Result chi2_geometric_fit(const std::vector<long long>& samples,
                              double success, double min_expected) {
  if (!(success > 0.0) || !(success < 1.0))
    throw InvalidParameter("geometric fit: success must be in (0,1)");
  const double n = static_cast<double>(samples.size());
  // Head bins 1..K each with expected n*s(1-s)^{k-1} >= min_expected, tail
  // bin {> K} takes the rest.
  long long K = 1;
  double pk = success;
  while (n * pk * (1.0 - success) >= min_expected && K < 4096) {
    pk *= 1.0 - success;
    ++K;
  }
  std::vector<double> obs(static_cast<std::size_t>(K) + 1, 0.0);
  for (long long v : samples) {
    if (v < 1) throw InvalidParameter("geometric fit: samples must be >= 1");
    const long long bin = std::min(v - 1, K);
    obs[static_cast<std::size_t>(bin)] += 1.0;
  }
  std::vector<double> exp_counts(static_cast<std::size_t>(K) + 1, 0.0);
  double tail = 1.0;
  double p = success;
  for (long long k = 0; k < K; ++k) {
    exp_counts[static_cast<std::size_t>(k)] = n * p;
    tail -= p;
    p *= 1.0 - success;
  }
  exp_counts[static_cast<std::size_t>(K)] = n * tail;
  return chi2_gof(obs, exp_counts);
}

AffineFit fit_affine(const std::vector<double>& x,
                     const std::vector<double>& y, double denom_floor) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidParameter("fit_affine: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw InvalidParameter("fit_affine: degenerate x values");
  AffineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double pred = fit.intercept + fit.slope * x[k];
    const double rel =
        std::abs(pred - y[k]) / std::max(std::abs(y[k]), denom_floor);
    fit.max_rel_residual = std::max(fit.max_rel_residual, rel);
  }
  return fit;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidParameter("correlation: need matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace chunksim
