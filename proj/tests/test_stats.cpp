#include <doctest.h>

#include <cmath>

#include "chunksim/rng.hpp"
#include "chunksim/stats.hpp"

using namespace chunksim;

TEST_CASE("chi2 survival function reference values") {
  CHECK(chi2_sf(10.0, 5.0) == doctest::Approx(0.07523524614651217).epsilon(1e-10));
  CHECK(chi2_sf(3.2, 7.0) == doctest::Approx(0.8659047417360984).epsilon(1e-10));
  CHECK(chi2_sf(55.7, 40.0) == doctest::Approx(0.0505437975777338).epsilon(1e-10));
  CHECK(chi2_sf(0.0, 4.0) == doctest::Approx(1.0));
}

TEST_CASE("two-sample KS reference value") {
  std::vector<double> x = {0.1, 0.2, 0.35, 0.5, 0.8, 1.2, 1.5};
  std::vector<double> y = {0.15, 0.3, 0.45, 0.55, 0.62, 0.9, 1.1, 1.6, 2.0};
  KsResult r = ks_two_sample(x, y);
  CHECK(r.statistic == doctest::Approx(0.23809523809523808).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.9541101005435239).epsilon(1e-9));
}

TEST_CASE("KS separates distinct distributions and accepts equal ones") {
  RngStream rng(31, 0);
  std::vector<double> a(4000), b(4000), c(4000);
  for (auto& v : a) v = rng.exponential(1.0);
  for (auto& v : b) v = rng.exponential(1.0);
  for (auto& v : c) v = rng.exponential(1.6);
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("chi2 geometric fit accepts geometric data, rejects shifted data") {
  RngStream rng(32, 0);
  const double success = std::exp(-1.0);
  std::vector<long long> good(10'000), bad(10'000);
  for (auto& v : good) v = 1 + rng.geometric_failures(success);
  for (auto& v : bad) v = 1 + rng.geometric_failures(success * 1.25);
  CHECK(chi2_geometric_fit(good, success).p_value > 0.001);
  CHECK(chi2_geometric_fit(bad, success).p_value < 1e-6);
}

TEST_CASE("affine fit recovers exact lines and reports residuals") {
  std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
  std::vector<double> y = {1.0, 3.0, 5.0, 7.0};
  AffineFit f = fit_affine(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.max_rel_residual < 1e-12);

  std::vector<double> y2 = {1.0, 3.0, 5.0, 8.0};
  AffineFit g = fit_affine(x, y2);
  CHECK(g.max_rel_residual > 0.01);
}

TEST_CASE("pearson correlation sanity") {
  std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y = {2, 4, 6, 8, 10};
  CHECK(pearson_correlation(x, y) == doctest::Approx(1.0));
  std::vector<double> z = {5, 1, 4, 2, 3};
  CHECK(std::abs(pearson_correlation(x, z)) < 0.75);
}
