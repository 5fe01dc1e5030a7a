#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "chunksim/analysis.hpp"

using namespace chunksim;

TEST_CASE("lambda_star closed forms") {
  CHECK(lambda_star(ThresholdModel::FreeOrOne, 1.0, 2.0) ==
        doctest::Approx(1.1812322182992825).epsilon(1e-14));
  CHECK(lambda_star(ThresholdModel::FreePlusOne, 1.0, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lambda_star(ThresholdModel::TwoChunk, 1.0, 2.0) ==
        doctest::Approx(1.1812322182992825).epsilon(1e-14));
  CHECK(lambda_star(ThresholdModel::FreeOrOne, 0.5, 2.0) ==
        doctest::Approx(0.5177261382519022).epsilon(1e-14));
  CHECK(lambda_star(ThresholdModel::FreeOrOne, 1.5, 2.0) ==
        doctest::Approx(2.5143587051784312).epsilon(1e-14));

  // Second coordinate transient: the threshold is infinite.
  CHECK(std::isinf(lambda_star(ThresholdModel::FreeOrOne, 3.0, 2.0)));
  CHECK(std::isinf(lambda_star(ThresholdModel::FreeOrOne, 2.0, 2.0)));
  CHECK_THROWS_AS(lambda_star(ThresholdModel::FreePlusOne, 2.0, 2.0),
                  InvalidParameter);
  CHECK_THROWS_AS(lambda_star(ThresholdModel::FreePlusOne, 3.0, 2.0),
                  InvalidParameter);
  CHECK_THROWS_AS(lambda_star(ThresholdModel::FreeOrOne, 1.0, 2.0, 1.5),
                  InvalidParameter);
  CHECK_THROWS_AS(lambda_star(ThresholdModel::FreeOrOne, -1.0, 2.0),
                  InvalidParameter);
}

TEST_CASE("eta_star values, limits and root residual") {
  CHECK(eta_star(0.5) == doctest::Approx(0.3819660112501051).epsilon(1e-13));
  CHECK(eta_star(0.1) == doctest::Approx(0.7176243038723211).epsilon(1e-13));
  CHECK(std::abs(eta_star(1e-6) - 1.0) < 1e-2);
  CHECK(std::abs(eta_star(1.0 - 1e-6) - 0.0) < 1e-2);
  CHECK_THROWS_AS(eta_star(0.0), InvalidParameter);
  CHECK_THROWS_AS(eta_star(1.0), InvalidParameter);
  CHECK_THROWS_AS(eta_star(-0.5), InvalidParameter);

  for (int i = 1; i <= 99; ++i) {
    const double x = static_cast<double>(i) / 100.0;
    const double h = eta_star(x);
    const double residual = (1.0 - x) * h * h - (2.0 - x) * h + (1.0 - x);
    CHECK(std::abs(residual) < 1e-12);
  }
}

TEST_CASE("gamma_eta values and the eta_star identity") {
  CHECK(gamma_eta(0.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_eta(0.2, 2.0, 1.0) ==
        doctest::Approx(1.3888888888888888).epsilon(1e-14));
  CHECK(gamma_eta(eta_star(0.5), 2.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  // gamma(eta_star(nu/mu_z)) = mu_z/nu across a grid.
  for (int i = 1; i <= 99; ++i) {
    const double x = static_cast<double>(i) / 100.0;
    const double mu_z = 3.0, nu = 3.0 * x;
    CHECK(std::abs(gamma_eta(eta_star(x), mu_z, nu) - mu_z / nu) < 1e-9);
  }
  CHECK_THROWS_AS(gamma_eta(1.0, 2.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(gamma_eta(-0.1, 2.0, 1.0), InvalidParameter);
}

TEST_CASE("stationary law closed form") {
  auto pi = birth_death_stationary(0.5, 60);
  CHECK(pi[0] == doctest::Approx(0.5906161091496412).epsilon(1e-12));

  // nu * E(Z) reproduces the threshold.
  double mean = 0.0;
  for (std::size_t z = 1; z < pi.size(); ++z)
    mean += static_cast<double>(z) * pi[z];
  CHECK(2.0 * mean == doctest::Approx(1.1812322182992825).epsilon(1e-9));

  // Near-empty system limit.
  auto tiny = birth_death_stationary(1e-6, stationary_required_zmax(1e-6));
  CHECK(tiny[0] == doctest::Approx(1.0).epsilon(1e-5));

  // Insufficient truncation names the required level.
  const long long needed = stationary_required_zmax(0.9);
  try {
    birth_death_stationary(0.9, needed - 1);
    FAIL("expected InvalidParameter");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find(std::to_string(needed)) !=
          std::string::npos);
  }
}

TEST_CASE("stationary law matches the balance-equation solve") {
  for (double rho : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const long long zmax = stationary_required_zmax(rho) + 5;
    auto closed = birth_death_stationary(rho, zmax);
    auto solved = birth_death_stationary_solve(rho, zmax);
    REQUIRE(closed.size() == solved.size());
    double tv = 0.0;
    for (std::size_t z = 0; z < closed.size(); ++z)
      tv += std::abs(closed[z] - solved[z]);
    CHECK(tv / 2.0 < 1e-10);
  }
}

TEST_CASE("lambda_star identities across rho") {
  for (double rho : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double nu = 2.0, mu = rho * nu;
    const long long zmax = stationary_required_zmax(rho) + 5;
    auto pi = birth_death_stationary(rho, zmax);
    double mean = 0.0, mean_or_one = pi[0];
    for (std::size_t z = 1; z < pi.size(); ++z) {
      mean += static_cast<double>(z) * pi[z];
      mean_or_one += static_cast<double>(z) * pi[z];
    }
    const double star = lambda_star(ThresholdModel::FreeOrOne, mu, nu);
    CHECK(std::abs(nu * mean - star) < 1e-9);
    CHECK(std::abs(mu * mean_or_one - star) < 1e-9);
  }
}

TEST_CASE("single-chunk classification") {
  SUBCASE("mu >= nu is stable for any lambda") {
    StabilityVerdict v = classify_single_chunk({9.0, 3.0, 1.0});
    CHECK(v.verdict == Verdict::Ergodic);
    CHECK(v.regime == "single-chunk mu >= nu");
  }
  SUBCASE("heavy arrivals are transient with the printed threshold") {
    StabilityVerdict v = classify_single_chunk({2.0, 1.0, 2.0});
    CHECK(v.verdict == Verdict::Transient);
    REQUIRE(v.threshold.has_value());
    CHECK(*v.threshold == doctest::Approx(1.1812322182992825));
    CHECK(v.citation == "Transience Prop.");
  }
  SUBCASE("light arrivals are ergodic") {
    StabilityVerdict v = classify_single_chunk({1.0, 1.0, 2.0});
    CHECK(v.verdict == Verdict::Ergodic);
  }
  SUBCASE("exactly critical arrivals") {
    const double star = lambda_star(ThresholdModel::FreeOrOne, 1.0, 2.0);
    StabilityVerdict v = classify_single_chunk({star, 1.0, 2.0});
    CHECK(v.verdict == Verdict::Critical);
  }
  SUBCASE("a rate function stuck below 1 is out of scope") {
    StabilityVerdict v =
        classify_single_chunk({2.0, 1.0, 2.0, RateFunction::constant(0.5)});
    CHECK(v.verdict == Verdict::Inconclusive);
    CHECK(v.note.find("constant") != std::string::npos);
  }
  SUBCASE("permanent-node boundary uses mu*nu/(nu-mu)") {
    StabilityVerdict v = classify_single_chunk(
        {1.5, 1.0, 2.0, RateFunction::constant(1.0), BoundaryKind::PlusOne});
    CHECK(v.verdict == Verdict::Ergodic);
    REQUIRE(v.threshold.has_value());
    CHECK(*v.threshold == doctest::Approx(2.0));
    StabilityVerdict w = classify_single_chunk(
        {2.5, 1.0, 2.0, RateFunction::constant(1.0), BoundaryKind::PlusOne});
    CHECK(w.verdict == Verdict::Transient);
  }
}

TEST_CASE("two-chunk classification") {
  SUBCASE("case 1 is ergodic for any lambda") {
    StabilityVerdict v = classify_two_chunk({100.0, 2.0, 3.0, 2.0});
    CHECK(v.verdict == Verdict::Ergodic);
    CHECK(v.regime == "two-chunk case 1");
  }
  SUBCASE("case 3 compares against the bottleneck threshold") {
    StabilityVerdict v = classify_two_chunk({2.0, 1.0, 1.0, 2.0});
    CHECK(v.verdict == Verdict::Transient);
    REQUIRE(v.threshold.has_value());
    CHECK(*v.threshold == doctest::Approx(1.1812322182992825));
    StabilityVerdict w = classify_two_chunk({1.0, 1.0, 1.0, 2.0});
    CHECK(w.verdict == Verdict::Ergodic);
  }
  SUBCASE("case 2 requires a stabilized saturated-throughput estimate") {
    TwoChunkParams p{5.0, 0.5, 4.0, 1.0};
    CHECK(classify_two_chunk(p).verdict == Verdict::Inconclusive);

    EstimateSummary est;
    est.mean = 20.0;
    est.ci_half_width = 0.5;
    TailDiagnostic bad{0.9, false};
    CHECK(classify_two_chunk(p, est, bad).verdict == Verdict::Inconclusive);

    TailDiagnostic good{0.05, true};
    CHECK(classify_two_chunk(p, est, good).verdict == Verdict::Ergodic);
    TwoChunkParams q{25.0, 0.5, 4.0, 1.0};
    CHECK(classify_two_chunk(q, est, good).verdict == Verdict::Transient);
    // lambda inside the CI stays undecided.
    TwoChunkParams r{20.2, 0.5, 4.0, 1.0};
    CHECK(classify_two_chunk(r, est, good).verdict == Verdict::Inconclusive);
  }
  SUBCASE("uncovered boundaries") {
    CHECK(classify_two_chunk({1.0, 1.0, 2.0, 2.0}).verdict ==
          Verdict::Inconclusive);  // mu2 = nu
    CHECK(classify_two_chunk({1.0, 1.0, 3.0, 2.0}).verdict ==
          Verdict::Inconclusive);  // mu2 - nu = mu1
  }
}

TEST_CASE("classification is invariant under time rescaling") {
  for (double c : {0.1, 0.5, 3.0, 17.0}) {
    for (double lambda : {0.5, 1.0, 1.5, 2.5}) {
      StabilityVerdict base = classify_single_chunk({lambda, 1.0, 2.0});
      StabilityVerdict scaled =
          classify_single_chunk({c * lambda, c * 1.0, c * 2.0});
      CHECK(base.verdict == scaled.verdict);
    }
    StabilityVerdict b2 = classify_two_chunk({2.0, 1.0, 1.0, 2.0});
    StabilityVerdict s2 =
        classify_two_chunk({c * 2.0, c * 1.0, c * 1.0, c * 2.0});
    CHECK(b2.verdict == s2.verdict);
  }
}

TEST_CASE("verdict in lambda crosses Ergodic -> Critical -> Transient once") {
  const double star = lambda_star(ThresholdModel::FreeOrOne, 1.0, 2.0);
  int transitions = 0;
  Verdict prev = Verdict::Inconclusive;
  for (double lambda :
       {0.2, 0.6, 1.0, star - 1e-6, star, star + 1e-6, 1.5, 2.0, 5.0}) {
    Verdict v = classify_single_chunk({lambda, 1.0, 2.0}).verdict;
    CHECK(v != Verdict::Inconclusive);
    if (v != prev && prev != Verdict::Inconclusive) ++transitions;
    prev = v;
  }
  CHECK(transitions == 2);  // Ergodic -> Critical -> Transient
}
