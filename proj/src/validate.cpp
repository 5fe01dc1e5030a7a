#include <cmath>
#include <ostream>

#include "chunksim/analysis.hpp"
#include "chunksim/estimators.hpp"
#include "chunksim/io.hpp"
#include "chunksim/runner.hpp"
#include "chunksim/stats.hpp"

namespace chunksim {

namespace {

struct Reporter {
  std::ostream& out;
  bool all_ok = true;
  void check(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
    all_ok = all_ok && ok;
  }
};

std::vector<double> marginal_at(
    const std::function<Trajectory(RngStream&)>& run, double t,
    long long reps, std::uint64_t seed) {
  std::vector<double> values(static_cast<std::size_t>(reps));
  for (long long k = 0; k < reps; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k));
    Trajectory traj = run(rng);
    values[static_cast<std::size_t>(k)] =
        static_cast<double>(traj.coord_at(t, 0));
  }
  return values;
}

}  // namespace

bool run_validation_suite(std::uint64_t seed, std::ostream& out) {
  Reporter rep{out};

  // Martingale mean: E exp(-mu t) Y(t) = Y(0).
  {
    const double t = 1.0;
    const long long n = 2000;
    EstimateSummary s = replicate(n, seed, [&](RngStream& rng) {
      Trajectory y =
          simulate_yule(YuleParams{1.0}, 1, StoppingRule::until(t), rng);
      return std::exp(-t) * static_cast<double>(y.coord_at(t, 0));
    });
    const bool ok = std::abs(s.mean - 1.0) <= 3.0 * s.std_error;
    rep.check("yule_martingale_mean", ok,
              "mean=" + format_double(s.mean) +
                  " se=" + format_double(s.std_error));
  }

  // Marginal law: Y(1) geometric with success exp(-mu).
  {
    const long long n = 3000;
    std::vector<long long> samples;
    samples.reserve(n);
    for (long long k = 0; k < n; ++k) {
      RngStream rng(seed + 1, static_cast<std::uint64_t>(k));
      Trajectory y =
          simulate_yule(YuleParams{1.0}, 1, StoppingRule::until(1.0), rng);
      samples.push_back(y.coord_at(1.0, 0));
    }
    Chi2Result c = chi2_geometric_fit(samples, std::exp(-1.0));
    rep.check("yule_geometric_marginal", c.p_value > 0.001,
              "chi2 p=" + format_double(c.p_value));
  }

  // Same law through the direct chain and the slowed-queue construction.
  {
    const RbhParams p{2.0, 1.0};
    const long long n = 3000;
    auto direct = marginal_at(
        [&](RngStream& rng) {
          return simulate_rbh(p, 0, StoppingRule::until(1.0), rng).trajectory;
        },
        1.0, n, seed + 2);
    auto timechange = marginal_at(
        [&](RngStream& rng) {
          return simulate_z_via_timechange(p, 0, StoppingRule::until(1.0),
                                           rng);
        },
        1.0, n, seed + 3);
    KsResult ks = ks_two_sample(direct, timechange);
    rep.check("representation_equivalence_ks", ks.p_value > 0.001,
              "D=" + format_double(ks.statistic) +
                  " p=" + format_double(ks.p_value));
  }

  // Pathwise coupling orderings (violations throw).
  {
    bool ok = true;
    std::string detail = "1000 joint runs";
    try {
      SingleChunkParams p{1.5, 1.0, 2.0, RateFunction::download_share()};
      for (long long k = 0; k < 500; ++k) {
        RngStream rng(seed + 4, static_cast<std::uint64_t>(k));
        simulate_coupled(CoupledMode::Upper, p, 1.0, 5, 2,
                         StoppingRule::until(30.0), rng);
      }
      SingleChunkParams q{1.5, 1.0, 2.0, RateFunction::capped_ratio(1.0)};
      for (long long k = 0; k < 500; ++k) {
        RngStream rng(seed + 5, static_cast<std::uint64_t>(k));
        simulate_coupled(CoupledMode::Lower, q, 0.5, 20, 2,
                         StoppingRule::until(30.0), rng);
      }
    } catch (const CouplingOrderingError& e) {
      ok = false;
      detail = e.what();
    }
    rep.check("coupling_orderings", ok, detail);
  }

  // Pathwise bound Z(H0) - Z(0) <= exp(mu_w H0) * M*_Y.
  {
    bool ok = true;
    const RbhParams p{2.0, 1.0};
    for (long long k = 0; k < 500 && ok; ++k) {
      RngStream rng(seed + 6, static_cast<std::uint64_t>(k));
      WzOutcome wz = run_wz_to_extinction(0.1, p, 1, 0, rng, 1e4);
      ok = wz.extinct &&
           static_cast<double>(wz.z_at_h0) <=
               std::exp(0.1 * wz.h0) * wz.my_star + 1e-9;
    }
    rep.check("wz_pathwise_bound", ok, "500 runs");
  }

  // Closed-form threshold against the stationary law it summarizes.
  {
    double worst = 0.0;
    for (double rho : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double nu = 2.0, mu = rho * nu;
      const long long zmax = stationary_required_zmax(rho) + 8;
      auto pi = birth_death_stationary(rho, zmax);
      double mean = 0.0, mean_or_one = pi[0];
      for (std::size_t z = 1; z < pi.size(); ++z) {
        mean += static_cast<double>(z) * pi[z];
        mean_or_one += static_cast<double>(z) * pi[z];
      }
      const double star = lambda_star(ThresholdModel::FreeOrOne, mu, nu);
      worst = std::max(worst, std::abs(nu * mean - star));
      worst = std::max(worst, std::abs(mu * mean_or_one - star));
    }
    rep.check("lambda_star_identities", worst < 1e-9,
              "max deviation=" + format_double(worst));
  }

  // Product-form stationary law versus the balance-equation solve.
  {
    double worst_tv = 0.0;
    for (double rho : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const long long zmax = stationary_required_zmax(rho) + 8;
      auto closed = birth_death_stationary(rho, zmax);
      auto solved = birth_death_stationary_solve(rho, zmax);
      double tv = 0.0;
      for (std::size_t z = 0; z < closed.size(); ++z)
        tv += std::abs(closed[z] - solved[z]);
      worst_tv = std::max(worst_tv, tv / 2.0);
    }
    rep.check("stationary_law_oracle", worst_tv < 1e-10,
              "max TV=" + format_double(worst_tv));
  }

  // eta* root quality and the gamma identity at the root.
  {
    double worst_res = 0.0, worst_gamma = 0.0;
    for (int i = 1; i <= 99; ++i) {
      const double x = static_cast<double>(i) / 100.0;
      const double h = eta_star(x);
      worst_res = std::max(
          worst_res,
          std::abs((1.0 - x) * h * h - (2.0 - x) * h + (1.0 - x)));
      const double mu_z = 2.0, nu = 2.0 * x;  // so x = nu / mu_z
      worst_gamma = std::max(
          worst_gamma, std::abs(gamma_eta(eta_star(x), mu_z, nu) - mu_z / nu));
    }
    rep.check("eta_star_quadratic_and_gamma", worst_res < 1e-12 &&
                                                  worst_gamma < 1e-9,
              "residual=" + format_double(worst_res) +
                  " gamma_dev=" + format_double(worst_gamma));
  }

  return rep.all_ok;
}

}  // namespace chunksim
