#include "chunksim/analysis.hpp"

#include <cmath>
#include <limits>

namespace chunksim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative comparison with a 1e-12 tolerance band; doubles that encode the
// same rational land inside the band, everything else separates cleanly.
int compare_tol(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  if (std::abs(a - b) <= 1e-12 * scale) return 0;
  return a < b ? -1 : 1;
}

}  // namespace

double lambda_star(ThresholdModel model, double mu, double nu, double delta) {
  if (!(mu > 0.0) || !(nu > 0.0))
    throw InvalidParameter("lambda_star: mu and nu must be > 0");
  if (model == ThresholdModel::FreePlusOne) {
    if (delta != 1.0)
      throw InvalidParameter("lambda_star: FreePlusOne has no delta");
    if (!(nu > mu))
      throw InvalidParameter("lambda_star: FreePlusOne needs nu > mu");
    return mu * nu / (nu - mu);
  }
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParameter("lambda_star: delta must be in (0,1]");
  const double rho = delta * mu / nu;
  if (rho >= 1.0) return kInf;  // second coordinate transient
  return delta * mu / ((1.0 - rho) * (1.0 - std::log1p(-rho)));
}

double eta_star(double x) {
  if (!(x > 0.0) || !(x < 1.0))
    throw InvalidParameter("eta_star: x must be in (0,1)");
  return 2.0 * (1.0 - x) / (2.0 - x + std::sqrt(x * (4.0 - 3.0 * x)));
}

double gamma_eta(double eta, double mu_z, double nu) {
  if (!(mu_z > 0.0) || !(nu > 0.0))
    throw InvalidParameter("gamma_eta: mu_z and nu must be > 0");
  if (!(eta >= 0.0) || !(eta < 1.0))
    throw InvalidParameter("gamma_eta: eta must be in [0,1)");
  const double alpha = mu_z - nu;
  if (!(mu_z - eta * alpha > 0.0))
    throw InvalidParameter("gamma_eta: need eta*(mu_z - nu) < mu_z");
  return mu_z / ((1.0 - eta) * (mu_z - eta * alpha));
}

long long stationary_required_zmax(double rho, double tol) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw InvalidParameter("stationary law: rho must be in (0,1)");
  // Tail bound: sum_{z>m} rho^z/z <= rho^{m+1} / ((m+1)(1-rho)).
  double term = rho;
  for (long long m = 1; m < 1'000'000; ++m) {
    term *= rho;
    if (term / (static_cast<double>(m + 1) * (1.0 - rho)) < tol) return m;
  }
  throw InvalidParameter("stationary law: rho too close to 1");
}

std::vector<double> birth_death_stationary(double rho, long long z_max) {
  const long long needed = stationary_required_zmax(rho);
  if (z_max < needed)
    throw InvalidParameter(
        "stationary law: z_max too small for the 1e-10 tail tolerance; need "
        "at least " +
        std::to_string(needed));
  std::vector<double> pi(static_cast<std::size_t>(z_max) + 1);
  pi[0] = 1.0;
  double power = 1.0;
  for (long long z = 1; z <= z_max; ++z) {
    power *= rho;
    pi[static_cast<std::size_t>(z)] = power / static_cast<double>(z);
  }
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;
  return pi;
}

std::vector<double> birth_death_stationary_solve(double rho, long long z_max) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw InvalidParameter("stationary solve: rho must be in (0,1)");
  if (z_max < 1) throw InvalidParameter("stationary solve: z_max >= 1");
  // Work with mu = rho, nu = 1 (the law depends on rho only). Unknowns
  // pi(0..m); equations: balance of Q^T pi = 0 for states 0..m-1, plus
  // normalization in the last row.
  const std::size_t n = static_cast<std::size_t>(z_max) + 1;
  std::vector<double> a(n * n, 0.0), rhs(n, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& {
    return a[r * n + c];
  };
  const double mu = rho, nu = 1.0;
  auto birth = [&](std::size_t z) {
    return mu * std::max<double>(static_cast<double>(z), 1.0);
  };
  auto death = [&](std::size_t z) { return nu * static_cast<double>(z); };
  for (std::size_t z = 0; z + 1 < n; ++z) {
    // inflow - outflow for state z
    if (z > 0) at(z, z - 1) += birth(z - 1);
    at(z, z) -= birth(z) + death(z);
    at(z, z + 1) += death(z + 1);
  }
  for (std::size_t c = 0; c < n; ++c) at(n - 1, c) = 1.0;
  rhs[n - 1] = 1.0;

  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    if (std::abs(at(pivot, col)) < 1e-300)
      throw ModelError("stationary solve: singular system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(at(pivot, c), at(col, c));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = at(r, col) / at(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) at(r, c) -= f * at(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> pi(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= at(r, c) * pi[c];
    pi[r] = s / at(r, r);
  }
  return pi;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ergodic: return "Ergodic";
    case Verdict::Transient: return "Transient";
    case Verdict::Critical: return "Critical";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

StabilityVerdict classify_single_chunk(const SingleChunkParams& params) {
  params.validate();
  StabilityVerdict out;

  const auto cond_c = params.rate_fn.satisfies_condition_c();
  if (!cond_c.has_value() || !*cond_c) {
    out.verdict = Verdict::Inconclusive;
    out.regime = "single-chunk";
    out.note = "rate function '" + params.rate_fn.label() +
               "' does not converge to 1 in the first coordinate; the "
               "ergodicity criterion does not apply";
    return out;
  }

  if (params.boundary == BoundaryKind::PlusOne) {
    // Same trichotomy; only the threshold formula changes (and only matters
    // when nu > mu).
    if (compare_tol(params.mu, params.nu) >= 0) {
      out.verdict = Verdict::Ergodic;
      out.regime = "single-chunk mu >= nu (permanent node)";
      out.citation = "Ergodicity criterion";
      return out;
    }
    const double threshold =
        lambda_star(ThresholdModel::FreePlusOne, params.mu, params.nu);
    out.threshold = threshold;
    out.citation = "Boundary-variant threshold";
    const int c = compare_tol(params.lambda, threshold);
    out.verdict = c < 0   ? Verdict::Ergodic
                  : c > 0 ? Verdict::Transient
                          : Verdict::Critical;
    out.regime = "single-chunk mu < nu (permanent node)";
    return out;
  }

  if (compare_tol(params.mu, params.nu) >= 0) {
    out.verdict = Verdict::Ergodic;
    out.regime = "single-chunk mu >= nu";
    out.citation = "Ergodicity Prop.";
    return out;
  }
  const double threshold =
      lambda_star(ThresholdModel::FreeOrOne, params.mu, params.nu);
  out.threshold = threshold;
  out.regime = "single-chunk mu < nu";
  const int c = compare_tol(params.lambda, threshold);
  if (c < 0) {
    out.verdict = Verdict::Ergodic;
    out.citation = "Ergodicity Prop.";
  } else if (c > 0) {
    out.verdict = Verdict::Transient;
    out.citation = "Transience Prop.";
  } else {
    out.verdict = Verdict::Critical;
    out.citation = "untreated boundary lambda = lambda*";
  }
  return out;
}

StabilityVerdict classify_two_chunk(
    const TwoChunkParams& params,
    const std::optional<EstimateSummary>& lambda_s,
    const std::optional<TailDiagnostic>& lambda_s_diag) {
  params.validate();
  StabilityVerdict out;

  const int c_mu2_nu = compare_tol(params.mu2, params.nu);
  const int c_gap_mu1 = compare_tol(params.mu2 - params.nu, params.mu1);

  if (c_mu2_nu > 0 && c_gap_mu1 < 0) {
    // case 1: mu1 > mu2 - nu > 0
    out.verdict = Verdict::Ergodic;
    out.regime = "two-chunk case 1";
    out.citation = "Two-chunk Prop. (1)";
    return out;
  }
  if (c_mu2_nu > 0 && c_gap_mu1 > 0) {
    // case 2: mu2 - nu > mu1; threshold is the saturated throughput.
    out.regime = "two-chunk case 2";
    out.citation = "Two-chunk Prop. (2)";
    if (!lambda_s.has_value()) {
      out.verdict = Verdict::Inconclusive;
      out.note = "needs a saturated-throughput estimate (lambda_s)";
      return out;
    }
    if (lambda_s_diag.has_value() && !lambda_s_diag->stabilized) {
      out.verdict = Verdict::Inconclusive;
      out.note = "lambda_s estimate did not stabilize (possibly infinite)";
      return out;
    }
    out.threshold = lambda_s->mean;
    if (params.lambda < lambda_s->mean - lambda_s->ci_half_width)
      out.verdict = Verdict::Ergodic;
    else if (params.lambda > lambda_s->mean + lambda_s->ci_half_width)
      out.verdict = Verdict::Transient;
    else {
      out.verdict = Verdict::Inconclusive;
      out.note = "lambda inside the lambda_s confidence interval";
    }
    return out;
  }
  if (c_mu2_nu < 0) {
    // case 3: nu > mu2
    const double threshold =
        lambda_star(ThresholdModel::TwoChunk, params.mu2, params.nu);
    out.threshold = threshold;
    out.regime = "two-chunk case 3";
    const int c = compare_tol(params.lambda, threshold);
    if (c < 0) {
      out.verdict = Verdict::Ergodic;
      out.citation = "Two-chunk Prop. (3)";
    } else if (c > 0) {
      out.verdict = Verdict::Transient;
      out.citation = "Two-chunk Prop. (3)";
    } else {
      out.verdict = Verdict::Critical;
      out.citation = "untreated boundary lambda = lambda*";
    }
    return out;
  }

  out.verdict = Verdict::Inconclusive;
  out.regime = "two-chunk boundary";
  out.note = c_mu2_nu == 0 ? "mu2 = nu is not covered"
                           : "mu2 - nu = mu1 is not covered";
  return out;
}

}  // namespace chunksim
