// Closed-form stability thresholds, the stationary law of the regenerating
// birth-death process, and the regime classifier for the one- and two-chunk
// networks.

#ifndef CHUNKSIM_ANALYSIS_HPP
#define CHUNKSIM_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "chunksim/processes.hpp"
#include "chunksim/summary.hpp"

namespace chunksim {

enum class ThresholdModel {
  FreeOrOne,   // transfer capacity max(y1,1); critical rate nu*E(Y1)
  FreePlusOne, // transfer capacity y1+1; critical rate mu*nu/(nu-mu)
  TwoChunk,    // bottleneck formula of the two-chunk network (mu = mu2)
};

// Maximal stable arrival rate. FreeOrOne / TwoChunk return
// delta*mu / ((1-rho)(1-log(1-rho))) with rho = delta*mu/nu, or +infinity
// when rho >= 1 (the second coordinate itself is transient). FreePlusOne
// requires nu > mu and returns mu*nu/(nu-mu).
double lambda_star(ThresholdModel model, double mu, double nu,
                   double delta = 1.0);

// Smaller root of (1-x) h^2 - (2-x) h + (1-x) = 0, evaluated in the
// cancellation-free conjugate form 2(1-x) / (2-x + sqrt(x(4-3x))).
double eta_star(double x);

// Exponential-moment bound mu_z / ((1-eta)(mu_z - eta(mu_z - nu))); equals
// mu_z/nu exactly at eta = eta_star(nu/mu_z).
double gamma_eta(double eta, double mu_z, double nu);

// Smallest truncation level whose closed-form tail mass is below tol.
long long stationary_required_zmax(double rho, double tol = 1e-10);

// Stationary law of the regenerating birth-death process with rho = mu/nu:
// pi(0) = 1/(1 - log(1-rho)), pi(z) = pi(0) rho^z / z, truncated at z_max
// and renormalized. Throws (naming the required level) when z_max is too
// small for the default 1e-10 tail tolerance.
std::vector<double> birth_death_stationary(double rho, long long z_max);

// Independent route to the same law: dense linear solve of the truncated
// balance equations pi Q = 0 with sum(pi) = 1. Kept free of the product-form
// shortcut so the two can check each other.
std::vector<double> birth_death_stationary_solve(double rho, long long z_max);

enum class Verdict { Ergodic, Transient, Critical, Inconclusive };

struct StabilityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string regime;
  std::optional<double> threshold;
  std::string citation;
  std::string note;
};

std::string to_string(Verdict v);

// Flags whether a long-run estimate settled: `stabilized` means the value
// moved < 5% when the horizon doubled; max_to_sum_ratio near 1 means a
// single replication dominates (heavy tail / possible divergence).
struct TailDiagnostic {
  double max_to_sum_ratio = 0.0;
  bool stabilized = false;
};

// Regime classification of the single-chunk network. The rate function must
// tend to 1 in the first coordinate; otherwise the result is Inconclusive.
StabilityVerdict classify_single_chunk(const SingleChunkParams& params);

// Regime classification of the two-chunk network. Case mu2 - nu > mu1 needs
// a saturated-throughput estimate (lambda_s) and the estimate is only
// consulted when its diagnostic says it stabilized and its CI separates it
// from lambda.
StabilityVerdict classify_two_chunk(
    const TwoChunkParams& params,
    const std::optional<EstimateSummary>& lambda_s = std::nullopt,
    const std::optional<TailDiagnostic>& lambda_s_diag = std::nullopt);

}  // namespace chunksim

#endif  // CHUNKSIM_ANALYSIS_HPP
