// Monte Carlo estimators for the limit quantities: stationary departure
// rates, linear growth slopes, survival frequencies, discounted birth sums,
// and the logarithmic hitting/extinction scalings.

#ifndef CHUNKSIM_ESTIMATORS_HPP
#define CHUNKSIM_ESTIMATORS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "chunksim/analysis.hpp"
#include "chunksim/processes.hpp"
#include "chunksim/replicate.hpp"
#include "chunksim/stats.hpp"

namespace chunksim {

struct StationaryEstimateOptions {
  double horizon = 10'000.0;
  double burn_in = -1.0;  // < 0 means horizon / 5
  long long reps = 8;
  std::uint64_t base_seed = 1;
  long long max_events = 200'000'000;
};

struct StationaryEstimate {
  EstimateSummary summary;
  TailDiagnostic diagnostic;
  long long total_events = 0;
};

// nu * time-average of the departure coordinate after burn-in. spec.model
// must be "rbh" (coordinate 0) or "saturated" (coordinate 1); parameters
// must be in a positive-recurrent regime, except that "saturated" in its
// case-2 regime (mu2 - nu > mu1) is allowed with the outcome reported
// through the stabilization diagnostic (the limit may be infinite).
StationaryEstimate estimate_stationary_departure_rate(
    const ProcessSpec& spec, const StationaryEstimateOptions& opts);

// Mean of X_coordinate(horizon) / horizon over reps.
StationaryEstimate estimate_growth_slope(const ProcessSpec& spec,
                                         std::size_t coordinate,
                                         const StationaryEstimateOptions& opts);

struct SurvivalEstimate {
  EstimateSummary survival_prob;  // fraction of reps with W(horizon) >= 1
  EstimateSummary mw_mean;        // mean of exp(-mu_w * horizon) * W(horizon)
};

SurvivalEstimate estimate_survival(double mu_w, long long w0,
                                   const KillSchedule& kills, double horizon,
                                   long long reps, std::uint64_t base_seed,
                                   long long max_events = 50'000'000);

// Mean over reps of sum_n exp(-gamma * sigma_n) truncated at the horizon,
// with the half-horizon version driving the stabilization flag.
StationaryEstimate estimate_series_sum(double gamma, const RbhParams& rbh,
                                       long long z0, double horizon,
                                       long long reps,
                                       std::uint64_t base_seed);

struct ScalingRow {
  double x = 0.0;  // grid value (w0 or v)
  EstimateSummary mean;
  long long excluded = 0;  // non-extinct runs dropped at the safety horizon
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  AffineFit fit;  // mean versus log(x) or log(1+x)
  bool flagged = false;  // > 1% exclusions somewhere
};

// Mean extinction time H0 of the killed component over a grid of initial
// sizes w0, with an affine fit in log(w0).
ScalingTable estimate_h0_scaling(double mu_w, const RbhParams& rbh,
                                 const std::vector<long long>& w0_grid,
                                 long long reps, std::uint64_t base_seed,
                                 double safety_horizon = 1e4);

// Mean number of V-chain steps to enter [0, K] over a grid of initial
// values, with an affine fit in log(1+v). Grid points with v <= K sit at
// N_K = 0 exactly and are excluded from the fit.
ScalingTable estimate_nk(const VChainParams& params, long long K,
                         const std::vector<long long>& v_grid, long long reps,
                         std::uint64_t base_seed,
                         long long max_steps = 10'000);

}  // namespace chunksim

#endif  // CHUNKSIM_ESTIMATORS_HPP
