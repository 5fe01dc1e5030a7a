// The process zoo: pure-birth and birth-death populations, the single- and
// two-chunk file-sharing networks, the saturated two-queue system, and the
// joint constructions (killed populations, monotone couplings, the embedded
// V-chain) that tie them together.

#ifndef CHUNKSIM_PROCESSES_HPP
#define CHUNKSIM_PROCESSES_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chunksim/ctmc.hpp"
#include "chunksim/rng.hpp"
#include "chunksim/trajectory.hpp"

namespace chunksim {

// ---------------------------------------------------------------------------
// Parameter bundles
// ---------------------------------------------------------------------------

// Pure birth: each individual spawns at rate mu.
struct YuleParams {
  double mu;
  void validate() const {
    if (!(mu > 0.0)) throw InvalidParameter("yule: mu must be > 0");
  }
};

// Birth-death with a regenerating boundary: up at mu_z*max(z,1), down at
// nu*z. Supercritical growth rate alpha = mu_z - nu.
struct RbhParams {
  double mu_z;
  double nu;
  void validate() const {
    if (!(mu_z > 0.0)) throw InvalidParameter("rbh: mu_z must be > 0");
    if (!(nu > 0.0)) throw InvalidParameter("rbh: nu must be > 0");
  }
  double alpha() const { return mu_z - nu; }
  double split_rate() const { return mu_z + nu; }
  double split_prob() const { return mu_z / (mu_z + nu); }
  double extinction_prob() const { return nu / mu_z; }
};

// Deterministic (or tabulated) kill epochs sigma_1 <= sigma_2 <= ..., all
// positive. Backed either by an explicit prefix or by an index formula.
class KillSchedule {
 public:
  static KillSchedule from_epochs(std::vector<double> epochs);
  // sigma_n = spacing * n
  static KillSchedule linear(double spacing);
  // sigma_n = scale * log(1 + n); sums of exp(-mu*sigma_n) diverge for
  // mu*scale <= 1.
  static KillSchedule logarithmic(double scale);
  static KillSchedule none();

  // 1-based. +infinity once a finite prefix is exhausted.
  double epoch(std::size_t n) const;
  bool empty() const;

 private:
  std::function<double(std::size_t)> fn_;
  std::vector<double> prefix_;
};

// Ordered positive-jump instants of a path plus their counting function.
struct BirthLog {
  std::vector<double> sigma;
  // Number of birth epochs <= t.
  std::size_t count(double t) const;
};

enum class BoundaryKind {
  OrOne,   // transfer capacity max(x1, 1): a standby server activates at 0
  PlusOne  // transfer capacity x1 + 1: one permanent server always active
};

// State-dependent transfer efficiency in [0,1].
class RateFunction {
 public:
  static RateFunction constant(double delta);
  static RateFunction download_share();  // x0 / (x0 + x1)
  static RateFunction capped_ratio(double alpha);  // min(1, alpha*x0/max(x1,1))
  static RateFunction custom(std::function<double(long long, long long)> fn,
                             std::optional<bool> condition_c = std::nullopt);

  double operator()(long long x0, long long x1) const;
  // Whether r(x0,x1) -> 1 as x0 -> infinity for every fixed x1; nullopt when
  // unknown (custom callbacks).
  std::optional<bool> satisfies_condition_c() const { return condition_c_; }
  const std::string& label() const { return label_; }

 private:
  std::function<double(long long, long long)> fn_;
  std::optional<bool> condition_c_;
  std::string label_;
};

// One-chunk network (x0 downloaders, x1 seeders): arrivals at lambda,
// transfers at mu*r(x)*cap(x1) while x0 > 0, departures at nu*x1.
struct SingleChunkParams {
  double lambda;
  double mu;
  double nu;
  RateFunction rate_fn = RateFunction::constant(1.0);
  BoundaryKind boundary = BoundaryKind::OrOne;
  void validate() const {
    if (!(lambda > 0.0)) throw InvalidParameter("single_chunk: lambda > 0");
    if (!(mu > 0.0)) throw InvalidParameter("single_chunk: mu > 0");
    if (!(nu > 0.0)) throw InvalidParameter("single_chunk: nu > 0");
  }
};

// Two-chunk linear network (x0, x1, x2).
struct TwoChunkParams {
  double lambda;
  double mu1;
  double mu2;
  double nu;
  void validate() const {
    if (!(lambda > 0.0) || !(mu1 > 0.0) || !(mu2 > 0.0) || !(nu > 0.0))
      throw InvalidParameter("two_chunk: all rates must be > 0");
  }
};

// Two last queues of the two-chunk network with the first queue pinned full.
struct SaturatedParams {
  double mu1;
  double mu2;
  double nu;
  void validate() const {
    if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(nu > 0.0))
      throw InvalidParameter("saturated: all rates must be > 0");
  }
};

// How the saturated system's first coordinate is advanced.
enum class X1Mode {
  // Every birth of z1 is an event. Exact sample paths, cost ~ z1 itself.
  ExactEvents,
  // z1 is refreshed only at kill epochs using the exact pure-birth
  // transition law (negative binomial growth). The z2 margin and the kill
  // interaction are exact; z1 is materialized only at those epochs.
  IntervalSkip,
};

// Binary splitting: each particle at rate `rate` splits in two (prob p) or
// dies (prob 1-p); 0 is absorbing.
struct BranchingParams {
  double p;
  double rate;
  void validate() const {
    if (!(p > 0.0) || !(p < 1.0))
      throw InvalidParameter("branching: p in (0,1)");
    if (!(rate > 0.0)) throw InvalidParameter("branching: rate > 0");
  }
};

// Outcome of one joint (W, Z) run to W's extinction.
struct WzOutcome {
  bool extinct = false;
  double h0 = 0.0;            // extinction epoch of W (valid when extinct)
  long long z_at_h0 = 0;      // Z at that epoch
  double my_star = 0.0;       // running sup of exp(-mu_w t) * Y(t)
  double end_time = 0.0;      // h0, or the safety horizon when not extinct
  long long events = 0;
};

enum class ThinningVariant {
  Bernoulli,  // independent keep probability p per individual
  ExpWindow,  // shared Exp(mu_w) window E, keep each with prob exp(-nu E)
};

struct VChainParams {
  double p = 0.5;  // Bernoulli keep probability (ignored by ExpWindow)
  double mu_w;     // Yule rate of the killed component (mu1 in the network)
  RbhParams rbh;   // mu_z plays the role of mu2
  ThinningVariant thinning = ThinningVariant::Bernoulli;
  double safety_horizon = 1e6;
  void validate() const {
    if (!(p > 0.0) || !(p < 1.0)) throw InvalidParameter("v_chain: p in (0,1)");
    if (!(mu_w > 0.0)) throw InvalidParameter("v_chain: mu_w > 0");
    rbh.validate();
  }
  static VChainParams from_saturated(const SaturatedParams& s) {
    VChainParams v;
    v.mu_w = s.mu1;
    v.rbh = RbhParams{s.mu2, s.nu};
    v.thinning = ThinningVariant::ExpWindow;
    v.p = s.mu1 / (s.mu1 + s.nu);
    return v;
  }
};

struct VChainRun {
  std::vector<long long> values;      // V_0 .. V_steps
  std::optional<long long> hit_step;  // first n with V_n <= K, if reached
};

enum class CoupledMode { Upper, Lower };
enum class CoupledStop { Horizon, TauDelta, Sigma, EventBudget };

struct CoupledResult {
  Trajectory network;  // X^r path
  Trajectory free;     // comparison free-process path
  CoupledStop stop_reason = CoupledStop::Horizon;
};

// ---------------------------------------------------------------------------
// Simulators
// ---------------------------------------------------------------------------

Trajectory simulate_yule(const YuleParams& params, long long y0,
                         const StoppingRule& stop, RngStream& rng);

struct KilledYuleResult {
  Trajectory trajectory;
  bool extinct = false;
  std::optional<double> extinction_epoch;
};

KilledYuleResult simulate_killed_yule(const YuleParams& params, long long w0,
                                      const KillSchedule& kills,
                                      const StoppingRule& stop,
                                      RngStream& rng);

struct RbhResult {
  Trajectory trajectory;
  BirthLog births;
};

RbhResult simulate_rbh(const RbhParams& params, long long z0,
                       const StoppingRule& stop, RngStream& rng);

// Re-times an M/M/1 path L through the inverse of A(t) = int 1/max(L,1);
// the jump chain is preserved exactly, only epochs move. Exposed separately
// so the clock algebra is testable on handmade paths.
Trajectory lamperti_time_change(const Trajectory& queue_path,
                                double target_horizon);

Trajectory simulate_z_via_timechange(const RbhParams& params, long long z0,
                                     const StoppingRule& stop, RngStream& rng);

Trajectory simulate_single_chunk(const SingleChunkParams& params,
                                 long long x0, long long x1,
                                 const StoppingRule& stop, RngStream& rng);

Trajectory simulate_free(double delta, double mu, double nu, double lambda,
                         long long y0, long long y1, const StoppingRule& stop,
                         RngStream& rng);

Trajectory simulate_two_chunk(const TwoChunkParams& params, const State& x0,
                              const StoppingRule& stop, RngStream& rng);

Trajectory simulate_saturated(const SaturatedParams& params, long long z1,
                              long long z2, const StoppingRule& stop,
                              RngStream& rng,
                              X1Mode mode = X1Mode::IntervalSkip);

Trajectory simulate_branching(const BranchingParams& params, long long z0,
                              const StoppingRule& stop, RngStream& rng);

// Joint run of the network process against its free bound with synchronized
// clocks. Upper: X0 >= Y0 and X1 <= Y1 for all t. Lower: X0 <= Y0 and
// X1 >= Y1 until tau_delta (r drops to delta) or sigma (X0 empties).
// An ordering violation throws CouplingOrderingError.
CoupledResult simulate_coupled(CoupledMode mode,
                               const SingleChunkParams& params, double delta,
                               long long x0, long long x1,
                               const StoppingRule& stop, RngStream& rng);

// Jointly runs Z (birth-death) and W (Yule at mu_w, one individual removed
// at each Z-birth while W > 0) together with W's unkilled envelope Y, until
// W dies or the safety horizon passes.
WzOutcome run_wz_to_extinction(double mu_w, const RbhParams& rbh,
                               long long w0, long long z0, RngStream& rng,
                               double safety_horizon,
                               long long max_events = 500'000'000);

// V_{n+1} = thinned sum over A_n(V_n) individuals, A_n(v) ~ Z(H0) started
// from (W,Z) = (1,v). hit_K, when given, also reports the first step n with
// V_n <= K.
VChainRun v_chain_simulate(const VChainParams& params, long long v0,
                           long long steps, RngStream& rng,
                           std::optional<long long> hit_K = std::nullopt);

// ---------------------------------------------------------------------------
// Named process specs (CLI / estimator dispatch)
// ---------------------------------------------------------------------------

struct ProcessSpec {
  std::string model;  // yule, killed_yule, rbh, rbh_timechange, single_chunk,
                      // free, two_chunk, saturated, coupled, wz, v_chain,
                      // branching
  YuleParams yule{1.0};
  KillSchedule kills = KillSchedule::none();
  RbhParams rbh{2.0, 1.0};
  SingleChunkParams single_chunk{1.0, 1.0, 2.0};
  double free_delta = 1.0;
  TwoChunkParams two_chunk{1.0, 1.0, 1.0, 1.0};
  SaturatedParams saturated{1.0, 1.0, 2.0};
  BranchingParams branching{0.5, 2.0};
  VChainParams v_chain{};
  CoupledMode coupled_mode = CoupledMode::Upper;
  double coupled_delta = 0.5;
  double wz_mu_w = 0.1;
  State init;

  std::size_t dimension() const;
  // Runs the spec as a plain CTMC into the given sink. Only valid for the
  // CTMC-like models (not coupled / wz / v_chain / rbh_timechange).
  template <class Sink>
  RunResult run_with_sink(const StoppingRule& stop, RngStream& rng,
                          Sink&& sink) const;
  Trajectory run(const StoppingRule& stop, RngStream& rng) const;
};

namespace detail {

struct YuleModel {
  double mu;
  void transitions(const State& s, TransitionBuffer& buf) const {
    buf.add(mu * static_cast<double>(s[0]), {+1});
  }
};

struct RbhModel {
  double mu_z, nu;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const double z = static_cast<double>(s[0]);
    buf.add(mu_z * std::max(z, 1.0), {+1});
    buf.add(nu * z, {-1});
  }
};

struct BranchingModel {
  double p, rate;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const double z = static_cast<double>(s[0]);
    buf.add(rate * p * z, {+1});
    buf.add(rate * (1.0 - p) * z, {-1});
  }
};

struct Mm1Model {
  double arrival, service;
  void transitions(const State& s, TransitionBuffer& buf) const {
    buf.add(arrival, {+1});
    if (s[0] > 0) buf.add(service, {-1});
  }
};

struct SingleChunkModel {
  const SingleChunkParams* p;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const long long x0 = s[0], x1 = s[1];
    buf.add(p->lambda, {+1, 0});
    if (x0 > 0) {
      const double cap = p->boundary == BoundaryKind::PlusOne
                             ? static_cast<double>(x1 + 1)
                             : static_cast<double>(std::max<long long>(x1, 1));
      buf.add(p->mu * p->rate_fn(x0, x1) * cap, {-1, +1});
    }
    buf.add(p->nu * static_cast<double>(x1), {0, -1});
  }
};

struct FreeModel {
  double delta, mu, nu, lambda;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const double y1 = static_cast<double>(s[1]);
    buf.add(lambda, {+1, 0});
    buf.add(mu * delta * std::max(y1, 1.0), {-1, +1});
    buf.add(nu * y1, {0, -1});
  }
};

struct TwoChunkModel {
  const TwoChunkParams* p;
  void transitions(const State& s, TransitionBuffer& buf) const {
    buf.add(p->lambda, {+1, 0, 0});
    if (s[0] > 0)
      buf.add(p->mu1 * static_cast<double>(std::max<long long>(s[1], 1)),
              {-1, +1, 0});
    if (s[1] > 0)
      buf.add(p->mu2 * static_cast<double>(std::max<long long>(s[2], 1)),
              {0, -1, +1});
    buf.add(p->nu * static_cast<double>(s[2]), {0, 0, -1});
  }
};

struct SaturatedModel {
  const SaturatedParams* p;
  void transitions(const State& s, TransitionBuffer& buf) const {
    buf.add(p->mu1 * static_cast<double>(std::max<long long>(s[0], 1)),
            {+1, 0});
    if (s[0] > 0)
      buf.add(p->mu2 * static_cast<double>(std::max<long long>(s[1], 1)),
              {-1, +1});
    buf.add(p->nu * static_cast<double>(s[1]), {0, -1});
  }
};

}  // namespace detail

// Saturated-system run with the first coordinate advanced lazily between
// kill epochs via the exact pure-birth transition law. z1 is materialized at
// every emitted event, so sinks see exact states at event epochs; z1's own
// birth events are never enumerated. Values are clamped at a 2^59 ceiling;
// if a clamped path ever drains back to zero the run aborts rather than
// continue with a possibly wrong empty-queue indicator.
template <class Sink>
RunResult simulate_saturated_into(const SaturatedParams& params, State state,
                                  const StoppingRule& stop, RngStream& rng,
                                  Sink&& sink, X1Mode mode) {
  params.validate();
  if (state.size() != 2 || state[0] < 0 || state[1] < 0)
    throw InvalidParameter("saturated: init must be two nonnegative counts");
  if (mode == X1Mode::ExactEvents)
    return simulate(detail::SaturatedModel{&params}, std::move(state), stop,
                    rng, sink);

  stop.validate();
  constexpr double kCeiling = 576460752303423488.0;  // 2^59
  double t = 0.0;
  double z1_as_of = 0.0;  // epoch of the last z1 materialization
  bool clamped = false;
  long long events = 0;
  sink.begin(t, state);

  auto grow_z1 = [&](double now) {
    if (state[0] <= 0 || now <= z1_as_of) {
      z1_as_of = now;
      return;
    }
    const double dt = now - z1_as_of;
    z1_as_of = now;
    const double z1 = static_cast<double>(state[0]);
    if (clamped && z1 >= kCeiling) return;
    const double log_mean = std::log(z1) + params.mu1 * dt;
    if (log_mean > 59.5 * 0.6931471805599453) {
      state[0] = static_cast<long long>(kCeiling);
      clamped = true;
      return;
    }
    const double p = std::exp(-params.mu1 * dt);
    const long long grown =
        state[0] + rng.negative_binomial(static_cast<double>(state[0]), p);
    if (static_cast<double>(grown) >= kCeiling) {
      state[0] = static_cast<long long>(kCeiling);
      clamped = true;
    } else {
      state[0] = grown;
    }
  };

  for (;;) {
    const double z2 = static_cast<double>(state[1]);
    const double birth2 =
        state[0] > 0 ? params.mu2 * std::max(z2, 1.0) : 0.0;
    const double death2 = params.nu * z2;
    const double rebound = state[0] == 0 ? params.mu1 : 0.0;
    const double total = birth2 + death2 + rebound;
    // total >= mu1 or mu2 > 0 always; no absorbing state here.

    const double t_next = t + rng.exponential(total);
    if (stop.horizon && t_next > *stop.horizon) {
      grow_z1(*stop.horizon);
      sink.end(*stop.horizon, state);
      return {*stop.horizon, std::move(state), EndReason::Horizon, events};
    }
    t = t_next;

    const double pick = rng.uniform() * total;
    if (pick < birth2) {
      grow_z1(t);
      state[1] += 1;
      state[0] -= 1;  // kill one first-queue individual at this birth
      if (state[0] == 0 && clamped)
        throw ModelError(
            "saturated interval-skip: first queue drained through the value "
            "ceiling; rerun with X1Mode::ExactEvents");
    } else if (pick < birth2 + death2) {
      grow_z1(t);
      state[1] -= 1;
    } else {
      state[0] = 1;  // rebound from the empty first queue
      z1_as_of = t;
    }
    ++events;
    sink.jump(t, state);

    if (stop.absorb_predicate && stop.absorb_predicate(state)) {
      sink.end(t, state);
      return {t, std::move(state), EndReason::Predicate, events};
    }
    if (stop.max_events && events >= *stop.max_events) {
      sink.end(t, state);
      return {t, std::move(state), EndReason::EventBudget, events};
    }
  }
}

template <class Sink>
RunResult ProcessSpec::run_with_sink(const StoppingRule& stop, RngStream& rng,
                                     Sink&& sink) const {
  if (model == "yule")
    return simulate(detail::YuleModel{yule.mu}, init, stop, rng, sink);
  if (model == "rbh")
    return simulate(detail::RbhModel{rbh.mu_z, rbh.nu}, init, stop, rng, sink);
  if (model == "branching")
    return simulate(detail::BranchingModel{branching.p, branching.rate}, init,
                    stop, rng, sink);
  if (model == "single_chunk")
    return simulate(detail::SingleChunkModel{&single_chunk}, init, stop, rng,
                    sink);
  if (model == "free")
    return simulate(detail::FreeModel{free_delta, single_chunk.mu,
                                      single_chunk.nu, single_chunk.lambda},
                    init, stop, rng, sink);
  if (model == "two_chunk")
    return simulate(detail::TwoChunkModel{&two_chunk}, init, stop, rng, sink);
  if (model == "saturated")
    return simulate_saturated_into(saturated, init, stop, rng, sink,
                                   X1Mode::IntervalSkip);
  throw InvalidParameter("model '" + model +
                         "' cannot run through a generic sink");
}

}  // namespace chunksim

#endif  // CHUNKSIM_PROCESSES_HPP
