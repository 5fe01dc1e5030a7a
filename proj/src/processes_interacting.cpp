#include <algorithm>
#include <cmath>
#include <limits>

#include "chunksim/processes.hpp"

namespace chunksim {

namespace {

// Joint state (x0, x1, y0, y1): network process in the first pair, free
// process in the second. Shared clocks are encoded as one transition that
// moves both pairs; residual rates move only the faster side.
struct CoupledUpperModel {
  const SingleChunkParams* p;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const long long x0 = s[0], x1 = s[1], y1 = s[3];
    buf.add(p->lambda, {+1, 0, +1, 0});  // common arrival
    double a = 0.0;
    if (x0 > 0)
      a = p->mu * p->rate_fn(x0, x1) *
          static_cast<double>(std::max<long long>(x1, 1));
    const double b = p->mu * static_cast<double>(std::max<long long>(y1, 1));
    buf.add(a, {-1, +1, -1, +1});                  // joint transfer
    buf.add(std::max(b - a, 0.0), {0, 0, -1, +1});  // free-side-only transfer
    buf.add(p->nu * static_cast<double>(x1), {0, -1, 0, -1});     // joint exit
    buf.add(p->nu * static_cast<double>(y1 - x1), {0, 0, 0, -1});  // free only
  }
};

struct CoupledLowerModel {
  const SingleChunkParams* p;
  double delta;
  void transitions(const State& s, TransitionBuffer& buf) const {
    const long long x0 = s[0], x1 = s[1], y1 = s[3];
    buf.add(p->lambda, {+1, 0, +1, 0});
    // Before tau_delta ^ sigma: x0 > 0 and r(x) > delta, so the network
    // transfer dominates the free one.
    const double a = p->mu * p->rate_fn(x0, x1) *
                     static_cast<double>(std::max<long long>(x1, 1));
    const double b =
        p->mu * delta * static_cast<double>(std::max<long long>(y1, 1));
    buf.add(b, {-1, +1, -1, +1});
    buf.add(std::max(a - b, 0.0), {-1, +1, 0, 0});  // network-only transfer
    buf.add(p->nu * static_cast<double>(y1), {0, -1, 0, -1});
    buf.add(p->nu * static_cast<double>(x1 - y1), {0, -1, 0, 0});
  }
};

void check_upper(const State& s) {
  if (s[0] < s[2] || s[1] > s[3])
    throw CouplingOrderingError("upper coupling ordering violated");
}

void check_lower(const State& s) {
  if (s[0] > s[2] || s[1] < s[3])
    throw CouplingOrderingError("lower coupling ordering violated");
}

struct SplitSink {
  Trajectory network;
  Trajectory free;
  bool upper = true;
  void begin(double t, const State& s) { push(t, s); }
  void jump(double t, const State& s) {
    if (upper)
      check_upper(s);
    else
      check_lower(s);
    push(t, s);
  }
  void end(double t, const State&) {
    network.end_time = t;
    free.end_time = t;
  }
  void push(double t, const State& s) {
    network.times.push_back(t);
    network.states.push_back({s[0], s[1]});
    free.times.push_back(t);
    free.states.push_back({s[2], s[3]});
  }
};

}  // namespace

CoupledResult simulate_coupled(CoupledMode mode,
                               const SingleChunkParams& params, double delta,
                               long long x0, long long x1,
                               const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (x0 < 0 || x1 < 0)
    throw InvalidParameter("coupled: init must be nonnegative");
  if (mode == CoupledMode::Lower && (!(delta >= 0.0) || delta > 1.0))
    throw InvalidParameter("coupled: delta must be in [0,1]");

  SplitSink sink;
  sink.upper = (mode == CoupledMode::Upper);
  State init{x0, x1, x0, x1};
  RunResult r;
  CoupledStop reason = CoupledStop::Horizon;

  if (mode == CoupledMode::Upper) {
    r = simulate(CoupledUpperModel{&params}, std::move(init), stop, rng, sink);
    if (r.end_reason == EndReason::EventBudget)
      reason = CoupledStop::EventBudget;
  } else {
    // Stop as soon as the network side empties (sigma) or its rate function
    // drops to delta (tau_delta); both are state functions, so they are
    // re-evaluated after every event.
    const RateFunction& rate_fn = params.rate_fn;
    auto fired = [&rate_fn, delta](const State& s) {
      return s[0] == 0 || rate_fn(s[0], s[1]) <= delta;
    };
    if (fired(init))
      throw InvalidParameter(
          "coupled lower: initial state already at tau_delta or sigma");
    StoppingRule lower_stop = stop;
    lower_stop.absorb_predicate = fired;
    r = simulate(CoupledLowerModel{&params, delta}, std::move(init),
                 lower_stop, rng, sink);
    if (r.end_reason == EndReason::Predicate)
      reason = r.final_state[0] == 0 ? CoupledStop::Sigma
                                     : CoupledStop::TauDelta;
    else if (r.end_reason == EndReason::EventBudget)
      reason = CoupledStop::EventBudget;
  }

  CoupledResult out;
  out.network = std::move(sink.network);
  out.free = std::move(sink.free);
  out.network.end_reason = r.end_reason;
  out.free.end_reason = r.end_reason;
  out.stop_reason = reason;
  return out;
}

// ---------------------------------------------------------------------------
// The (W, Z) pair with W's unkilled envelope Y
// ---------------------------------------------------------------------------

// Joint state (w, y, z). Y is the plain pure-birth envelope of W: every
// surviving individual's birth is shared, killed subtrees keep breeding
// inside Y only, and kills remove individuals from W alone. This makes
// M*_Y = sup exp(-mu_w t) Y(t) observable along the run.
WzOutcome run_wz_to_extinction(double mu_w, const RbhParams& rbh,
                               long long w0, long long z0, RngStream& rng,
                               double safety_horizon, long long max_events) {
  if (!(mu_w > 0.0)) throw InvalidParameter("wz: mu_w must be > 0");
  rbh.validate();
  if (w0 < 1) throw InvalidParameter("wz: w0 must be >= 1");
  if (z0 < 0) throw InvalidParameter("wz: z0 must be >= 0");
  if (!(safety_horizon > 0.0))
    throw InvalidParameter("wz: safety_horizon must be > 0");

  double t = 0.0;
  long long w = w0, y = w0, z = z0;
  long long events = 0;
  WzOutcome out;
  out.my_star = static_cast<double>(y);  // value at t = 0

  for (;;) {
    const double live_birth = mu_w * static_cast<double>(w);
    const double dead_birth = mu_w * static_cast<double>(y - w);
    const double z_birth = rbh.mu_z * std::max(static_cast<double>(z), 1.0);
    const double z_death = rbh.nu * static_cast<double>(z);
    const double total = live_birth + dead_birth + z_birth + z_death;

    const double t_next = t + rng.exponential(total);
    if (t_next > safety_horizon) {
      out.extinct = false;
      out.end_time = safety_horizon;
      out.z_at_h0 = z;
      out.events = events;
      return out;
    }
    t = t_next;

    const double pick = rng.uniform() * total;
    if (pick < live_birth) {
      ++w;
      ++y;
    } else if (pick < live_birth + dead_birth) {
      ++y;
    } else if (pick < live_birth + dead_birth + z_birth) {
      ++z;
      if (w > 0) --w;  // one individual killed at this birth instant
    } else {
      --z;
    }
    ++events;
    out.my_star =
        std::max(out.my_star, std::exp(-mu_w * t) * static_cast<double>(y));

    if (w == 0) {
      out.extinct = true;
      out.h0 = t;
      out.z_at_h0 = z;
      out.end_time = t;
      out.events = events;
      return out;
    }
    if (events >= max_events)
      throw ModelError("wz: event budget exhausted before extinction");
  }
}

// ---------------------------------------------------------------------------
// V-chain
// ---------------------------------------------------------------------------

VChainRun v_chain_simulate(const VChainParams& params, long long v0,
                           long long steps, RngStream& rng,
                           std::optional<long long> hit_K) {
  params.validate();
  if (v0 < 0) throw InvalidParameter("v_chain: v0 must be >= 0");
  if (steps < 0) throw InvalidParameter("v_chain: steps must be >= 0");

  VChainRun run;
  run.values.reserve(static_cast<std::size_t>(steps) + 1);
  run.values.push_back(v0);
  if (hit_K && v0 <= *hit_K) run.hit_step = 0;

  long long v = v0;
  for (long long n = 0; n < steps; ++n) {
    WzOutcome wz = run_wz_to_extinction(params.mu_w, params.rbh, 1, v, rng,
                                        params.safety_horizon);
    if (!wz.extinct)
      throw ModelError("v_chain: step " + std::to_string(n) +
                       " did not reach extinction within the safety horizon");
    const long long offspring = wz.z_at_h0;
    long long kept = 0;
    if (params.thinning == ThinningVariant::Bernoulli) {
      kept = rng.binomial(offspring, params.p);
    } else {
      const double window = rng.exponential(params.mu_w);
      kept = rng.binomial(offspring, std::exp(-params.rbh.nu * window));
    }
    v = kept;
    run.values.push_back(v);
    if (!run.hit_step && hit_K && v <= *hit_K) run.hit_step = n + 1;
  }
  return run;
}

}  // namespace chunksim
