#include <algorithm>
#include <cmath>
#include <limits>

#include "chunksim/processes.hpp"

namespace chunksim {

// ---------------------------------------------------------------------------
// KillSchedule
// ---------------------------------------------------------------------------

KillSchedule KillSchedule::from_epochs(std::vector<double> epochs) {
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (!(epochs[i] > 0.0))
      throw InvalidParameter("kill schedule: epochs must be positive");
    if (i > 0 && epochs[i] < epochs[i - 1])
      throw InvalidParameter("kill schedule: epochs must be nondecreasing");
  }
  KillSchedule k;
  k.prefix_ = std::move(epochs);
  return k;
}

KillSchedule KillSchedule::linear(double spacing) {
  if (!(spacing > 0.0)) throw InvalidParameter("kill schedule: spacing > 0");
  KillSchedule k;
  k.fn_ = [spacing](std::size_t n) {
    return spacing * static_cast<double>(n);
  };
  return k;
}

KillSchedule KillSchedule::logarithmic(double scale) {
  if (!(scale > 0.0)) throw InvalidParameter("kill schedule: scale > 0");
  KillSchedule k;
  k.fn_ = [scale](std::size_t n) {
    return scale * std::log1p(static_cast<double>(n));
  };
  return k;
}

KillSchedule KillSchedule::none() { return KillSchedule{}; }

double KillSchedule::epoch(std::size_t n) const {
  if (fn_) return fn_(n);
  if (n >= 1 && n <= prefix_.size()) return prefix_[n - 1];
  return std::numeric_limits<double>::infinity();
}

bool KillSchedule::empty() const { return !fn_ && prefix_.empty(); }

std::size_t BirthLog::count(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(sigma.begin(), sigma.end(), t) - sigma.begin());
}

// ---------------------------------------------------------------------------
// Yule
// ---------------------------------------------------------------------------

Trajectory simulate_yule(const YuleParams& params, long long y0,
                         const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (y0 < 0) throw InvalidParameter("yule: y0 must be >= 0");
  TrajectorySink sink;
  RunResult r =
      simulate(detail::YuleModel{params.mu}, State{y0}, stop, rng, sink);
  Trajectory traj = sink.take(r.end_reason);
  traj.degenerate = (y0 == 0);
  return traj;
}

// ---------------------------------------------------------------------------
// Killed Yule
// ---------------------------------------------------------------------------

// Births at mu_w * W race against the fixed kill epochs; 0 is absorbing and
// kills landing on an empty population are skipped. Killed subtrees never
// interact with survivors, so the count process is all that is needed.
KilledYuleResult simulate_killed_yule(const YuleParams& params, long long w0,
                                      const KillSchedule& kills,
                                      const StoppingRule& stop,
                                      RngStream& rng) {
  params.validate();
  stop.validate();
  if (w0 < 0) throw InvalidParameter("killed_yule: w0 must be >= 0");
  if (!kills.empty() && !(kills.epoch(1) > 0.0))
    throw InvalidParameter("killed_yule: sigma_1 must be > 0");

  KilledYuleResult result;
  Trajectory& traj = result.trajectory;
  const double horizon =
      stop.horizon ? *stop.horizon : std::numeric_limits<double>::infinity();
  double t = 0.0;
  long long w = w0;
  long long events = 0;
  std::size_t next_kill = 1;
  traj.times.push_back(0.0);
  traj.states.push_back({w});
  traj.degenerate = (w0 == 0);
  if (w == 0) result.extinct = true;

  auto finish = [&](double end, EndReason reason) {
    traj.end_time = end;
    traj.end_reason = reason;
    return result;
  };

  for (;;) {
    if (w == 0) return finish(horizon < t ? t : horizon, EndReason::Absorbed);
    const double kill_at = kills.epoch(next_kill);
    const double birth_at = t + rng.exponential(params.mu * static_cast<double>(w));
    const double next_t = std::min(birth_at, kill_at);
    if (next_t > horizon) return finish(horizon, EndReason::Horizon);

    if (kill_at <= birth_at) {
      ++next_kill;
      --w;  // w > 0 here; kills on an empty population never reach this line
      t = kill_at;
      if (w == 0) {
        result.extinct = true;
        result.extinction_epoch = t;
      }
    } else {
      ++w;
      t = birth_at;
    }
    traj.times.push_back(t);
    traj.states.push_back({w});
    ++events;
    if (stop.max_events && events >= *stop.max_events)
      return finish(t, EndReason::EventBudget);
  }
}

// ---------------------------------------------------------------------------
// Renewing birth-death process Z and its time-change representation
// ---------------------------------------------------------------------------

RbhResult simulate_rbh(const RbhParams& params, long long z0,
                       const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (z0 < 0) throw InvalidParameter("rbh: z0 must be >= 0");

  struct RecordingSink {
    TrajectorySink inner;
    BirthLog births;
    long long prev = 0;
    void begin(double t, const State& s) {
      prev = s[0];
      inner.begin(t, s);
    }
    void jump(double t, const State& s) {
      if (s[0] > prev) births.sigma.push_back(t);
      prev = s[0];
      inner.jump(t, s);
    }
    void end(double t, const State& s) { inner.end(t, s); }
  } sink;

  RunResult r = simulate(detail::RbhModel{params.mu_z, params.nu}, State{z0},
                         stop, rng, sink);
  return {sink.inner.take(r.end_reason), std::move(sink.births)};
}

Trajectory simulate_branching(const BranchingParams& params, long long z0,
                              const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (z0 < 0) throw InvalidParameter("branching: z0 must be >= 0");
  TrajectorySink sink;
  RunResult r = simulate(detail::BranchingModel{params.p, params.rate},
                         State{z0}, stop, rng, sink);
  Trajectory traj = sink.take(r.end_reason);
  traj.degenerate = (z0 == 0);
  return traj;
}

// Walks the queue path piece by piece: a piece of queue-time length d at
// level l advances the slowed clock by d / max(l,1). Jump epochs map through
// that clock; states are untouched.
Trajectory lamperti_time_change(const Trajectory& queue_path,
                                double target_horizon) {
  if (queue_path.states.empty())
    throw InvalidParameter("time change: empty path");
  if (!(target_horizon > 0.0))
    throw InvalidParameter("time change: horizon must be > 0");

  Trajectory out;
  out.end_reason = EndReason::Horizon;
  out.times.push_back(0.0);
  out.states.push_back(queue_path.states.front());

  double a = 0.0;  // slowed clock A(t)
  for (std::size_t k = 0; k + 1 < queue_path.states.size(); ++k) {
    const double piece = queue_path.times[k + 1] - queue_path.times[k];
    const double level =
        std::max(static_cast<double>(queue_path.states[k][0]), 1.0);
    a += piece / level;
    if (a > target_horizon) {
      out.end_time = target_horizon;
      return out;
    }
    out.times.push_back(a);
    out.states.push_back(queue_path.states[k + 1]);
  }
  // Queue path exhausted before the slowed clock reached the horizon: close
  // with the final constant piece.
  const double piece = queue_path.end_time - queue_path.times.back();
  const double level =
      std::max(static_cast<double>(queue_path.states.back()[0]), 1.0);
  out.end_time = std::min(a + piece / level, target_horizon);
  out.end_reason = queue_path.end_reason;
  return out;
}

Trajectory simulate_z_via_timechange(const RbhParams& params, long long z0,
                                     const StoppingRule& stop,
                                     RngStream& rng) {
  params.validate();
  stop.validate();
  if (z0 < 0) throw InvalidParameter("rbh_timechange: z0 must be >= 0");
  if (!stop.horizon)
    throw InvalidParameter("rbh_timechange: a horizon is required");
  const double horizon = *stop.horizon;

  // Simulate the M/M/1 queue until its slowed clock passes the horizon.
  struct ClockSink {
    TrajectorySink inner;
    double a = 0.0;
    double prev_t = 0.0;
    long long prev_level = 0;
    double target;
    void begin(double t, const State& s) {
      prev_t = t;
      prev_level = s[0];
      inner.begin(t, s);
    }
    void jump(double t, const State& s) {
      a += (t - prev_t) / std::max(static_cast<double>(prev_level), 1.0);
      prev_t = t;
      prev_level = s[0];
      inner.jump(t, s);
    }
    void end(double t, const State& s) { inner.end(t, s); }
  } sink;
  sink.target = horizon;

  StoppingRule queue_stop;
  queue_stop.max_events = stop.max_events ? *stop.max_events : 100'000'000;
  queue_stop.absorb_predicate = [&sink](const State&) {
    return sink.a > sink.target;
  };

  RunResult r = simulate(detail::Mm1Model{params.mu_z, params.nu}, State{z0},
                         queue_stop, rng, sink);
  Trajectory queue_path = sink.inner.take(r.end_reason);
  Trajectory out = lamperti_time_change(queue_path, horizon);
  if (r.end_reason == EndReason::EventBudget)
    out.end_reason = EndReason::EventBudget;
  return out;
}

}  // namespace chunksim
