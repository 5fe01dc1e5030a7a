// Exact event-by-event simulation of continuous-time Markov chains with
// competing exponential clocks: at each state the total rate R is the sum of
// the enabled transition rates, the holding time is Exp(R), and the jump is
// picked with probability rate/R. States with R = 0 are absorbing.

#ifndef CHUNKSIM_CTMC_HPP
#define CHUNKSIM_CTMC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chunksim/rng.hpp"
#include "chunksim/trajectory.hpp"

namespace chunksim {

// Enabled transitions out of one state, stored flat: rates[k] goes with
// deltas[k*dim .. (k+1)*dim).
class TransitionBuffer {
 public:
  void reset(std::size_t dim) {
    dim_ = dim;
    rates_.clear();
    deltas_.clear();
  }

  void add(double rate, std::initializer_list<long long> delta) {
    rates_.push_back(rate);
    deltas_.insert(deltas_.end(), delta.begin(), delta.end());
  }

  void add(double rate, const State& delta) {
    rates_.push_back(rate);
    deltas_.insert(deltas_.end(), delta.begin(), delta.end());
  }

  std::size_t size() const { return rates_.size(); }
  std::size_t dim() const { return dim_; }
  double rate(std::size_t k) const { return rates_[k]; }

  void apply(std::size_t k, State& state) const {
    const long long* d = deltas_.data() + k * dim_;
    for (std::size_t i = 0; i < dim_; ++i) state[i] += d[i];
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> rates_;
  std::vector<long long> deltas_;
};

struct RunResult {
  double end_time = 0.0;
  State final_state;
  EndReason end_reason = EndReason::Horizon;
  long long events = 0;
};

namespace detail {

inline double total_rate_checked(const TransitionBuffer& buf) {
  double total = 0.0;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    const double r = buf.rate(k);
    if (!(r >= 0.0) || !std::isfinite(r))
      throw ModelError("transition rate " + std::to_string(r) +
                       " is negative or non-finite");
    total += r;
  }
  return total;
}

// Inverse-CDF jump selection; an exact floating-point tie resolves to the
// lower index.
inline std::size_t pick_jump(const TransitionBuffer& buf, double total,
                             RngStream& rng) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_enabled = 0;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    if (buf.rate(k) <= 0.0) continue;
    acc += buf.rate(k);
    last_enabled = k;
    if (target < acc) return k;
  }
  return last_enabled;  // fp round-off pushed the target past the sum
}

}  // namespace detail

// Core loop. Model must provide:
//   void transitions(const State&, TransitionBuffer&) const;
// Sink must provide begin/jump/end (see TrajectorySink below).
template <class Model, class Sink>
RunResult simulate(const Model& model, State state, const StoppingRule& stop,
                   RngStream& rng, Sink&& sink) {
  stop.validate();
  TransitionBuffer buf;
  double t = 0.0;
  long long events = 0;
  sink.begin(t, state);

  for (;;) {
    buf.reset(state.size());
    model.transitions(state, buf);
    const double total = detail::total_rate_checked(buf);

    if (total == 0.0) {
      const double end = stop.horizon ? *stop.horizon : t;
      sink.end(end, state);
      return {end, std::move(state), EndReason::Absorbed, events};
    }

    const double hold = rng.exponential(total);
    const double t_next = t + hold;
    if (stop.horizon && t_next > *stop.horizon) {
      sink.end(*stop.horizon, state);
      return {*stop.horizon, std::move(state), EndReason::Horizon, events};
    }

    const std::size_t k = detail::pick_jump(buf, total, rng);
    buf.apply(k, state);
    t = t_next;
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

// Records the full event log.
class TrajectorySink {
 public:
  void begin(double t, const State& s) {
    traj_.times.push_back(t);
    traj_.states.push_back(s);
  }
  void jump(double t, const State& s) {
    traj_.times.push_back(t);
    traj_.states.push_back(s);
  }
  void end(double t, const State&) { traj_.end_time = t; }

  Trajectory take(EndReason reason) {
    traj_.end_reason = reason;
    return std::move(traj_);
  }

 private:
  Trajectory traj_;
};

// Samples the path on a fixed observation grid instead of keeping every
// event; bounds memory for long horizons.
class GridSink {
 public:
  explicit GridSink(std::vector<double> grid) : grid_(std::move(grid)) {}

  void begin(double t, const State& s) {
    traj_.times.push_back(t);
    traj_.states.push_back(s);
    prev_ = s;
  }
  void jump(double t, const State& s) {
    emit_until(t);
    prev_ = s;
  }
  void end(double t, const State& s) {
    emit_until(std::nextafter(t, 2.0 * t + 1.0));
    traj_.end_time = t;
    (void)s;
  }

  Trajectory take(EndReason reason) {
    traj_.end_reason = reason;
    return std::move(traj_);
  }

 private:
  void emit_until(double t) {
    while (next_ < grid_.size() && grid_[next_] < t) {
      if (grid_[next_] > traj_.times.back()) {
        traj_.times.push_back(grid_[next_]);
        traj_.states.push_back(prev_);
      }
      ++next_;
    }
  }

  std::vector<double> grid_;
  std::size_t next_ = 0;
  State prev_;
  Trajectory traj_;
};

// Accumulates the time integral of one coordinate after a burn-in; the
// time-average over [burn_in, end] is integral()/duration(). half_* expose
// the same quantities over [burn_in/2, end/2] for stabilization checks.
class TimeAverageSink {
 public:
  TimeAverageSink(std::size_t coord, double burn_in, double half_end)
      : coord_(coord), burn_in_(burn_in), half_end_(half_end) {}

  void begin(double t, const State& s) { step(t, s); }
  void jump(double t, const State& s) { step(t, s); }
  void end(double t, const State& s) {
    accumulate(t);
    end_time_ = t;
    (void)s;
  }

  double integral() const { return integral_; }
  double duration() const { return end_time_ - burn_in_; }
  double average() const { return integral_ / duration(); }
  double half_average() const {
    return half_integral_ / (half_end_ - burn_in_ / 2.0);
  }

 private:
  void accumulate(double t) {
    const double lo = std::max(prev_t_, burn_in_);
    if (t > lo) integral_ += (t - lo) * static_cast<double>(value_);
    const double hlo = std::max(prev_t_, burn_in_ / 2.0);
    const double hhi = std::min(t, half_end_);
    if (hhi > hlo) half_integral_ += (hhi - hlo) * static_cast<double>(value_);
  }
  void step(double t, const State& s) {
    accumulate(t);
    prev_t_ = t;
    value_ = s[coord_];
  }

  std::size_t coord_;
  double burn_in_;
  double half_end_;
  double prev_t_ = 0.0;
  long long value_ = 0;
  double integral_ = 0.0;
  double half_integral_ = 0.0;
  double end_time_ = 0.0;
};

struct NullSink {
  void begin(double, const State&) {}
  void jump(double, const State&) {}
  void end(double, const State&) {}
};

// Wraps an arbitrary state -> [(rate, jump)] callback as a Model.
struct CallbackModel {
  std::function<std::vector<std::pair<double, State>>(const State&)> generator;

  void transitions(const State& s, TransitionBuffer& buf) const {
    for (const auto& [rate, delta] : generator(s)) {
      if (delta.size() != s.size())
        throw ModelError("jump dimension does not match the state");
      buf.add(rate, delta);
    }
  }
};

// Gillespie run of a user-supplied generator, recording the full event log.
Trajectory run_ctmc(
    const std::function<std::vector<std::pair<double, State>>(const State&)>&
        generator,
    State init, const StoppingRule& stop, RngStream& rng);

}  // namespace chunksim

#endif  // CHUNKSIM_CTMC_HPP
