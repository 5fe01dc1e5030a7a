#ifndef CHUNKSIM_TRAJECTORY_HPP
#define CHUNKSIM_TRAJECTORY_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "chunksim/errors.hpp"

namespace chunksim {

using State = std::vector<long long>;

// Why a run ended.
enum class EndReason {
  Horizon,      // simulated time reached the horizon
  EventBudget,  // max_events exhausted before the horizon
  Absorbed,     // total rate hit zero and no horizon was set
  Predicate,    // absorb_predicate fired
};

// Termination policy for a single run. At least one of horizon / max_events
// must be set so every run provably ends.
struct StoppingRule {
  std::optional<double> horizon;
  std::optional<long long> max_events;
  std::function<bool(const State&)> absorb_predicate;

  void validate() const {
    if (!horizon && !max_events)
      throw InvalidParameter(
          "stopping rule needs a horizon or an event budget");
    if (horizon && !(*horizon > 0.0))
      throw InvalidParameter("horizon must be positive");
    if (max_events && *max_events <= 0)
      throw InvalidParameter("max_events must be positive");
  }

  static StoppingRule until(double horizon,
                            long long max_events = 100'000'000) {
    return StoppingRule{horizon, max_events, nullptr};
  }
  static StoppingRule events(long long max_events) {
    return StoppingRule{std::nullopt, max_events, nullptr};
  }
};

// Right-continuous piecewise-constant sample path: state is states[k] on
// [times[k], times[k+1]). times[0] is the initial epoch (usually 0) and
// end_time closes the last piece.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double end_time = 0.0;
  EndReason end_reason = EndReason::Horizon;
  // Set when the run started in (or instantly fell into) an absorbing state.
  bool degenerate = false;

  std::size_t dimension() const {
    return states.empty() ? 0 : states.front().size();
  }
  std::size_t jump_count() const {
    return states.empty() ? 0 : states.size() - 1;
  }

  const State& state_at(double t) const {
    if (states.empty() || t < times.front())
      throw InvalidParameter("state_at: time before the trajectory start");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return states[static_cast<std::size_t>(it - times.begin()) - 1];
  }

  long long coord_at(double t, std::size_t coord) const {
    return state_at(t).at(coord);
  }
};

}  // namespace chunksim

#endif  // CHUNKSIM_TRAJECTORY_HPP
