#include "chunksim/ctmc.hpp"

namespace chunksim {

Trajectory run_ctmc(
    const std::function<std::vector<std::pair<double, State>>(const State&)>&
        generator,
    State init, const StoppingRule& stop, RngStream& rng) {
  CallbackModel model{generator};
  TrajectorySink sink;
  RunResult r = simulate(model, std::move(init), stop, rng, sink);
  Trajectory traj = sink.take(r.end_reason);
  traj.degenerate = traj.jump_count() == 0 && r.end_reason == EndReason::Absorbed;
  return traj;
}

}  // namespace chunksim
