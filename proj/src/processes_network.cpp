#include <algorithm>
#include <cmath>

#include "chunksim/processes.hpp"

namespace chunksim {

// ---------------------------------------------------------------------------
// RateFunction
// ---------------------------------------------------------------------------

RateFunction RateFunction::constant(double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParameter("rate function: delta must be in (0,1]");
  RateFunction r;
  r.fn_ = [delta](long long, long long) { return delta; };
  r.condition_c_ = (delta == 1.0);
  r.label_ = "constant";
  return r;
}

RateFunction RateFunction::download_share() {
  RateFunction r;
  r.fn_ = [](long long x0, long long x1) {
    const long long total = x0 + x1;
    if (total == 0) return 0.0;
    return static_cast<double>(x0) / static_cast<double>(total);
  };
  r.condition_c_ = true;
  r.label_ = "download_share";
  return r;
}

RateFunction RateFunction::capped_ratio(double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("rate function: alpha > 0");
  RateFunction r;
  r.fn_ = [alpha](long long x0, long long x1) {
    const double servers = static_cast<double>(std::max<long long>(x1, 1));
    return std::min(1.0, alpha * static_cast<double>(x0) / servers);
  };
  r.condition_c_ = true;
  r.label_ = "capped_ratio";
  return r;
}

RateFunction RateFunction::custom(
    std::function<double(long long, long long)> fn,
    std::optional<bool> condition_c) {
  RateFunction r;
  r.fn_ = std::move(fn);
  r.condition_c_ = condition_c;
  r.label_ = "custom";
  return r;
}

double RateFunction::operator()(long long x0, long long x1) const {
  const double v = fn_(x0, x1);
  if (!(v >= 0.0) || !(v <= 1.0))
    throw ModelError("rate function value outside [0,1] at (" +
                     std::to_string(x0) + "," + std::to_string(x1) + ")");
  return v;
}

// ---------------------------------------------------------------------------
// Network simulators
// ---------------------------------------------------------------------------

Trajectory simulate_single_chunk(const SingleChunkParams& params,
                                 long long x0, long long x1,
                                 const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (x0 < 0 || x1 < 0)
    throw InvalidParameter("single_chunk: init must be nonnegative");
  TrajectorySink sink;
  RunResult r = simulate(detail::SingleChunkModel{&params}, State{x0, x1},
                         stop, rng, sink);
  return sink.take(r.end_reason);
}

Trajectory simulate_free(double delta, double mu, double nu, double lambda,
                         long long y0, long long y1, const StoppingRule& stop,
                         RngStream& rng) {
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParameter("free: delta must be in (0,1]");
  if (!(mu > 0.0) || !(nu > 0.0) || !(lambda >= 0.0))
    throw InvalidParameter("free: mu, nu > 0 and lambda >= 0");
  if (y1 < 0)
    throw InvalidParameter("free: second coordinate must be nonnegative");
  // y0 may be any integer; the first coordinate of the free process is
  // allowed to go negative.
  TrajectorySink sink;
  RunResult r = simulate(detail::FreeModel{delta, mu, nu, lambda},
                         State{y0, y1}, stop, rng, sink);
  return sink.take(r.end_reason);
}

Trajectory simulate_two_chunk(const TwoChunkParams& params, const State& x0,
                              const StoppingRule& stop, RngStream& rng) {
  params.validate();
  if (x0.size() != 3 || x0[0] < 0 || x0[1] < 0 || x0[2] < 0)
    throw InvalidParameter("two_chunk: init must be three nonnegative counts");
  TrajectorySink sink;
  RunResult r = simulate(detail::TwoChunkModel{&params}, x0, stop, rng, sink);
  return sink.take(r.end_reason);
}

Trajectory simulate_saturated(const SaturatedParams& params, long long z1,
                              long long z2, const StoppingRule& stop,
                              RngStream& rng, X1Mode mode) {
  TrajectorySink sink;
  RunResult r =
      simulate_saturated_into(params, State{z1, z2}, stop, rng, sink, mode);
  return sink.take(r.end_reason);
}

// ---------------------------------------------------------------------------
// ProcessSpec plumbing
// ---------------------------------------------------------------------------

std::size_t ProcessSpec::dimension() const {
  if (model == "yule" || model == "killed_yule" || model == "rbh" ||
      model == "rbh_timechange" || model == "branching" || model == "v_chain")
    return 1;
  if (model == "single_chunk" || model == "free" || model == "saturated")
    return 2;
  if (model == "two_chunk" || model == "wz") return 3;
  if (model == "coupled") return 4;
  throw InvalidParameter("unknown model '" + model + "'");
}

Trajectory ProcessSpec::run(const StoppingRule& stop, RngStream& rng) const {
  if (model == "killed_yule")
    return simulate_killed_yule(yule, init.at(0), kills, stop, rng)
        .trajectory;
  if (model == "rbh") return simulate_rbh(rbh, init.at(0), stop, rng).trajectory;
  if (model == "rbh_timechange")
    return simulate_z_via_timechange(rbh, init.at(0), stop, rng);
  TrajectorySink sink;
  RunResult r = run_with_sink(stop, rng, sink);
  return sink.take(r.end_reason);
}

}  // namespace chunksim
