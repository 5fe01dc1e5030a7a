#include "chunksim/estimators.hpp"

#include <atomic>
#include <cmath>

namespace chunksim {

namespace {

double resolve_burn_in(const StationaryEstimateOptions& opts) {
  return opts.burn_in >= 0.0 ? opts.burn_in : opts.horizon / 5.0;
}

TailDiagnostic diagnose(const std::vector<double>& full,
                        const std::vector<double>& half,
                        std::uint64_t base_seed) {
  TailDiagnostic d;
  d.max_to_sum_ratio = max_to_sum_ratio(full);
  const double m_full = summarize(full, base_seed).mean;
  const double m_half = summarize(half, base_seed).mean;
  const double denom = std::max(std::abs(m_full), 1e-12);
  d.stabilized = std::abs(m_full - m_half) / denom < 0.05;
  return d;
}

}  // namespace

StationaryEstimate estimate_stationary_departure_rate(
    const ProcessSpec& spec, const StationaryEstimateOptions& opts) {
  std::size_t coord;
  double nu;
  if (spec.model == "rbh") {
    spec.rbh.validate();
    if (!(spec.rbh.nu > spec.rbh.mu_z))
      throw InvalidParameter(
          "departure rate: rbh needs nu > mu_z (positive recurrent)");
    coord = 0;
    nu = spec.rbh.nu;
  } else if (spec.model == "saturated") {
    spec.saturated.validate();
    const bool case2 = spec.saturated.mu2 - spec.saturated.nu > spec.saturated.mu1;
    const bool case3 = spec.saturated.nu > spec.saturated.mu2;
    if (!case2 && !case3)
      throw InvalidParameter(
          "departure rate: saturated needs mu2 - nu > mu1 or nu > mu2");
    coord = 1;
    nu = spec.saturated.nu;
  } else {
    throw InvalidParameter(
        "departure rate: model must be 'rbh' or 'saturated'");
  }

  const double burn_in = resolve_burn_in(opts);
  if (!(burn_in < opts.horizon))
    throw InvalidParameter("departure rate: burn_in must be below horizon");

  std::vector<double> full(static_cast<std::size_t>(opts.reps));
  std::vector<double> half(static_cast<std::size_t>(opts.reps));
  std::atomic<long long> events{0};
  collect(opts.reps, opts.base_seed, [&](RngStream& rng) {
    TimeAverageSink sink(coord, burn_in, opts.horizon / 2.0);
    StoppingRule stop = StoppingRule::until(opts.horizon, opts.max_events);
    RunResult r = spec.run_with_sink(stop, rng, sink);
    events.fetch_add(r.events);
    const auto k = rng.stream_index();
    full[k] = nu * sink.average();
    half[k] = nu * sink.half_average();
    return full[k];
  });

  StationaryEstimate out;
  out.summary = summarize(full, opts.base_seed);
  out.diagnostic = diagnose(full, half, opts.base_seed);
  out.total_events = events.load();
  return out;
}

StationaryEstimate estimate_growth_slope(
    const ProcessSpec& spec, std::size_t coordinate,
    const StationaryEstimateOptions& opts) {
  if (coordinate >= spec.dimension())
    throw InvalidParameter("growth slope: coordinate out of range");

  std::vector<double> full(static_cast<std::size_t>(opts.reps));
  std::vector<double> half(static_cast<std::size_t>(opts.reps));
  std::atomic<long long> events{0};
  collect(opts.reps, opts.base_seed, [&](RngStream& rng) {
    struct EndpointSink {
      std::size_t coord;
      double half_t;
      long long at_half = 0;
      long long at_end = 0;
      bool half_seen = false;
      void begin(double, const State& s) { at_end = s[coord]; }
      void jump(double t, const State& s) {
        if (!half_seen && t > half_t) {
          at_half = at_end;  // value before this jump
          half_seen = true;
        }
        at_end = s[coord];
      }
      void end(double, const State&) {
        if (!half_seen) at_half = at_end;
      }
    } sink{coordinate, opts.horizon / 2.0};
    StoppingRule stop = StoppingRule::until(opts.horizon, opts.max_events);
    RunResult r = spec.run_with_sink(stop, rng, sink);
    events.fetch_add(r.events);
    const auto k = rng.stream_index();
    full[k] = static_cast<double>(sink.at_end) / opts.horizon;
    half[k] = static_cast<double>(sink.at_half) / (opts.horizon / 2.0);
    return full[k];
  });

  StationaryEstimate out;
  out.summary = summarize(full, opts.base_seed);
  out.diagnostic = diagnose(full, half, opts.base_seed);
  out.total_events = events.load();
  return out;
}

SurvivalEstimate estimate_survival(double mu_w, long long w0,
                                   const KillSchedule& kills, double horizon,
                                   long long reps, std::uint64_t base_seed,
                                   long long max_events) {
  YuleParams params{mu_w};
  params.validate();
  if (w0 < 1) throw InvalidParameter("survival: w0 must be >= 1");

  std::vector<double> alive(static_cast<std::size_t>(reps));
  std::vector<double> scaled(static_cast<std::size_t>(reps));
  collect(reps, base_seed, [&](RngStream& rng) {
    StoppingRule stop = StoppingRule::until(horizon, max_events);
    KilledYuleResult r = simulate_killed_yule(params, w0, kills, stop, rng);
    const long long w_end = r.trajectory.states.back()[0];
    const auto k = rng.stream_index();
    alive[k] = w_end >= 1 ? 1.0 : 0.0;
    scaled[k] = std::exp(-mu_w * horizon) * static_cast<double>(w_end);
    return alive[k];
  });

  return {summarize(alive, base_seed), summarize(scaled, base_seed)};
}

StationaryEstimate estimate_series_sum(double gamma, const RbhParams& rbh,
                                       long long z0, double horizon,
                                       long long reps,
                                       std::uint64_t base_seed) {
  if (!(gamma > 0.0)) throw InvalidParameter("series sum: gamma must be > 0");
  rbh.validate();

  std::vector<double> full(static_cast<std::size_t>(reps));
  std::vector<double> half(static_cast<std::size_t>(reps));
  collect(reps, base_seed, [&](RngStream& rng) {
    struct SeriesSink {
      double gamma = 0.0;
      double half_t = 0.0;
      long long prev = 0;
      KahanSum sum_full, sum_half;
      void begin(double, const State& s) { prev = s[0]; }
      void jump(double t, const State& s) {
        if (s[0] > prev) {
          const double term = std::exp(-gamma * t);
          sum_full.add(term);
          if (t <= half_t) sum_half.add(term);
        }
        prev = s[0];
      }
      void end(double, const State&) {}
    } sink;
    sink.gamma = gamma;
    sink.half_t = horizon / 2.0;
    StoppingRule stop = StoppingRule::until(horizon);
    simulate(detail::RbhModel{rbh.mu_z, rbh.nu}, State{z0}, stop, rng, sink);
    const auto k = rng.stream_index();
    full[k] = sink.sum_full.value();
    half[k] = sink.sum_half.value();
    return full[k];
  });

  StationaryEstimate out;
  out.summary = summarize(full, base_seed);
  out.diagnostic = diagnose(full, half, base_seed);
  return out;
}

ScalingTable estimate_h0_scaling(double mu_w, const RbhParams& rbh,
                                 const std::vector<long long>& w0_grid,
                                 long long reps, std::uint64_t base_seed,
                                 double safety_horizon) {
  if (w0_grid.empty()) throw InvalidParameter("h0 scaling: empty grid");
  ScalingTable table;
  std::vector<double> xs, ys;
  std::uint64_t seed = base_seed;
  for (long long w0 : w0_grid) {
    std::atomic<long long> excluded{0};
    std::vector<double> h0s = collect(reps, seed, [&](RngStream& rng) {
      WzOutcome wz =
          run_wz_to_extinction(mu_w, rbh, w0, 0, rng, safety_horizon);
      if (!wz.extinct) {
        excluded.fetch_add(1);
        return -1.0;
      }
      return wz.h0;
    });
    std::erase_if(h0s, [](double v) { return v < 0.0; });
    if (h0s.empty())
      throw ModelError("h0 scaling: no extinct runs for w0 = " +
                       std::to_string(w0));
    ScalingRow row;
    row.x = static_cast<double>(w0);
    row.mean = summarize(h0s, seed);
    row.excluded = excluded.load();
    if (row.excluded * 100 > reps) table.flagged = true;
    table.rows.push_back(row);
    xs.push_back(std::log(static_cast<double>(w0)));
    ys.push_back(row.mean.mean);
    ++seed;  // distinct stream block per grid point
  }
  if (xs.size() >= 2) table.fit = fit_affine(xs, ys);
  return table;
}

ScalingTable estimate_nk(const VChainParams& params, long long K,
                         const std::vector<long long>& v_grid, long long reps,
                         std::uint64_t base_seed, long long max_steps) {
  if (v_grid.empty()) throw InvalidParameter("nk: empty grid");
  if (K < 0) throw InvalidParameter("nk: K must be >= 0");
  params.validate();

  ScalingTable table;
  std::vector<double> xs, ys;
  std::uint64_t seed = base_seed;
  for (long long v : v_grid) {
    std::vector<double> steps = collect(reps, seed, [&](RngStream& rng) {
      if (v <= K) return 0.0;
      long long value = v;
      for (long long n = 1; n <= max_steps; ++n) {
        WzOutcome wz = run_wz_to_extinction(params.mu_w, params.rbh, 1, value,
                                            rng, params.safety_horizon);
        if (!wz.extinct)
          throw ModelError("nk: non-extinct step at v = " +
                           std::to_string(value));
        long long kept;
        if (params.thinning == ThinningVariant::Bernoulli) {
          kept = rng.binomial(wz.z_at_h0, params.p);
        } else {
          const double window = rng.exponential(params.mu_w);
          kept = rng.binomial(wz.z_at_h0, std::exp(-params.rbh.nu * window));
        }
        value = kept;
        if (value <= K) return static_cast<double>(n);
      }
      throw ModelError("nk: chain failed to enter [0,K] within " +
                       std::to_string(max_steps) + " steps");
    });
    ScalingRow row;
    row.x = static_cast<double>(v);
    row.mean = summarize(steps, seed);
    table.rows.push_back(row);
    if (v > K) {
      xs.push_back(std::log1p(static_cast<double>(v)));
      ys.push_back(row.mean.mean);
    }
    ++seed;
  }
  if (xs.size() >= 2) table.fit = fit_affine(xs, ys);
  return table;
}

}  // namespace chunksim
