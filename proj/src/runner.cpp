#include "chunksim/runner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "chunksim/analysis.hpp"
#include "chunksim/estimators.hpp"
#include "chunksim/io.hpp"
#include "chunksim/processes.hpp"

namespace chunksim {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string summary_line(const std::string& name, const EstimateSummary& s) {
  return name + " = " + format_double(s.mean) + " ± " +
         format_double(s.ci_half_width) +
         " (se=" + format_double(s.std_error) +
         ", reps=" + std::to_string(s.replications) +
         ", seed=" + std::to_string(s.base_seed) + ")";
}

KillSchedule schedule_from(const ExperimentConfig& c) {
  const long long kind = c.int_or("schedule", 0);
  if (kind == 0) return KillSchedule::linear(c.value_or("spacing", 1.0));
  if (kind == 1) return KillSchedule::logarithmic(c.value_or("scale", 1.0));
  if (kind == 2) return KillSchedule::none();
  throw ConfigError("parameter 'schedule' must be 0 (linear), 1 (log) or 2 "
                    "(none)");
}

RateFunction rate_fn_from(const ExperimentConfig& c) {
  const long long kind = c.int_or("rate_fn", 0);
  if (kind == 0) return RateFunction::constant(c.value_or("delta", 1.0));
  if (kind == 1) return RateFunction::download_share();
  if (kind == 2) return RateFunction::capped_ratio(c.value_or("alpha", 1.0));
  throw ConfigError(
      "parameter 'rate_fn' must be 0 (constant), 1 (download_share) or 2 "
      "(capped_ratio)");
}

ProcessSpec spec_from(const ExperimentConfig& c) {
  if (c.model.empty()) throw ConfigError("this command needs a 'model'");
  ProcessSpec spec;
  spec.model = c.model;
  if (c.model == "yule") {
    spec.yule = YuleParams{c.at("mu")};
    spec.init = {c.int_or("y0", 1)};
  } else if (c.model == "killed_yule") {
    spec.yule = YuleParams{c.at("mu")};
    spec.kills = schedule_from(c);
    spec.init = {c.int_or("w0", 1)};
  } else if (c.model == "rbh" || c.model == "rbh_timechange") {
    spec.rbh = RbhParams{c.at("mu_z"), c.at("nu")};
    spec.init = {c.int_or("z0", 0)};
  } else if (c.model == "single_chunk" || c.model == "coupled") {
    spec.single_chunk =
        SingleChunkParams{c.at("lambda"), c.at("mu"), c.at("nu"),
                          rate_fn_from(c),
                          c.int_or("boundary", 0) == 1 ? BoundaryKind::PlusOne
                                                       : BoundaryKind::OrOne};
    spec.init = {c.int_or("x0", 0), c.int_or("x1", 0)};
    spec.coupled_mode =
        c.int_or("mode", 0) == 1 ? CoupledMode::Lower : CoupledMode::Upper;
    spec.coupled_delta = c.value_or("delta", 0.5);
  } else if (c.model == "free") {
    spec.model = "free";
    spec.single_chunk =
        SingleChunkParams{c.at("lambda"), c.at("mu"), c.at("nu")};
    spec.free_delta = c.value_or("delta", 1.0);
    spec.init = {static_cast<long long>(c.value_or("y0", 0)),
                 c.int_or("y1", 0)};
  } else if (c.model == "two_chunk") {
    spec.two_chunk =
        TwoChunkParams{c.at("lambda"), c.at("mu1"), c.at("mu2"), c.at("nu")};
    spec.init = {c.int_or("x0", 0), c.int_or("x1", 0), c.int_or("x2", 0)};
  } else if (c.model == "saturated") {
    spec.saturated = SaturatedParams{c.at("mu1"), c.at("mu2"), c.at("nu")};
    spec.init = {c.int_or("z1", 1), c.int_or("z2", 1)};
  } else if (c.model == "branching") {
    spec.branching = BranchingParams{c.at("p"), c.at("rate")};
    spec.init = {c.int_or("z0", 1)};
  } else if (c.model == "wz") {
    spec.wz_mu_w = c.at("mu_w");
    spec.rbh = RbhParams{c.at("mu_z"), c.at("nu")};
    spec.init = {c.int_or("w0", 1), c.int_or("z0", 0)};
  } else if (c.model == "v_chain") {
    spec.v_chain.p = c.value_or("p", 0.5);
    spec.v_chain.mu_w = c.at("mu_w");
    spec.v_chain.rbh = RbhParams{c.at("mu_z"), c.at("nu")};
    spec.v_chain.thinning = c.int_or("variant", 0) == 1
                                ? ThinningVariant::ExpWindow
                                : ThinningVariant::Bernoulli;
    spec.v_chain.safety_horizon = c.value_or("safety_horizon", 1e6);
    spec.init = {c.int_or("v0", 100)};
  } else {
    throw ConfigError("unknown model '" + c.model + "'");
  }
  return spec;
}

void emit(const ExperimentConfig& c, const ResultWriter& w,
          std::ostream& out) {
  if (!c.output.empty()) {
    w.write_file(c.output);
    out << "wrote " << c.output << "\n";
  }
}

// --------------------------- simulate ------------------------------------

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  ProcessSpec spec = spec_from(c);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  const long long grid_points = c.int_or("grid_points", 0);

  if (c.model == "wz") {
    w.summary_header();
    std::vector<double> h0s, zs, ms;
    for (long long rep = 0; rep < c.reps; ++rep) {
      RngStream rng(c.seed, static_cast<std::uint64_t>(rep));
      WzOutcome wz = run_wz_to_extinction(
          spec.wz_mu_w, spec.rbh, spec.init[0], spec.init[1], rng,
          c.value_or("safety_horizon", c.horizon));
      if (!wz.extinct)
        throw ModelError("wz run " + std::to_string(rep) +
                         " not extinct by the safety horizon");
      h0s.push_back(wz.h0);
      zs.push_back(static_cast<double>(wz.z_at_h0));
      ms.push_back(wz.my_star);
    }
    w.summary_row("h0", summarize(h0s, c.seed));
    w.summary_row("z_at_h0", summarize(zs, c.seed));
    w.summary_row("my_star", summarize(ms, c.seed));
    emit(c, w, out);
    out << summary_line("h0", summarize(h0s, c.seed)) << "\n";
    return kExitOk;
  }

  if (c.model == "v_chain") {
    w.trajectory_header(1);
    std::vector<double> finals;
    const long long steps = c.int_or("steps", 100);
    for (long long rep = 0; rep < c.reps; ++rep) {
      RngStream rng(c.seed, static_cast<std::uint64_t>(rep));
      VChainRun run = v_chain_simulate(spec.v_chain, spec.init[0], steps, rng);
      for (std::size_t n = 0; n < run.values.size(); ++n)
        w.trajectory_row(rep, static_cast<double>(n), {run.values[n]});
      finals.push_back(static_cast<double>(run.values.back()));
    }
    emit(c, w, out);
    out << summary_line("v_final", summarize(finals, c.seed)) << "\n";
    return kExitOk;
  }

  if (c.model == "coupled") {
    w.trajectory_header(4);
    long long tau = 0, sigma = 0;
    for (long long rep = 0; rep < c.reps; ++rep) {
      RngStream rng(c.seed, static_cast<std::uint64_t>(rep));
      CoupledResult r = simulate_coupled(
          spec.coupled_mode, spec.single_chunk, spec.coupled_delta,
          spec.init[0], spec.init[1], StoppingRule::until(c.horizon), rng);
      for (std::size_t k = 0; k < r.network.times.size(); ++k)
        w.trajectory_row(rep, r.network.times[k],
                         {r.network.states[k][0], r.network.states[k][1],
                          r.free.states[k][0], r.free.states[k][1]});
      if (r.stop_reason == CoupledStop::TauDelta) ++tau;
      if (r.stop_reason == CoupledStop::Sigma) ++sigma;
    }
    emit(c, w, out);
    out << "coupled runs: " << c.reps << " (tau_delta " << tau << ", sigma "
        << sigma << ", zero ordering violations)\n";
    return kExitOk;
  }

  // Plain trajectory models.
  w.trajectory_header(spec.dimension());
  long long events = 0;
  for (long long rep = 0; rep < c.reps; ++rep) {
    RngStream rng(c.seed, static_cast<std::uint64_t>(rep));
    StoppingRule stop = StoppingRule::until(c.horizon);
    Trajectory traj;
    if (grid_points > 0 && c.model != "killed_yule" &&
        c.model != "rbh_timechange") {
      std::vector<double> grid;
      for (long long g = 1; g <= grid_points; ++g)
        grid.push_back(c.horizon * static_cast<double>(g) /
                       static_cast<double>(grid_points));
      GridSink sink(std::move(grid));
      RunResult r = spec.run_with_sink(stop, rng, sink);
      traj = sink.take(r.end_reason);
    } else {
      traj = spec.run(stop, rng);
    }
    events += static_cast<long long>(traj.jump_count());
    for (std::size_t k = 0; k < traj.times.size(); ++k)
      w.trajectory_row(rep, traj.times[k], traj.states[k]);
  }
  emit(c, w, out);
  out << "simulated " << c.reps << " run(s), " << events
      << " recorded events\n";
  return kExitOk;
}

// --------------------------- classify ------------------------------------

int cmd_classify(const ExperimentConfig& c, std::ostream& out) {
  StabilityVerdict v;
  double lambda = c.at("lambda");
  if (c.model == "single_chunk") {
    SingleChunkParams p{lambda, c.at("mu"), c.at("nu"), rate_fn_from(c),
                        c.int_or("boundary", 0) == 1 ? BoundaryKind::PlusOne
                                                     : BoundaryKind::OrOne};
    v = classify_single_chunk(p);
  } else if (c.model == "two_chunk") {
    TwoChunkParams p{lambda, c.at("mu1"), c.at("mu2"), c.at("nu")};
    std::optional<EstimateSummary> ls;
    std::optional<TailDiagnostic> diag;
    if (c.int_or("estimate_lambda_s", 0) == 1) {
      ProcessSpec sat;
      sat.model = "saturated";
      sat.saturated = SaturatedParams{p.mu1, p.mu2, p.nu};
      sat.init = {1, 1};
      StationaryEstimateOptions opts;
      opts.horizon = c.horizon;
      opts.reps = c.reps;
      opts.base_seed = c.seed;
      StationaryEstimate est = estimate_stationary_departure_rate(sat, opts);
      ls = est.summary;
      diag = est.diagnostic;
    }
    v = classify_two_chunk(p, ls, diag);
  } else {
    throw ConfigError("classify needs model 'single_chunk' or 'two_chunk'");
  }

  std::string line = to_string(v.verdict);
  if (v.threshold && std::isfinite(*v.threshold)) {
    const char* rel = v.verdict == Verdict::Transient  ? " > "
                      : v.verdict == Verdict::Ergodic  ? " < "
                                                       : " = ";
    const std::string star =
        c.model == "two_chunk" && v.regime == "two-chunk case 2" ? "λ^S"
                                                                 : "λ*";
    line += " (λ=" + format_double(lambda) + rel + star + "=" +
            fmt6(*v.threshold) + ")";
  } else if (v.regime.find("mu >= nu") != std::string::npos) {
    line += " (μ ≥ ν)";
  }
  if (!v.citation.empty()) line += " [" + v.citation + "]";
  if (!v.note.empty()) line += " — " + v.note;
  out << line << "\n";

  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.scalar_row("verdict_" + to_string(v.verdict),
               v.threshold ? *v.threshold : std::nan(""), c.seed);
  emit(c, w, out);
  return kExitOk;
}

// --------------------------- closed forms ---------------------------------

int cmd_lambda_star(const ExperimentConfig& c, std::ostream& out) {
  double value;
  if (c.model == "two_chunk") {
    value = lambda_star(ThresholdModel::TwoChunk, c.at("mu2"), c.at("nu"));
  } else if (c.model == "single_chunk" || c.model == "free" ||
             c.model.empty()) {
    const bool plus_one = c.int_or("boundary", 0) == 1;
    value = plus_one
                ? lambda_star(ThresholdModel::FreePlusOne, c.at("mu"),
                              c.at("nu"))
                : lambda_star(ThresholdModel::FreeOrOne, c.at("mu"),
                              c.at("nu"), c.value_or("delta", 1.0));
  } else {
    throw ConfigError("lambda-star needs single_chunk, free or two_chunk");
  }
  out << format_double_repr(value) << "\n";
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.scalar_row("lambda_star", value, c.seed);
  emit(c, w, out);
  return kExitOk;
}

// --------------------------- estimators -----------------------------------

int cmd_survival(const ExperimentConfig& c, std::ostream& out) {
  SurvivalEstimate est =
      estimate_survival(c.at("mu_w"), c.int_or("w0", 1), schedule_from(c),
                        c.horizon, c.reps, c.seed);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.summary_row("survival_prob", est.survival_prob);
  w.summary_row("mw_mean", est.mw_mean);
  emit(c, w, out);
  out << summary_line("survival_prob", est.survival_prob) << "\n";
  return kExitOk;
}

int cmd_series(const ExperimentConfig& c, std::ostream& out) {
  StationaryEstimate est =
      estimate_series_sum(c.at("gamma"), RbhParams{c.at("mu_z"), c.at("nu")},
                          c.int_or("z0", 0), c.horizon, c.reps, c.seed);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.summary_row("series_sum", est.summary);
  w.scalar_row("stabilized", est.diagnostic.stabilized ? 1.0 : 0.0, c.seed);
  w.scalar_row("max_to_sum_ratio", est.diagnostic.max_to_sum_ratio, c.seed);
  emit(c, w, out);
  out << summary_line("series_sum", est.summary)
      << (est.diagnostic.stabilized ? " [stabilized]" : " [NOT stabilized]")
      << "\n";
  return kExitOk;
}

std::vector<long long> grid_from(const ExperimentConfig& c,
                                 std::vector<long long> fallback) {
  if (c.grid.empty()) return fallback;
  std::vector<long long> g;
  for (double v : c.grid) g.push_back(static_cast<long long>(v));
  return g;
}

int cmd_h0_scaling(const ExperimentConfig& c, std::ostream& out) {
  ScalingTable t = estimate_h0_scaling(
      c.at("mu_w"), RbhParams{c.at("mu_z"), c.at("nu")},
      grid_from(c, {1, 10, 100, 1000}), c.reps, c.seed,
      c.value_or("safety_horizon", 1e4));
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  for (const auto& row : t.rows)
    w.summary_row("h0_w0=" + format_double(row.x), row.mean);
  w.scalar_row("fit_slope", t.fit.slope, c.seed);
  w.scalar_row("fit_intercept", t.fit.intercept, c.seed);
  w.scalar_row("fit_max_rel_residual", t.fit.max_rel_residual, c.seed);
  emit(c, w, out);
  out << "h0 affine-in-log fit: slope=" << format_double(t.fit.slope)
      << " intercept=" << format_double(t.fit.intercept)
      << " max_rel_residual=" << format_double(t.fit.max_rel_residual)
      << (t.flagged ? " [flagged: >1% non-extinct exclusions]" : "") << "\n";
  return kExitOk;
}

int cmd_vchain(const ExperimentConfig& c, std::ostream& out) {
  VChainParams p;
  p.p = c.value_or("p", 0.5);
  p.mu_w = c.at("mu_w");
  p.rbh = RbhParams{c.at("mu_z"), c.at("nu")};
  p.thinning = c.int_or("variant", 0) == 1 ? ThinningVariant::ExpWindow
                                           : ThinningVariant::Bernoulli;
  p.safety_horizon = c.value_or("safety_horizon", 1e6);
  ScalingTable t =
      estimate_nk(p, c.int_or("k", 50), grid_from(c, {10, 100, 1000, 10000}),
                  c.reps, c.seed);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  for (const auto& row : t.rows)
    w.summary_row("nk_v=" + format_double(row.x), row.mean);
  w.scalar_row("fit_slope", t.fit.slope, c.seed);
  w.scalar_row("fit_intercept", t.fit.intercept, c.seed);
  w.scalar_row("fit_max_rel_residual", t.fit.max_rel_residual, c.seed);
  emit(c, w, out);
  out << "N_K affine-in-log fit: slope=" << format_double(t.fit.slope)
      << " intercept=" << format_double(t.fit.intercept)
      << " max_rel_residual=" << format_double(t.fit.max_rel_residual) << "\n";
  return kExitOk;
}

int cmd_lambda_s(const ExperimentConfig& c, std::ostream& out) {
  ProcessSpec spec = spec_from(c);
  if (spec.model != "rbh" && spec.model != "saturated")
    throw ConfigError("lambda-s needs model 'rbh' or 'saturated'");
  StationaryEstimateOptions opts;
  opts.horizon = c.horizon;
  opts.reps = c.reps;
  opts.base_seed = c.seed;
  if (c.has("burn_in")) opts.burn_in = c.at("burn_in");
  StationaryEstimate est = estimate_stationary_departure_rate(spec, opts);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.summary_row("lambda_s", est.summary);
  w.scalar_row("stabilized", est.diagnostic.stabilized ? 1.0 : 0.0, c.seed);
  w.scalar_row("max_to_sum_ratio", est.diagnostic.max_to_sum_ratio, c.seed);
  emit(c, w, out);
  out << summary_line("lambda_s", est.summary)
      << (est.diagnostic.stabilized ? " [stabilized]" : " [NOT stabilized]")
      << "\n";
  return kExitOk;
}

int cmd_drift(const ExperimentConfig& c, std::ostream& out) {
  ProcessSpec spec = spec_from(c);
  StationaryEstimateOptions opts;
  opts.horizon = c.horizon;
  opts.reps = c.reps;
  opts.base_seed = c.seed;
  StationaryEstimate est =
      estimate_growth_slope(spec, static_cast<std::size_t>(c.int_or("coord", 0)),
                            opts);
  ResultWriter w(c.format == OutputFormat::JsonLines, c.canonical_json());
  w.summary_header();
  w.summary_row("growth_slope", est.summary);
  emit(c, w, out);
  out << summary_line("growth_slope", est.summary) << "\n";
  return kExitOk;
}

}  // namespace

int execute(const ExperimentConfig& config, std::ostream& out,
            std::ostream& err) {
  try {
    if (config.command == "simulate") return cmd_simulate(config, out);
    if (config.command == "classify") return cmd_classify(config, out);
    if (config.command == "lambda-star") return cmd_lambda_star(config, out);
    if (config.command == "survival") return cmd_survival(config, out);
    if (config.command == "series") return cmd_series(config, out);
    if (config.command == "h0-scaling") return cmd_h0_scaling(config, out);
    if (config.command == "vchain") return cmd_vchain(config, out);
    if (config.command == "lambda-s") return cmd_lambda_s(config, out);
    if (config.command == "drift") return cmd_drift(config, out);
    if (config.command == "validate")
      return run_validation_suite(config.seed, out) ? kExitOk
                                                    : kExitValidationFailure;
    err << "error: unknown command '" << config.command << "'\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ReplicationError& e) {
    err << "simulation error: " << e.what() << "\n";
    return kExitSimulationError;
  } catch (const Error& e) {
    err << "simulation error: " << e.what() << "\n";
    return kExitSimulationError;
  }
}

}  // namespace chunksim
