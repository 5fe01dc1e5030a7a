#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "chunksim/ctmc.hpp"
#include "chunksim/replicate.hpp"
#include "chunksim/rng.hpp"
#include "chunksim/stats.hpp"
#include "chunksim/summary.hpp"

using namespace chunksim;

TEST_CASE("identical seeds give identical draw sequences") {
  RngStream a(42, 7), b(42, 7);
  for (int k = 0; k < 1000; ++k) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, 7), d(42, 8);
  bool same = true;
  for (int k = 0; k < 64; ++k) same = same && (c.next_u64() == d.next_u64());
  CHECK_FALSE(same);
}

TEST_CASE("paired streams are uncorrelated") {
  RngStream a(2024, 0), b(2024, 1);
  const std::size_t n = 1'000'000;
  std::vector<double> u(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = a.uniform();
    v[k] = b.uniform();
  }
  CHECK(std::abs(pearson_correlation(u, v)) < 0.01);
}

TEST_CASE("exponential sampler moments") {
  RngStream rng(1, 0);
  const std::size_t n = 1'000'000;
  KahanSum sum;
  for (std::size_t k = 0; k < n; ++k) sum.add(sample_exponential(1.0, rng));
  const double mean = sum.value() / static_cast<double>(n);
  CHECK(mean > 0.995);
  CHECK(mean < 1.005);

  RngStream rng2(1, 1);
  std::vector<double> xs(n);
  for (auto& x : xs) x = sample_exponential(2.0, rng2);
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(n);
  double var = 0.0;
  for (double x : xs) var += (x - m) * (x - m);
  var /= static_cast<double>(n - 1);
  CHECK(var > 0.245);
  CHECK(var < 0.255);

  CHECK_THROWS_AS(sample_exponential(0.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_exponential(-1.0, rng), InvalidParameter);
  CHECK_THROWS_AS(
      sample_exponential(std::numeric_limits<double>::infinity(), rng),
      InvalidParameter);
}

TEST_CASE("exponential sampler is deterministic per stream") {
  RngStream a(99, 3), b(99, 3);
  for (int k = 0; k < 100; ++k) {
    const double x = a.exponential(1.0);
    const double y = b.exponential(1.0);
    CHECK(x == y);
  }
}

TEST_CASE("discrete samplers match their laws") {
  RngStream rng(7, 0);

  SUBCASE("poisson small and large mean moments") {
    for (double mean : {3.0, 40.0, 300.0}) {
      const int n = 40'000;
      double m = 0.0, s2 = 0.0;
      std::vector<long long> xs(n);
      for (auto& x : xs) x = rng.poisson(mean);
      for (auto x : xs) m += static_cast<double>(x);
      m /= n;
      for (auto x : xs) s2 += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
      s2 /= n - 1;
      CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
      CHECK(std::abs(s2 - mean) < 0.05 * mean);
    }
  }

  SUBCASE("binomial mean") {
    const int n = 20'000;
    double m = 0.0;
    for (int k = 0; k < n; ++k)
      m += static_cast<double>(rng.binomial(1000, 0.3));
    m /= n;
    CHECK(std::abs(m - 300.0) < 1.5);
  }

  SUBCASE("negative binomial agrees between the two sampling routes") {
    // r = 50 goes through geometric summation, r = 65 through gamma-Poisson;
    // compare their scaled means and variances against r(1-p)/p, r(1-p)/p^2.
    for (double r : {50.0, 65.0, 4000.0}) {
      const double p = 0.4;
      const int n = 30'000;
      double m = 0.0, s2 = 0.0;
      std::vector<double> xs(n);
      for (auto& x : xs) x = static_cast<double>(rng.negative_binomial(r, p));
      for (auto x : xs) m += x;
      m /= n;
      for (auto x : xs) s2 += (x - m) * (x - m);
      s2 /= n - 1;
      const double want_mean = r * (1 - p) / p;
      const double want_var = r * (1 - p) / (p * p);
      CHECK(std::abs(m - want_mean) < 5.0 * std::sqrt(want_var / n));
      CHECK(std::abs(s2 - want_var) / want_var < 0.08);
    }
  }
}

namespace {

// Rate-1 Poisson counter.
struct PoissonModel {
  void transitions(const State&, TransitionBuffer& buf) const {
    buf.add(1.0, {+1});
  }
};

struct FrozenModel {
  void transitions(const State&, TransitionBuffer& buf) const {
    buf.add(0.0, {+1});
  }
};

// Two-state flip chain: 0 -> 1 at rate a, 1 -> 0 at rate b.
struct FlipModel {
  double a, b;
  void transitions(const State& s, TransitionBuffer& buf) const {
    if (s[0] == 0)
      buf.add(a, {+1});
    else
      buf.add(b, {-1});
  }
};

}  // namespace

TEST_CASE("poisson counter hits its rate") {
  RngStream rng(5, 0);
  TrajectorySink sink;
  RunResult r = simulate(PoissonModel{}, State{0}, StoppingRule::until(1000.0),
                         rng, sink);
  CHECK(r.end_reason == EndReason::Horizon);
  const double per_unit = static_cast<double>(r.final_state[0]) / 1000.0;
  CHECK(per_unit > 0.97);
  CHECK(per_unit < 1.03);
}

TEST_CASE("all-zero rates absorb immediately") {
  RngStream rng(5, 1);
  Trajectory traj = run_ctmc(
      [](const State&) {
        return std::vector<std::pair<double, State>>{{0.0, State{1}}};
      },
      State{3}, StoppingRule::until(10.0), rng);
  CHECK(traj.jump_count() == 0);
  CHECK(traj.end_reason == EndReason::Absorbed);
  CHECK(traj.degenerate);
  CHECK(traj.end_time == 10.0);
}

TEST_CASE("negative rates are rejected") {
  RngStream rng(5, 2);
  CHECK_THROWS_AS(run_ctmc(
                      [](const State&) {
                        return std::vector<std::pair<double, State>>{
                            {-1.0, State{1}}};
                      },
                      State{0}, StoppingRule::until(1.0), rng),
                  ModelError);
}

TEST_CASE("event budget flags the run") {
  RngStream rng(5, 3);
  StoppingRule stop = StoppingRule::events(100);
  TrajectorySink sink;
  RunResult r = simulate(PoissonModel{}, State{0}, stop, rng, sink);
  CHECK(r.end_reason == EndReason::EventBudget);
  CHECK(r.events == 100);
}

TEST_CASE("stopping rule must terminate") {
  StoppingRule bad;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("two-state occupancy matches b/(a+b)") {
  RngStream rng(11, 0);
  TimeAverageSink avg(0, 0.0, 5000.0);
  simulate(FlipModel{1.0, 2.0}, State{0}, StoppingRule::until(10'000.0), rng,
           avg);
  // fraction of time in state 0 = 1 - average of the indicator coordinate
  const double frac0 = 1.0 - avg.average();
  CHECK(std::abs(frac0 - 2.0 / 3.0) < 0.01 * (2.0 / 3.0) + 0.005);
}

TEST_CASE("trajectory invariants hold on random models") {
  // Times strictly increase and consecutive states differ by one admissible
  // jump of the generating model.
  std::mt19937 meta(123);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = std::uniform_real_distribution<>(0.2, 3.0)(meta);
    const double b = std::uniform_real_distribution<>(0.2, 3.0)(meta);
    RngStream rng(77, static_cast<std::uint64_t>(trial));
    Trajectory traj = run_ctmc(
        [a, b](const State& s) {
          std::vector<std::pair<double, State>> ts;
          ts.push_back({a, State{+1}});
          if (s[0] > 0) ts.push_back({b * static_cast<double>(s[0]), State{-1}});
          return ts;
        },
        State{0}, StoppingRule::until(50.0), rng);
    REQUIRE(traj.times.size() == traj.states.size());
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      CHECK(traj.times[k] > traj.times[k - 1]);
      const long long diff = traj.states[k][0] - traj.states[k - 1][0];
      CHECK((diff == 1 || diff == -1));
    }
    CHECK(traj.end_time >= traj.times.back());
    // Right-continuity: value at an epoch equals the post-jump state.
    if (traj.jump_count() > 0)
      CHECK(traj.coord_at(traj.times[1], 0) == traj.states[1][0]);
  }
}

TEST_CASE("grid sink thins to the observation grid") {
  RngStream rng(13, 0);
  GridSink sink({1.0, 2.0, 3.0, 4.0, 5.0});
  simulate(PoissonModel{}, State{0}, StoppingRule::until(5.0), rng, sink);
  Trajectory t = sink.take(EndReason::Horizon);
  RngStream rng2(13, 0);
  Trajectory full = run_ctmc(
      [](const State&) {
        return std::vector<std::pair<double, State>>{{1.0, State{+1}}};
      },
      State{0}, StoppingRule::until(5.0), rng2);
  for (double g : {1.0, 2.0, 3.0, 4.0, 5.0})
    CHECK(t.coord_at(g, 0) == full.coord_at(g, 0));
}

TEST_CASE("replicate: degenerate reducer") {
  EstimateSummary s = replicate(100, 1, [](RngStream&) { return 1.0; });
  CHECK(s.mean == 1.0);
  CHECK(s.ci_half_width == 0.0);
  CHECK(s.replications == 100);
}

TEST_CASE("replicate: exponential reducer lands on its mean") {
  EstimateSummary s = replicate(
      10'000, 2, [](RngStream& rng) { return rng.exponential(1.0); });
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.std_error);
}

TEST_CASE("replicate: bit-identical reruns") {
  auto fn = [](RngStream& rng) { return rng.exponential(0.7); };
  EstimateSummary a = replicate(500, 3, fn);
  EstimateSummary b = replicate(500, 3, fn);
  CHECK(a.mean == b.mean);
  CHECK(a.ci_half_width == b.ci_half_width);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("replicate: failures name the stream") {
  try {
    collect(10, 4, [](RngStream& rng) -> double {
      if (rng.stream_index() == 6) throw InvalidParameter("boom");
      return 0.0;
    });
    FAIL("expected ReplicationError");
  } catch (const ReplicationError& e) {
    CHECK(e.stream_index == 6);
    CHECK(std::string(e.what()).find("stream 6") != std::string::npos);
  }
}

TEST_CASE("aggregation is permutation invariant") {
  RngStream rng(21, 0);
  std::vector<double> values(5000);
  for (auto& v : values) v = rng.exponential(1.0) - 0.9;
  EstimateSummary a = summarize(values, 0);
  std::mt19937 shuffler(9);
  std::shuffle(values.begin(), values.end(), shuffler);
  EstimateSummary b = summarize(values, 0);
  CHECK(std::abs(a.mean - b.mean) <= 1e-12 * std::max(1.0, std::abs(a.mean)));
  CHECK(std::abs(a.ci_half_width - b.ci_half_width) <=
        1e-12 * std::max(1.0, a.ci_half_width));
}

TEST_CASE("normal quantile reference values") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-8));
  CHECK(normal_quantile(0.6) == doctest::Approx(0.2533471031357997).epsilon(1e-8));
}
