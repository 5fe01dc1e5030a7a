#include "chunksim/replicate.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace chunksim {

namespace {

unsigned worker_count(long long reps) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("CHUNKSIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = 1;
  if (reps < static_cast<long long>(n)) n = static_cast<unsigned>(reps);
  return n;
}

}  // namespace

std::vector<double> collect(long long reps, std::uint64_t base_seed,
                            const std::function<double(RngStream&)>& fn) {
  if (reps < 1) throw InvalidParameter("reps must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(reps));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(reps));

  const unsigned workers = worker_count(reps);
  if (workers <= 1) {
    for (long long k = 0; k < reps; ++k) {
      RngStream rng(base_seed, static_cast<std::uint64_t>(k));
      try {
        values[static_cast<std::size_t>(k)] = fn(rng);
      } catch (...) {
        failures[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  } else {
    std::atomic<long long> next{0};
    auto work = [&] {
      for (;;) {
        const long long k = next.fetch_add(1);
        if (k >= reps) return;
        RngStream rng(base_seed, static_cast<std::uint64_t>(k));
        try {
          values[static_cast<std::size_t>(k)] = fn(rng);
        } catch (...) {
          failures[static_cast<std::size_t>(k)] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (long long k = 0; k < reps; ++k) {
    if (failures[static_cast<std::size_t>(k)]) {
      try {
        std::rethrow_exception(failures[static_cast<std::size_t>(k)]);
      } catch (const std::exception& e) {
        throw ReplicationError(static_cast<std::uint64_t>(k), e.what());
      }
    }
  }
  return values;
}

double max_to_sum_ratio(const std::vector<double>& values) {
  double maxabs = 0.0;
  KahanSum sum;
  for (double v : values) {
    maxabs = std::max(maxabs, std::abs(v));
    sum.add(std::abs(v));
  }
  const double total = sum.value();
  if (total <= 0.0) return 0.0;
  return std::min(maxabs / total, 1.0);
}

}  // namespace chunksim
