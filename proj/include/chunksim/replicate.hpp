// Replication harness: rep k runs on stream (base_seed, k), so every
// replication is individually reproducible and the batch is embarrassingly
// parallel. Aggregation happens in stream order regardless of scheduling,
// which keeps results byte-stable.

#ifndef CHUNKSIM_REPLICATE_HPP
#define CHUNKSIM_REPLICATE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "chunksim/rng.hpp"
#include "chunksim/summary.hpp"

namespace chunksim {

// Runs `fn` on streams (base_seed, 0..reps-1) and returns the per-rep values
// in stream order. Throws ReplicationError naming the lowest failing stream.
std::vector<double> collect(long long reps, std::uint64_t base_seed,
                            const std::function<double(RngStream&)>& fn);

inline EstimateSummary replicate(
    long long reps, std::uint64_t base_seed,
    const std::function<double(RngStream&)>& fn,
    double confidence_level = 0.95) {
  return summarize(collect(reps, base_seed, fn), base_seed, confidence_level);
}

// Largest |value| over the sum of |values|; near 1/reps for well-behaved
// statistics, near 1 when a single replication dominates (heavy tail).
double max_to_sum_ratio(const std::vector<double>& values);

}  // namespace chunksim

#endif  // CHUNKSIM_REPLICATE_HPP
