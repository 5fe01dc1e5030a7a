#ifndef CHUNKSIM_ERRORS_HPP
#define CHUNKSIM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chunksim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument to a formula or sampler (rates, domains, probabilities).
struct InvalidParameter : Error {
  using Error::Error;
};

// A model produced an inadmissible transition (negative/non-finite rate,
// rate-function value outside [0,1], ...).
struct ModelError : Error {
  using Error::Error;
};

// A replication failed; carries the stream index that produced it.
struct ReplicationError : Error {
  ReplicationError(std::uint64_t stream_index, const std::string& what)
      : Error("replication on stream " + std::to_string(stream_index) +
              " failed: " + what),
        stream_index(stream_index) {}
  std::uint64_t stream_index;
};

// Pathwise ordering broken in a coupled run. Indicates a bug, not bad input.
struct CouplingOrderingError : Error {
  using Error::Error;
};

// Config file / CLI argument problems.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace chunksim

#endif  // CHUNKSIM_ERRORS_HPP
