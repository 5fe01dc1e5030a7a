#ifndef CHUNKSIM_RUNNER_HPP
#define CHUNKSIM_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "chunksim/config.hpp"

namespace chunksim {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSimulationError = 2;
inline constexpr int kExitValidationFailure = 3;

// Runs one experiment: dispatches on config.command, writes the output file
// when config.output is set, and prints a one-line summary to `out`.
// Returns an exit code instead of throwing.
int execute(const ExperimentConfig& config, std::ostream& out,
            std::ostream& err);

// Built-in distributional/coupling/martingale checks behind the `validate`
// command. Prints one PASS/FAIL line per property.
bool run_validation_suite(std::uint64_t seed, std::ostream& out);

}  // namespace chunksim

#endif  // CHUNKSIM_RUNNER_HPP
