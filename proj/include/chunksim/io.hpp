#ifndef CHUNKSIM_IO_HPP
#define CHUNKSIM_IO_HPP

#include <string>
#include <vector>

#include "chunksim/summary.hpp"

namespace chunksim {

// Shortest decimal string that round-trips back to the same double
// ("17", "0.1", "1.1812322182992825").
std::string format_double(double v);

// Python-style float repr: integral values keep a trailing ".0".
std::string format_double_repr(double v);

// Row-oriented writer for the two record kinds the tool emits. The first
// line of every file is a '#' comment holding the resolved config JSON, so
// results are self-describing; re-running the same config reproduces the
// file byte for byte.
class ResultWriter {
 public:
  ResultWriter(bool json_lines, std::string config_comment);

  void trajectory_header(std::size_t coords);
  void trajectory_row(long long rep, double t,
                      const std::vector<long long>& coords);
  void summary_header();
  void summary_row(const std::string& metric, const EstimateSummary& s);
  // Free-form scalar row in the summary schema (ci/se zero).
  void scalar_row(const std::string& metric, double value,
                  std::uint64_t seed);

  const std::string& str() const { return out_; }
  void write_file(const std::string& path) const;

 private:
  bool json_lines_;
  std::string out_;
  std::vector<std::string> columns_;
};

}  // namespace chunksim

#endif  // CHUNKSIM_IO_HPP
