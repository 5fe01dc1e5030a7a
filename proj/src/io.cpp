#include "chunksim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "chunksim/errors.hpp"

namespace chunksim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_double_repr(double v) {
  std::string s = format_double(v);
  if (std::isfinite(v) && s.find('.') == std::string::npos &&
      s.find('e') == std::string::npos && s.find("inf") == std::string::npos &&
      s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

ResultWriter::ResultWriter(bool json_lines, std::string config_comment)
    : json_lines_(json_lines) {
  out_ = "# " + std::move(config_comment) + "\n";
}

void ResultWriter::trajectory_header(std::size_t coords) {
  columns_.clear();
  columns_.emplace_back("rep");
  columns_.emplace_back("t");
  for (std::size_t k = 0; k < coords; ++k)
    columns_.push_back("coord" + std::to_string(k));
  if (!json_lines_) {
    std::string line;
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      if (k) line += ',';
      line += columns_[k];
    }
    out_ += line + "\n";
  }
}

void ResultWriter::trajectory_row(long long rep, double t,
                                  const std::vector<long long>& coords) {
  if (json_lines_) {
    std::string line = "{\"rep\":" + std::to_string(rep) +
                       ",\"t\":" + format_double(t);
    for (std::size_t k = 0; k < coords.size(); ++k)
      line += ",\"coord" + std::to_string(k) +
              "\":" + std::to_string(coords[k]);
    out_ += line + "}\n";
    return;
  }
  std::string line = std::to_string(rep) + ',' + format_double(t);
  for (long long c : coords) line += ',' + std::to_string(c);
  out_ += line + "\n";
}

void ResultWriter::summary_header() {
  if (!json_lines_)
    out_ += "metric,mean,ci_half_width,std_error,reps,seed\n";
}

void ResultWriter::summary_row(const std::string& metric,
                               const EstimateSummary& s) {
  if (json_lines_) {
    out_ += "{\"metric\":\"" + metric + "\",\"mean\":" + format_double(s.mean) +
            ",\"ci_half_width\":" + format_double(s.ci_half_width) +
            ",\"std_error\":" + format_double(s.std_error) +
            ",\"reps\":" + std::to_string(s.replications) +
            ",\"seed\":" + std::to_string(s.base_seed) + "}\n";
    return;
  }
  out_ += metric + ',' + format_double(s.mean) + ',' +
          format_double(s.ci_half_width) + ',' + format_double(s.std_error) +
          ',' + std::to_string(s.replications) + ',' +
          std::to_string(s.base_seed) + "\n";
}

void ResultWriter::scalar_row(const std::string& metric, double value,
                              std::uint64_t seed) {
  EstimateSummary s;
  s.mean = value;
  s.replications = 1;
  s.base_seed = seed;
  summary_row(metric, s);
}

void ResultWriter::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + path + "'");
  f << out_;
  if (!f) throw Error("failed writing output file '" + path + "'");
}

}  // namespace chunksim
