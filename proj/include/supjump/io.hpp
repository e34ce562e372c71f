#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "supjump/closedform.hpp"
#include "supjump/empirical.hpp"

namespace supjump {

// Read a daily count series from CSV.  Accepts one column `count` or two
// columns `day,count`; the header row is optional; lines starting with '#'
// are comments.  Parse errors report the line number.
CountSeries read_count_series(const std::filesystem::path& path);

// Model parameters from the JSON schema
//   { "kind": "previous"|"mf"|"ag", "b": ..., "w": ...,
//     "jump": {"mu": ..., "lambda": ...},
//     "mixture": {"type": "gamma", "alpha": ..., "beta": ...}
//               | {"type": "dirac", "r0": ...}
//               | {"type": "discrete", "nodes": [...], "weights": [...]} }
ModelParams params_from_json_file(const std::filesystem::path& path);
ModelParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const ModelParams& p);

// CSV writer that stamps every file with a `# supjump <version> ...` comment
// carrying the seed and a hash of the run configuration.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::uint64_t seed, const std::string& config);

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);

 private:
  std::ostream& os_;
};

}  // namespace supjump
