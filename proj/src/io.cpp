#include "supjump/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "json.hpp"
#include "supjump/version.hpp"

namespace supjump {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  for (auto& s : cells) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  }
  return cells;
}

bool parse_number(const std::string& s, double* out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last && !s.empty();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

CountSeries read_count_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");

  CountSeries series;
  series.label = path.stem().string();

  std::string line;
  std::size_t lineno = 0;
  int count_col = -1;  // resolved from the header or the first data line
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() > 2) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 1 or 2 columns, got " +
                        std::to_string(cells.size()));
    }

    double value = 0.0;
    if (count_col < 0) {
      // First meaningful line: header if any cell is non-numeric.
      bool numeric = true;
      double tmp;
      for (const auto& c : cells) numeric = numeric && parse_number(c, &tmp);
      if (!numeric) {
        count_col = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (lower(cells[i]) == "count") count_col = static_cast<int>(i);
        }
        if (cells.size() == 2 && lower(cells[1]) != "count" &&
            lower(cells[0]) != "count") {
          count_col = 1;  // day,count convention
        }
        continue;
      }
      count_col = cells.size() == 2 ? 1 : 0;
    }
    if (static_cast<std::size_t>(count_col) >= cells.size()) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": missing count column");
    }
    if (!parse_number(cells[static_cast<std::size_t>(count_col)], &value)) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": cannot parse '" +
                        cells[static_cast<std::size_t>(count_col)] + "'");
    }
    series.values.push_back(value);
  }
  if (series.values.empty()) {
    throw ConfigError(path.string() + ": no data rows");
  }
  return series;
}

namespace {

ModelParams params_from_json(const nlohmann::json& j) {
  const std::string kind_s = lower(j.value("kind", std::string("previous")));
  ModelKind kind;
  if (kind_s == "previous") kind = ModelKind::Previous;
  else if (kind_s == "mf") kind = ModelKind::MF;
  else if (kind_s == "ag") kind = ModelKind::AG;
  else throw ConfigError("params: unknown kind '" + kind_s + "'");

  const auto& jj = j.at("jump");
  JumpMeasure jump(jj.at("mu").get<double>(), jj.at("lambda").get<double>());

  const auto& jm = j.at("mixture");
  const std::string type = lower(jm.at("type").get<std::string>());
  ReversionMixture mixture = ReversionMixture::dirac(1.0);
  if (type == "gamma") {
    mixture = ReversionMixture::gamma(jm.at("alpha").get<double>(),
                                      jm.at("beta").get<double>());
  } else if (type == "dirac") {
    mixture = ReversionMixture::dirac(jm.at("r0").get<double>());
  } else if (type == "discrete") {
    mixture = ReversionMixture::discrete(
        jm.at("nodes").get<std::vector<double>>(),
        jm.at("weights").get<std::vector<double>>());
  } else {
    throw ConfigError("params: unknown mixture type '" + type + "'");
  }

  const double b = j.at("b").get<double>();
  const double w = j.value("w", 1.0);
  return ModelParams::make(kind, b, w, jump, mixture);
}

}  // namespace

ModelParams params_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
    return params_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ModelParams params_from_json_text(const std::string& text) {
  try {
    return params_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

std::string params_to_json_text(const ModelParams& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  j["b"] = p.b;
  j["w"] = p.w;
  j["jump"] = {{"mu", p.jump.mu}, {"lambda", p.jump.lambda}};
  switch (p.mixture.kind()) {
    case ReversionMixture::Kind::Gamma:
      j["mixture"] = {{"type", "gamma"},
                      {"alpha", p.mixture.gamma_shape()},
                      {"beta", p.mixture.gamma_scale()}};
      break;
    case ReversionMixture::Kind::Dirac:
      j["mixture"] = {{"type", "dirac"}, {"r0", p.mixture.dirac_node()}};
      break;
    case ReversionMixture::Kind::Discrete:
      j["mixture"] = {{"type", "discrete"},
                      {"nodes", p.mixture.discrete_nodes()},
                      {"weights", p.mixture.discrete_weights()}};
      break;
  }
  return j.dump(2);
}

CsvWriter::CsvWriter(std::ostream& os, std::uint64_t seed,
                     const std::string& config)
    : os_(os) {
  std::ostringstream hex;
  hex << std::hex << fnv1a(config);
  os_ << "# supjump " << kVersion << " seed=" << seed << " config=0x"
      << hex.str() << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

std::string CsvWriter::num(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

}  // namespace supjump
