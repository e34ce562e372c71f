// Batch front end: summary statistics, ACF, model fitting, Monte Carlo
// simulation, Riccati/Lyapunov solves and MF/AG comparison tables, all
// emitted as plot-ready CSV (or JSON for tabular outputs).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "supjump/closedform.hpp"
#include "supjump/empirical.hpp"
#include "supjump/fit.hpp"
#include "supjump/io.hpp"
#include "supjump/riccati.hpp"
#include "supjump/simulate.hpp"
#include "supjump/version.hpp"

namespace fs = std::filesystem;
using namespace supjump;

namespace {

struct OutputTarget {
  std::string path;  // "-" means stdout

  std::ostream& open(std::ofstream& file) const {
    if (path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    return file;
  }
};

std::vector<fs::path> expand_inputs(const std::string& input) {
  const fs::path p(input);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw ConfigError("directory '" + input + "' contains no .csv files");
    }
    return files;
  }
  if (!fs::exists(p)) throw ConfigError("no such input '" + input + "'");
  return {p};
}

std::string fmt(double v) { return CsvWriter::num(v); }

// Canonical config string hashed into every output header.
class ConfigTrace {
 public:
  explicit ConfigTrace(std::string subcommand) : text_(std::move(subcommand)) {}

  template <class T>
  ConfigTrace& kv(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << text_ << ' ' << key << '=' << value;
    text_ = ss.str();
    return *this;
  }

  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const std::string& input, const OutputTarget& out,
              const std::string& format) {
  const auto files = expand_inputs(input);
  ConfigTrace trace("stats");
  trace.kv("input", input).kv("format", format);

  struct Row {
    std::string name;
    SummaryStats st;
  };
  std::vector<Row> rows;
  std::vector<std::string> failures;
  for (const auto& f : files) {
    try {
      const CountSeries trimmed = trim(read_count_series(f));
      rows.push_back({f.filename().string(), summary(trimmed)});
    } catch (const std::exception& e) {
      failures.push_back(f.string() + ": " + e.what());
    }
  }

  std::ofstream file;
  std::ostream& os = out.open(file);
  if (format == "json") {
    std::ostringstream hex;
    hex << "0x" << std::hex << fnv1a(trace.str());
    nlohmann::json j;
    j["meta"] = {{"tool", "supjump"},
                 {"version", std::string(kVersion)},
                 {"seed", kDefaultSeed},
                 {"config", hex.str()}};
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"file", r.name},
                           {"I", r.st.n},
                           {"Ave", r.st.ave},
                           {"Var", r.st.var},
                           {"CV", r.st.cv},
                           {"Jmp", r.st.jmp},
                           {"Skw", r.st.skw}});
    }
    os << j.dump(2) << "\n";
  } else {
    CsvWriter csv(os, kDefaultSeed, trace.str());
    csv.header({"file", "I", "Ave", "Var", "CV", "Jmp", "Skw"});
    for (const auto& r : rows) {
      csv.row({r.name, std::to_string(r.st.n), fmt(r.st.ave), fmt(r.st.var),
               fmt(r.st.cv), fmt(r.st.jmp), fmt(r.st.skw)});
    }
  }
  for (const auto& f : failures) std::cerr << "stats: " << f << "\n";
  return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// acf

int cmd_acf(const std::string& input, const OutputTarget& out, int max_lag) {
  const CountSeries trimmed = trim(read_count_series(input));
  const auto rho = sample_acf(trimmed, static_cast<std::size_t>(max_lag));
  ConfigTrace trace("acf");
  trace.kv("input", input).kv("lags", max_lag);
  std::ofstream file;
  std::ostream& os = out.open(file);
  CsvWriter csv(os, kDefaultSeed, trace.str());
  csv.header({"lag", "acf"});
  for (std::size_t k = 0; k < rho.size(); ++k) {
    csv.row({std::to_string(k), fmt(rho[k])});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const std::string& input, const OutputTarget& out,
            const std::string& w_mode, int max_lag) {
  const auto files = expand_inputs(input);
  ConfigTrace trace("fit");
  trace.kv("input", input).kv("w", w_mode).kv("lags", max_lag);

  std::ofstream file;
  std::ostream& os = out.open(file);
  CsvWriter csv(os, kDefaultSeed, trace.str());
  csv.header({"file", "I", "alpha", "beta", "H", "b", "lambda", "mu", "w",
              "M1", "beta_tilde", "w_lower_bound", "Skw_emp", "Skw_theory",
              "Skw_rel_err", "negative_b", "long_memory"});

  std::vector<std::string> failures;
  for (const auto& f : files) {
    try {
      const CountSeries trimmed = trim(read_count_series(f));
      const SummaryStats st = summary(trimmed);
      const std::size_t lag_cap = trimmed.values.size() - 1;
      const std::size_t lags =
          std::min<std::size_t>(static_cast<std::size_t>(max_lag), lag_cap);
      if (lags < 3) throw FitFailure("series too short for an ACF fit");
      const auto rho = sample_acf(trimmed, lags);
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t k = 1; k <= lags; ++k) {
        pairs.emplace_back(static_cast<double>(k), rho[k]);
      }
      const AcfFit acf_fit = fit_acf(pairs);

      FitResult r;
      if (w_mode == "fit") {
        r = fit_w(st, acf_fit.alpha, acf_fit.beta_tilde).second;
      } else {
        r = fit_at_w(st, acf_fit.alpha, acf_fit.beta_tilde, 1.0);
      }
      csv.row({f.filename().string(), std::to_string(st.n), fmt(r.alpha),
               fmt(r.beta), r.hurst ? fmt(*r.hurst) : "",
               fmt(r.b), fmt(r.lambda), fmt(r.mu), fmt(r.w), fmt(r.m1),
               fmt(r.beta_tilde), fmt(r.realizable_w_lower_bound), fmt(st.skw),
               fmt(r.skewness_theory), fmt(r.skewness_relative_error),
               r.negative_b ? "1" : "0", r.long_memory ? "1" : "0"});
    } catch (const std::exception& e) {
      failures.push_back(f.string() + ": " + e.what());
    }
  }
  for (const auto& f : failures) std::cerr << "fit: " << f << "\n";
  return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& params_path, const std::string& out_dir,
                 SimConfig cfg, int n_paths, std::vector<double> lags) {
  const ModelParams base = params_from_json_file(params_path);
  const RGrid grid = base.mixture.discretize(cfg.n);
  ensure_dir(out_dir);

  ConfigTrace trace("simulate");
  trace.kv("params", params_to_json_text(base))
      .kv("n", cfg.n)
      .kv("dt", cfg.dt)
      .kv("burn_in", cfg.burn_in)
      .kv("horizon", cfg.horizon)
      .kv("sample_every", cfg.sample_every)
      .kv("replicates", cfg.replicates)
      .kv("seed", cfg.seed)
      .kv("paths", n_paths);

  for (int k = 0; k < n_paths; ++k) {
    const SamplePath path =
        simulate_path(base, grid, cfg, static_cast<std::size_t>(k));
    std::ofstream pfile(fs::path(out_dir) / ("path_" + std::to_string(k) + ".csv"));
    CsvWriter csv(pfile, cfg.seed, trace.str());
    csv.header({"t", "z"});
    for (std::size_t i = 0; i < path.times.size(); ++i) {
      csv.row({fmt(path.times[i]), fmt(path.z[i])});
    }
    if (path.step_prob_warning) {
      std::cerr << "simulate: path " << k << ": jump probability per step "
                << "exceeded 0.1 (max " << path.max_step_prob
                << "); consider a smaller dt\n";
    }
  }

  const EnsembleStats st = ensemble_stats(base, grid, cfg, lags);
  std::ofstream efile(fs::path(out_dir) / "ensemble.csv");
  CsvWriter csv(efile, cfg.seed, trace.str());
  csv.header({"stat", "value", "se"});
  csv.row({"mean", fmt(st.mean.value), fmt(st.mean.se)});
  csv.row({"variance", fmt(st.variance.value), fmt(st.variance.se)});
  csv.row({"skewness", fmt(st.skewness.value), fmt(st.skewness.se)});
  csv.row({"jump_rate", fmt(st.jump_rate.value), fmt(st.jump_rate.se)});
  for (const auto& lag : st.acf) {
    csv.row({"acf_" + fmt(lag.lag), fmt(lag.value), fmt(lag.se)});
  }
  if (st.step_prob_warning) {
    std::cerr << "simulate: some replicate exceeded jump probability 0.1 per "
                 "step; consider a smaller dt\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// riccati

int cmd_riccati(const std::string& params_path, const std::string& out_dir,
                std::size_t n, double theta, SolverConfig cfg,
                bool dump_trajectory) {
  const ModelParams base = params_from_json_file(params_path);
  if (base.kind != ModelKind::AG) {
    throw ConfigError("riccati: params must declare \"kind\": \"ag\"");
  }
  const RGrid grid = base.mixture.discretize(n);
  ensure_dir(out_dir);

  ConfigTrace trace("riccati");
  trace.kv("params", params_to_json_text(base))
      .kv("n", n)
      .kv("theta", theta)
      .kv("dt", cfg.dt)
      .kv("tol", cfg.tol)
      .kv("tmax", cfg.t_max);

  const RiccatiSolution sol = solve_riccati(base, grid, theta, cfg);
  const double mean_ag = ag_mean(base, grid, cfg);
  const double mean_closed = superposed_mean(base);
  const AgVariance var = ag_variance(base, grid, cfg);

  std::ofstream file(fs::path(out_dir) / "riccati.csv");
  CsvWriter csv(file, kDefaultSeed, trace.str());
  csv.header({"quantity", "value"});
  csv.row({"theta", fmt(theta)});
  csv.row({"mgf", fmt(mgf(sol))});
  csv.row({"exponent", fmt(sol.exponent)});
  csv.row({"exponent_tail_bound", fmt(sol.tail_bound)});
  csv.row({"horizon", fmt(sol.horizon)});
  csv.row({"truncated", sol.truncated ? "1" : "0"});
  csv.row({"mean_lyapunov", fmt(mean_ag)});
  csv.row({"mean_closed_form", fmt(mean_closed)});
  csv.row({"variance", fmt(var.value)});
  csv.row({"variance_route_lyapunov", fmt(var.route_lyapunov)});
  csv.row({"variance_route_identity", fmt(var.route_identity)});
  csv.row({"variance_route_gap", fmt(var.rel_gap)});

  if (sol.truncated) {
    std::cerr << "riccati: stopped at t_max=" << cfg.t_max
              << " before full decay; exponent tail bound " << sol.tail_bound
              << "\n";
  }

  if (dump_trajectory) {
    std::ofstream tfile(fs::path(out_dir) / "trajectory.csv");
    CsvWriter tcsv(tfile, kDefaultSeed, trace.str());
    std::vector<std::string> head = {"t"};
    for (double r : grid.nodes) head.push_back("r_" + fmt(r));
    tcsv.header(head);
    for (std::size_t k = 0; k < sol.trajectory.times.size(); ++k) {
      std::vector<std::string> row = {fmt(sol.trajectory.times[k])};
      for (double v : sol.trajectory.states[k]) row.push_back(fmt(v));
      tcsv.row(row);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const std::string& params_path, const std::string& out_dir,
                std::vector<double> w_list, std::size_t n_riccati,
                SolverConfig rcfg, SimConfig mc_cfg, std::vector<double> lags) {
  const ModelParams base = params_from_json_file(params_path);
  ensure_dir(out_dir);

  ConfigTrace trace("compare");
  trace.kv("params", params_to_json_text(base)).kv("n", n_riccati);
  for (double w : w_list) trace.kv("w", w);

  std::ofstream file(fs::path(out_dir) / "compare.csv");
  CsvWriter csv(file, mc_cfg.seed, trace.str());
  std::vector<std::string> head = {
      "w",           "mean_closed",     "var_mf",
      "var_ag",      "var_ag_lyapunov", "var_ag_route_gap",
      "mc_ag_mean",  "mc_ag_mean_se",   "mc_ag_var",
      "mc_ag_var_se"};
  for (double lag : lags) {
    head.push_back("mc_ag_acf_" + fmt(lag));
    head.push_back("mc_ag_acf_se_" + fmt(lag));
    head.push_back("mf_acf_" + fmt(lag));
  }
  csv.header(head);

  const RGrid rgrid = base.mixture.discretize(n_riccati);
  const RGrid mc_grid = base.mixture.discretize(mc_cfg.n);
  for (double w : w_list) {
    const auto mf =
        ModelParams::make(ModelKind::MF, base.b, w, base.jump, base.mixture);
    const auto ag =
        ModelParams::make(ModelKind::AG, base.b, w, base.jump, base.mixture);
    const AgVariance var = ag_variance(ag, rgrid, rcfg);
    const EnsembleStats mc = ensemble_stats(ag, mc_grid, mc_cfg, lags);

    std::vector<std::string> row = {
        fmt(w),
        fmt(superposed_mean(mf)),
        fmt(superposed_variance(mf)),
        fmt(var.value),
        fmt(var.route_lyapunov),
        fmt(var.rel_gap),
        fmt(mc.mean.value),
        fmt(mc.mean.se),
        fmt(mc.variance.value),
        fmt(mc.variance.se)};
    for (std::size_t k = 0; k < lags.size(); ++k) {
      row.push_back(fmt(mc.acf[k].value));
      row.push_back(fmt(mc.acf[k].se));
      row.push_back(fmt(superposed_acf(mf, lags[k])));
    }
    csv.row(row);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for superposed jump-driven processes with memory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string input, params_path, out_path = "-", out_dir, format = "csv";
  std::string w_mode = "fixed";
  int max_lag = 14;
  int n_paths = 1;
  std::size_t grid_n = 512;
  double theta = 1.0;
  bool dump_trajectory = false;
  std::vector<double> lags = {1.0, 2.0, 5.0, 10.0};
  std::vector<double> w_list = {0.0, 0.25, 0.5, 0.75, 1.0};
  SimConfig sim;
  SolverConfig solver;

  auto* stats = app.add_subcommand("stats", "Summary statistics of count CSVs");
  stats->add_option("input", input, "CSV file or directory")->required();
  stats->add_option("--out", out_path, "output file ('-' for stdout)");
  stats->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  auto* acf = app.add_subcommand("acf", "Sample autocorrelation of one series");
  acf->add_option("input", input, "CSV file")->required();
  acf->add_option("--out", out_path, "output file ('-' for stdout)");
  acf->add_option("--lags", max_lag, "maximum lag (days)");

  auto* fit = app.add_subcommand("fit", "Fit the superposed model to count CSVs");
  fit->add_option("input", input, "CSV file or directory")->required();
  fit->add_option("--out", out_path, "output file ('-' for stdout)");
  fit->add_option("--w", w_mode, "'fixed' (w=1) or 'fit' (match skewness)")
      ->check(CLI::IsMember({"fixed", "fit"}));
  fit->add_option("--lags", max_lag, "ACF lags used by the fit");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sample paths");
  simulate->add_option("--params", params_path, "model JSON")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_option("--n", sim.n, "grid size");
  simulate->add_option("--dt", sim.dt, "time step");
  simulate->add_option("--burn-in", sim.burn_in, "burn-in (<0 = auto)");
  simulate->add_option("--horizon", sim.horizon, "output horizon");
  simulate->add_option("--sample-every", sim.sample_every, "sampling interval");
  simulate->add_option("--replicates", sim.replicates);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--threads", sim.threads);
  simulate->add_option("--paths", n_paths, "number of path files to write");
  simulate->add_option("--lags", lags, "ACF lags for the ensemble table");

  auto* riccati = app.add_subcommand("riccati", "Solve the MGF/moment equations");
  riccati->add_option("--params", params_path, "model JSON (kind=ag)")->required();
  riccati->add_option("--out", out_dir, "output directory")->required();
  riccati->add_option("--theta", theta, "MGF argument");
  riccati->add_option("--n", grid_n, "grid size");
  riccati->add_option("--dt", solver.dt, "time step");
  riccati->add_option("--tol", solver.tol, "decay stopping tolerance");
  riccati->add_option("--tmax", solver.t_max, "hard time horizon");
  riccati->add_flag("--trajectory", dump_trajectory, "write trajectory.csv");

  auto* compare = app.add_subcommand(
      "compare", "MF closed forms vs AG solver vs Monte Carlo across w");
  compare->add_option("--params", params_path, "model JSON")->required();
  compare->add_option("--out", out_dir, "output directory")->required();
  compare->add_option("--w-list", w_list, "weights to sweep");
  compare->add_option("--n", grid_n, "solver grid size");
  compare->add_option("--dt", solver.dt, "solver time step");
  compare->add_option("--mc-n", sim.n, "Monte Carlo grid size");
  compare->add_option("--mc-dt", sim.dt, "Monte Carlo time step");
  compare->add_option("--replicates", sim.replicates);
  compare->add_option("--horizon", sim.horizon);
  compare->add_option("--burn-in", sim.burn_in);
  compare->add_option("--sample-every", sim.sample_every);
  compare->add_option("--seed", sim.seed);
  compare->add_option("--threads", sim.threads);
  compare->add_option("--lags", lags, "ACF lags");

  CLI11_PARSE(app, argc, argv);

  // Default lags are advisory; keep only those the horizon can support.
  const bool lags_defaulted =
      simulate->count("--lags") == 0 && compare->count("--lags") == 0;
  if (lags_defaulted) {
    std::erase_if(lags, [&](double lag) { return lag > sim.horizon; });
  }

  try {
    if (*stats) return cmd_stats(input, {out_path}, format);
    if (*acf) return cmd_acf(input, {out_path}, max_lag);
    if (*fit) return cmd_fit(input, {out_path}, w_mode, max_lag);
    if (*simulate) return cmd_simulate(params_path, out_dir, sim, n_paths, lags);
    if (*riccati)
      return cmd_riccati(params_path, out_dir, grid_n, theta, solver,
                         dump_trajectory);
    if (*compare)
      return cmd_compare(params_path, out_dir, w_list, grid_n, solver, sim, lags);
  } catch (const std::exception& e) {
    std::cerr << app.get_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}
