// Command-line front end: analyze, density, simulate, sweep, compare, perturb.
#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "peaksharp/error.hpp"
#include "peaksharp/oracle.hpp"
#include "peaksharp/parser.hpp"
#include "peaksharp/report.hpp"
#include "peaksharp/sharpness.hpp"
#include "peaksharp/ssa.hpp"

namespace fs = std::filesystem;
using namespace peaksharp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitIo = 4;

constexpr const char* kOutEnv = "PEAKSHARP_OUT_DIR";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string k_spec;
  double h = 0.1;
  std::optional<double> x_max;
  std::string convention = "continuous";
  std::string out_dir;
  std::int64_t cells = 10000;
  std::optional<double> t_end;
  std::optional<std::int64_t> x0;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string series;
  std::int64_t series_cells = 1000;
  std::vector<double> probes;
  bool with_ssa = false;
  std::optional<std::int64_t> trunc;
  double delta = 0.0;
  double epsilon = 0.0;
  std::vector<std::string> perturb;

  // Filled in after parsing the network.
  std::vector<double> ks;
  double t_end_resolved = 0.0;
  std::int64_t x0_resolved = 0;

  json to_json() const {
    json j = {{"command", command},
              {"input", input},
              {"K", ks},
              {"h", h},
              {"convention", convention},
              {"out_dir", out_dir}};
    j["x_max"] = x_max ? json(*x_max) : json(nullptr);
    if (command == "simulate" || command == "compare" || (command == "sweep" && with_ssa)) {
      j["cells"] = cells;
      j["t_end"] = t_end_resolved;
      j["x0"] = x0_resolved;
      j["seed"] = seed;
    }
    if (command == "simulate" && !series.empty()) {
      j["series"] = series;
      j["series_cells"] = series_cells;
    }
    if (command == "sweep") j["probes"] = probes;
    if (command == "compare") j["trunc"] = trunc ? json(*trunc) : json(nullptr);
    if (command == "perturb") {
      j["delta"] = delta;
      j["epsilon"] = epsilon;
      j["perturb"] = perturb;
    }
    return j;
  }
};

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw Error(ErrorKind::validation, "not a number: '" + text + "'");
  }
  return v;
}

// "a", "a,b,c" or "a:b:n" (n values, inclusive).
std::vector<double> parse_k_spec(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorKind::validation, "K range must be a:b:n");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const double n = parse_double(parts[2]);
    if (n < 1 || n != std::floor(n)) throw Error(ErrorKind::validation, "K range count must be a positive integer");
    const auto count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    if (count > 1) out.back() = b;
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_double(p));
  if (out.empty()) throw Error(ErrorKind::validation, "empty K list");
  return out;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string k_tag(double k) { return "K" + format_number(k); }

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
  const fs::path path = fs::path(cfg.out_dir) / name;
  try {
    write_atomic(path, content);
  } catch (const fs::filesystem_error& e) {
    throw IoError(e.what());
  }
}

void emit_json(const RunConfig& cfg, const std::string& name, json body) {
  body["config"] = cfg.to_json();
  emit(cfg, name, body.dump(2) + "\n");
}

GridSpec grid_of(const RunConfig& cfg) { return GridSpec{cfg.h, cfg.x_max}; }

Convention conv_of(const RunConfig& cfg) { return convention_from_string(cfg.convention); }

// Sample times for the stationarity diagnostic and optional series output.
std::vector<double> series_times(const std::string& spec) {
  if (spec.empty()) return {};
  const auto t = parse_k_spec(spec);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0 || (i && t[i] <= t[i - 1])) throw Error(ErrorKind::validation, "series times must ascend from 0");
  }
  return t;
}

int cmd_analyze(const RunConfig& cfg, const ReactionNetwork& net) {
  const Convention conv = conv_of(cfg);
  const ConditionReport cond = check_theorem1(net, conv, cfg.x_max, cfg.h);
  json per_k = json::array();
  for (double k : cfg.ks) {
    const PeakStructure ps = find_extrema(net, k, conv, grid_of(cfg));
    json entry = to_json(ps);
    entry["K"] = k;
    per_k.push_back(entry);
  }
  json report = to_json(cond);
  report["analyses"] = per_k;
  report["network"] = net.name;
  emit_json(cfg, "analyze.json", report);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_density(const RunConfig& cfg, const ReactionNetwork& net) {
  for (double k : cfg.ks) {
    const StationaryAnalysis an = analyze_at(net, k, conv_of(cfg), grid_of(cfg));
    const std::string stem = "density_" + k_tag(k);
    emit(cfg, stem + ".csv", density_csv(an.density));
    emit_json(cfg, stem + ".json",
              {{"K", k},
               {"norm_const", an.density.norm_const},
               {"log_norm_const", an.density.log_norm_const},
               {"x_max", an.density.x_max},
               {"h", an.density.h},
               {"mass", an.density.mass()},
               {"structure", to_json(an.structure)}});
    std::cout << stem << ".csv\n";
  }
  return kExitOk;
}

json region_table(const std::vector<Interval>& regions, const EnsembleHistogram& h) {
  json out = json::array();
  for (const Interval& r : regions) out.push_back({{"lo", r.lo}, {"hi", r.hi}, {"fraction", h.fraction_in(r)}});
  return out;
}

int cmd_simulate(const RunConfig& cfg, const ReactionNetwork& net) {
  const EnsembleOptions opts{cfg.threads};
  for (double k : cfg.ks) {
    const auto rows = time_series(net, k, cfg.x0_resolved, {cfg.t_end_resolved / 2, cfg.t_end_resolved}, cfg.cells,
                                  cfg.seed, opts);
    const auto half = histogram_from_column(rows, 0, cfg.t_end_resolved / 2, k, cfg.seed);
    const auto end = histogram_from_column(rows, 1, cfg.t_end_resolved, k, cfg.seed);
    const std::string stem = "hist_" + k_tag(k);
    emit(cfg, stem + ".csv", histogram_csv(end));
    json side = {{"K", k},
                 {"seed", cfg.seed},
                 {"t_end", cfg.t_end_resolved},
                 {"n_cells", end.n_cells},
                 {"mean", end.mean()},
                 {"std", end.stddev()},
                 {"stationarity", to_json(stationarity_check(half, end))}};
    try {
      const PeakStructure ps = find_extrema(net, k, conv_of(cfg), grid_of(cfg));
      side["regions"] = region_table(ps.regions, end);
    } catch (const Error& e) {
      side["regions"] = json::array();
      side["regions_error"] = e.what();
    }
    const auto times = series_times(cfg.series);
    if (!times.empty()) {
      const auto series = time_series(net, k, cfg.x0_resolved, times, cfg.series_cells, cfg.seed, opts);
      emit(cfg, "series_" + k_tag(k) + ".csv", time_series_csv(times, series));
    }
    emit_json(cfg, stem + ".json", side);
    std::cout << stem << ".csv mean=" << end.mean() << " std=" << end.stddev() << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const ReactionNetwork& net) {
  const Convention conv = conv_of(cfg);
  const double x_max = cfg.x_max ? *cfg.x_max : common_x_max(net, cfg.ks, conv, cfg.h);
  const GridSpec grid{cfg.h, x_max};
  std::string csv = "K,region,metric,value\n";
  auto row = [&](double k, std::size_t region, const std::string& metric, double value) {
    csv += format_number(k) + ',' + std::to_string(region + 1) + ',' + metric + ',' + format_number(value) + '\n';
  };
  for (double k : cfg.ks) {
    const StationaryAnalysis an = analyze_at(net, k, conv, grid);
    const PeakStructure& ps = an.structure;
    std::optional<EnsembleHistogram> hist;
    if (cfg.with_ssa) {
      hist = ensemble_histogram(net, k, cfg.x0_resolved, cfg.t_end_resolved, cfg.cells, cfg.seed,
                                EnsembleOptions{cfg.threads});
    }
    for (std::size_t i = 0; i < ps.regions.size(); ++i) {
      const Interval& r = ps.regions[i];
      row(k, i, "peak_x", ps.peaks[i]);
      if (i < ps.valleys.size()) row(k, i, "valley_x", ps.valleys[i]);
      row(k, i, "cfpe_mass", an.density.mass_in(r));
      row(k, i, "cfpe_std", an.density.moments_in(r).second);
      const SharpnessProfile prof = lambda_profile(an, i);
      for (double probe : cfg.probes) {
        if (!r.contains(probe)) continue;
        // Linear interpolation in log lambda between profile points.
        for (std::size_t j = 0; j + 1 < prof.grid_x.size(); ++j) {
          if (probe >= prof.grid_x[j] && probe <= prof.grid_x[j + 1]) {
            const double w = (probe - prof.grid_x[j]) / (prof.grid_x[j + 1] - prof.grid_x[j]);
            const double log_l = (1 - w) * prof.log_lambda[j] + w * prof.log_lambda[j + 1];
            row(k, i, "lambda@" + format_number(probe), std::exp(log_l));
            break;
          }
        }
      }
      if (hist) {
        const auto dist = hist->distribution();
        const auto st = region_stats(dist, {r});
        row(k, i, "ssa_mass", st[0].mass);
        row(k, i, "ssa_std", st[0].stddev);
      }
    }
  }
  emit(cfg, "sweep.csv", csv);
  emit_json(cfg, "sweep.json", {{"x_max", x_max}});
  std::cout << csv;
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const ReactionNetwork& net) {
  json results = json::array();
  for (double k : cfg.ks) {
    const StationaryAnalysis an = analyze_at(net, k, conv_of(cfg), grid_of(cfg));
    const auto n = cfg.trunc ? *cfg.trunc : static_cast<std::int64_t>(std::ceil(an.density.x_max));
    const StationaryVector sv = cme_stationary(net, k, n);
    const auto hist = ensemble_histogram(net, k, cfg.x0_resolved, cfg.t_end_resolved, cfg.cells, cfg.seed,
                                         EnsembleOptions{cfg.threads});
    const auto ssa = hist.distribution(n);
    const auto cfpe = bin_density(an.density, n);
    const auto& regions = an.structure.regions;
    json entry = {{"K", k},
                  {"trunc", n},
                  {"truncation_warning", sv.truncation_warning},
                  {"oracle_residual", sv.residual},
                  {"ssa_vs_oracle", to_json(compare_distributions(ssa, sv.probs, regions))},
                  {"cfpe_vs_oracle", to_json(compare_distributions(cfpe, sv.probs, regions))},
                  {"ssa_vs_cfpe", to_json(compare_distributions(ssa, cfpe, regions))}};
    entry["tv"] = entry["ssa_vs_oracle"]["tv"];
    emit(cfg, "oracle_" + k_tag(k) + ".csv", stationary_csv(sv));
    results.push_back(entry);
  }
  json report = {{"comparisons", results}};
  emit_json(cfg, "compare.json", report);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_perturb(const RunConfig& cfg, const ReactionNetwork& net) {
  std::map<std::size_t, double> changes;
  if (is_schlogl_layout(net)) {
    if (cfg.delta != 0.0) changes[5] = cfg.delta;
    if (cfg.epsilon != 0.0) changes[6] = cfg.epsilon;
  } else if (cfg.delta != 0.0 || cfg.epsilon != 0.0) {
    throw Error(ErrorKind::validation, "--delta/--epsilon need the Schlogl layout; use --perturb i=value");
  }
  for (const std::string& item : cfg.perturb) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::validation, "--perturb expects i=value");
    const double index = parse_double(item.substr(0, eq));
    if (index < 1 || index != std::floor(index)) {
      throw Error(ErrorKind::validation, "reaction index must be a positive integer");
    }
    changes[static_cast<std::size_t>(index) - 1] += parse_double(item.substr(eq + 1));
  }
  json reports = json::array();
  for (double k : cfg.ks) reports.push_back(to_json(perturb_analysis(net, k, changes, conv_of(cfg), grid_of(cfg))));
  json report = {{"perturbation", reports.size() == 1 ? reports[0] : reports}};
  emit_json(cfg, "perturb.json", report);
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int dispatch(RunConfig& cfg) {
  ReactionNetwork net;
  try {
    net = parse_network(read_input(cfg.input));
  } catch (const ParseError& e) {
    std::cerr << cfg.input << ":" << e.what() << "\n";
    return kExitParse;
  }
  cfg.ks = cfg.k_spec.empty() ? std::vector<double>{net.k_default} : parse_k_spec(cfg.k_spec);
  for (double k : cfg.ks) net.check_k(k);
  conv_of(cfg);
  if (!(cfg.h > 0)) throw Error(ErrorKind::validation, "--h must be positive");
  cfg.t_end_resolved = cfg.t_end ? *cfg.t_end : (net.name == "schlogl" ? 100.0 : 50.0);
  cfg.x0_resolved = cfg.x0 ? *cfg.x0 : net.initial_state.value_or(0);
  if (cfg.cells < 1) throw Error(ErrorKind::validation, "--cells must be at least 1");
  if (!(cfg.t_end_resolved > 0)) throw Error(ErrorKind::validation, "--t-end must be positive");

  if (cfg.command == "analyze") return cmd_analyze(cfg, net);
  if (cfg.command == "density") return cmd_density(cfg, net);
  if (cfg.command == "simulate") return cmd_simulate(cfg, net);
  if (cfg.command == "sweep") return cmd_sweep(cfg, net);
  if (cfg.command == "compare") return cmd_compare(cfg, net);
  if (cfg.command == "perturb") return cmd_perturb(cfg, net);
  throw Error(ErrorKind::validation, "unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak-sharpness analysis of univariate stochastic reaction networks"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h; --h is the grid step
  RunConfig cfg;
  const char* env_out = std::getenv(kOutEnv);
  cfg.out_dir = env_out && *env_out ? env_out : "out";

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, ".rxn network file")->required();
    sub->add_option("--K", cfg.k_spec, "K values: a | a,b,... | a:b:n (n values inclusive)");
    sub->add_option("--h", cfg.h, "grid step")->capture_default_str();
    sub->add_option("--x-max", cfg.x_max, "override the truncation point");
    sub->add_option("--convention", cfg.convention, "exact | continuous")->capture_default_str();
    sub->add_option("--out", cfg.out_dir, std::string("output directory (default $") + kOutEnv + " or ./out)");
  };
  auto ssa_opts = [&](CLI::App* sub) {
    sub->add_option("--cells", cfg.cells, "ensemble size")->capture_default_str();
    sub->add_option("--t-end", cfg.t_end, "simulation horizon (default 100 for schlogl, else 50)");
    sub->add_option("--x0", cfg.x0, "initial state (default: declared initial or 0)");
    sub->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores); never changes results");
  };

  auto* analyze = app.add_subcommand("analyze", "drift/diffusion, Lemma 1, Theorem 1 verdicts, extrema");
  common(analyze);
  auto* density = app.add_subcommand("density", "stationary CFPE density CSV per K");
  common(density);
  auto* simulate = app.add_subcommand("simulate", "SSA ensemble histogram per K");
  common(simulate);
  ssa_opts(simulate);
  simulate->add_option("--series", cfg.series, "time-series sample times a:b:n");
  simulate->add_option("--series-cells", cfg.series_cells, "cells in the time series")->capture_default_str();
  auto* sweep = app.add_subcommand("sweep", "long-format K sweep of region metrics");
  common(sweep);
  ssa_opts(sweep);
  sweep->add_option("--probe", cfg.probes, "x positions for lambda probes")->delimiter(',');
  sweep->add_flag("--with-ssa", cfg.with_ssa, "add SSA region metrics");
  auto* compare = app.add_subcommand("compare", "SSA vs exact CME vs binned CFPE");
  common(compare);
  ssa_opts(compare);
  compare->add_option("--trunc", cfg.trunc, "CME truncation (default: CFPE x_max)");
  auto* perturb = app.add_subcommand("perturb", "rate-perturbation robustness report");
  common(perturb);
  perturb->add_option("--delta", cfg.delta, "perturbation of k6 (Schlogl layout)");
  perturb->add_option("--epsilon", cfg.epsilon, "perturbation of k7 (Schlogl layout)");
  perturb->add_option("--perturb", cfg.perturb, "i=value, 1-based reaction index (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitAnalysis;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return dispatch(cfg);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}
