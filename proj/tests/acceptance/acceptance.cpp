// Acceptance gate: one PASS/FAIL line per criterion. `acceptance N` runs a
// single criterion; no argument runs all of them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "peaksharp/error.hpp"
#include "peaksharp/oracle.hpp"
#include "peaksharp/parser.hpp"
#include "peaksharp/sharpness.hpp"
#include "peaksharp/ssa.hpp"

using namespace peaksharp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReactionNetwork load(const std::string& name) { return parse_network(slurp(std::string(PEAKSHARP_DATA_DIR) + "/" + name)); }

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

constexpr std::uint64_t kSeed = 7;
constexpr std::int64_t kCells = 10000;

Outcome gene_peak() {
  Outcome o;
  Timer t;
  const auto net = load("gene.rxn");
  std::vector<double> seen;
  for (double k : {0.0, 25.0, 50.0}) {
    const auto ps = find_extrema(net, k);
    o.require(ps.peaks.size() == 1 && ps.valleys.empty(), fmt("K=%g single peak", k));
    if (!ps.peaks.empty()) {
      o.require(std::fabs(ps.peaks[0] - 374.5) < 1e-6, fmt("K=%g peak %.9f", k, ps.peaks[0]));
      seen.push_back(ps.peaks[0]);
    }
  }
  o.require(seen.size() == 3 && seen[0] == seen[1] && seen[1] == seen[2], "identical across K");
  o.require(t.seconds() < 1.0, fmt("runtime %.3fs < 1s", t.seconds()));
  return o;
}

Outcome gene_dispersion() {
  Outcome o;
  Timer t;
  const auto net = load("gene.rxn");
  const double s0 = ensemble_histogram(net, 0, 0, 50, kCells, kSeed).stddev();
  const double s50 = ensemble_histogram(net, 50, 0, 50, kCells, kSeed).stddev();
  o.require(std::fabs(s0 - 27.4) <= 1.5, fmt("std(K=0) %.3f vs 27.4+-1.5", s0));
  o.require(std::fabs(s50 - 19.6) <= 1.5, fmt("std(K=50) %.3f vs 19.6+-1.5", s50));
  o.require(std::fabs(s50 / s0 - 0.71) <= 0.06, fmt("ratio %.4f vs 0.71+-0.06", s50 / s0));
  o.require(t.seconds() < 30.0, fmt("runtime %.1fs < 30s", t.seconds()));
  return o;
}

Outcome schlogl_structure() {
  Outcome o;
  Timer t;
  const auto net = load("schlogl.rxn");
  PeakStructure first;
  for (double k : {0.0, 5.0, 10.0}) {
    const auto ps = find_extrema(net, k, Convention::continuous);
    if (ps.peaks.size() != 2 || ps.valleys.size() != 1) {
      o.require(false, fmt("K=%g bimodal", k));
      continue;
    }
    o.require(std::fabs(ps.peaks[0] - 99.8) <= 0.2 && std::fabs(ps.peaks[1] - 567.6) <= 0.2 &&
                  std::fabs(ps.valleys[0] - 231.1) <= 0.2,
              fmt("K=%g peaks %.4f", k, ps.peaks[0]) + fmt(", %.4f", ps.peaks[1]) + fmt(" valley %.4f", ps.valleys[0]));
    if (k == 0.0) {
      first = ps;
    } else {
      o.require(ps.peaks == first.peaks && ps.valleys == first.valleys, fmt("K=%g identical to K=0", k));
    }
  }
  o.require(t.seconds() < 1.0, fmt("runtime %.3fs < 1s", t.seconds()));
  return o;
}

Outcome schlogl_region_mass() {
  Outcome o;
  Timer t;
  const auto net = load("schlogl.rxn");
  const Interval r1{0.0, 231.1};
  const struct {
    double k;
    double target;
  } cases[] = {{0.0, 0.3119}, {10.0, 0.1475}};
  for (const auto& c : cases) {
    const double ssa = ensemble_histogram(net, c.k, 0, 100, kCells, kSeed).fraction_in(r1);
    const auto sv = cme_stationary(net, c.k, 1000);
    const double oracle = region_stats(sv.probs, {r1})[0].mass;
    o.require(std::fabs(ssa - c.target) <= 0.03,
              fmt("K=%g SSA R1 %.2f%%", c.k, 100 * ssa) + fmt(" vs %.2f%%+-3pp", 100 * c.target));
    o.require(std::fabs(ssa - oracle) <= 0.02, fmt("K=%g oracle R1 %.4f%%", c.k, 100 * oracle) + " within 2pp of SSA");
  }
  o.require(t.seconds() < 300.0, fmt("runtime %.1fs < 300s", t.seconds()));
  return o;
}

Outcome theorem1_verdicts() {
  Outcome o;
  Timer t;
  const auto g = check_theorem1(load("gene.rxn"));
  o.require(g.lemma1_holds, "gene Lemma 1");
  for (const auto& r : g.regions) {
    o.require(r.dkb_sign == DkbSign::negative && r.direction == Direction::sharpens,
              std::string("gene ") + to_string(r.dkb_sign) + "/" + to_string(r.direction));
  }
  const auto s = check_theorem1(load("schlogl.rxn"));
  o.require(s.lemma1_holds, "schlogl Lemma 1");
  for (const auto& r : s.regions) {
    o.require(r.dkb_sign == DkbSign::positive && r.direction == Direction::flattens,
              std::string("schlogl ") + to_string(r.dkb_sign) + "/" + to_string(r.direction));
  }
  o.require(!g.regions.empty() && s.regions.size() == 2, "region counts");
  o.require(t.seconds() < 1.0, fmt("runtime %.3fs < 1s", t.seconds()));
  return o;
}

Outcome monotonicity() {
  Outcome o;
  const auto g = verify_monotonicity(load("gene.rxn"), {0, 12.5, 25, 37.5, 50});
  o.require(g.pass() && g.max_violation < 1e-6, fmt("gene max_violation %.3g", g.max_violation));
  const auto s = verify_monotonicity(load("schlogl.rxn"), {0, 2.5, 5, 7.5, 10});
  o.require(s.pass() && s.max_violation < 1e-6, fmt("schlogl max_violation %.3g", s.max_violation));
  for (const auto& r : s.regions) o.require(r.pass, fmt("schlogl region %g", static_cast<double>(r.index + 1)));
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  const auto net = load("gene.rxn");
  const auto sv = cme_stationary(net, 0, 700);
  const auto h = ensemble_histogram(net, 0, 0, 50, kCells, kSeed);
  const double tv = total_variation(h.distribution(700), sv.probs);
  o.require(tv < 0.05, fmt("gene TV(SSA, CME) %.4f < 0.05", tv));

  ReactionNetwork bd;
  bd.reactions = {{0, 1, {10.0, 0.0}}, {1, -1, {1.0, 0.0}}};
  const auto p = cme_stationary(bd, 0, 60);
  double log_term = -10.0, z = 0.0;
  std::vector<double> pois(61);
  for (int x = 0; x <= 60; ++x) {
    if (x) log_term += std::log(10.0 / x);
    pois[static_cast<std::size_t>(x)] = std::exp(log_term);
    z += pois[static_cast<std::size_t>(x)];
  }
  double err = 0.0;
  for (std::size_t x = 0; x <= 60; ++x) err = std::max(err, std::fabs(p.probs[x] - pois[x] / z));
  o.require(err < 1e-10, fmt("truncated Poisson max error %.3g < 1e-10", err));
  return o;
}

Outcome numerical_self_checks() {
  Outcome o;
  for (const char* name : {"gene.rxn", "schlogl.rxn"}) {
    const auto net = load(name);
    for (double k : {net.k_range.lo, net.k_range.hi}) {
      const auto d = stationary_density(net, k);
      o.require(std::fabs(d.mass() - 1.0) < 1e-6, std::string(name) + fmt(" K=%g |mass-1| %.2g", k, std::fabs(d.mass() - 1)));
    }
    const auto a = build_drift(net).at(net.k_default);
    const auto b = build_diffusion(net).at(net.k_default);
    const double x_max = choose_x_max(a, b, 0.1);
    double err[2];
    for (int i = 0; i < 2; ++i) {
      const double h = i == 0 ? 0.1 : 0.05;
      const auto d = stationary_density(a, b, GridSpec{h, x_max});
      double e = 0.0;
      for (std::size_t j = 1; j + 1 < d.size(); ++j) {
        e = std::max(e, std::fabs((d.log_values[j + 1] - d.log_values[j - 1]) / (2 * h) + a(d.x(j)) / b(d.x(j))));
      }
      err[i] = e;
    }
    const double order = std::log2(err[0] / err[1]);
    o.require(order > 1.8 && order < 2.2, std::string(name) + fmt(" gradient order %.3f", order));

    const auto cond = check_theorem1(net);
    const double k_mid = 0.5 * (net.k_range.lo + net.k_range.hi);
    const double dk = 0.05 * (net.k_range.hi - net.k_range.lo);
    for (std::size_t i = 0; i < cond.regions.size(); ++i) {
      const auto g = g_profile(net, k_mid, dk, i);
      const double sign = cond.regions[i].direction == Direction::flattens ? 1.0 : -1.0;
      double worst = 0.0;
      for (double v : g.g) worst = std::max(worst, -sign * v);
      o.require(worst <= 1e-4 && !g.g.empty(),
                std::string(name) + fmt(" region %g G sign breach %.2g", static_cast<double>(i + 1), worst));
    }
  }
  return o;
}

Outcome parser_checks() {
  Outcome o;
  for (const char* name : {"gene.rxn", "schlogl.rxn"}) {
    const auto net = load(name);
    o.require(parse_network(serialize_network(net)) == net, std::string(name) + " round trip");
  }
  auto positioned = [&](const std::string& src, ParseErrorKind kind, const std::string& label) {
    try {
      parse_network(src);
      o.require(false, label + " rejected");
    } catch (const ParseError& e) {
      o.require(e.kind() == kind && e.line() == 2 && e.column() > 1,
                label + " -> " + e.what());
    }
  };
  positioned("control K range 0 1 default 0\nreaction 0 -> 1 @ K*K\n", ParseErrorKind::nonaffine_rate, "nonaffine");
  positioned("control K range 0 60 default 0\nreaction 0 -> 1 @ 50 - K\n", ParseErrorKind::range, "negative rate");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "gene-expression peak", gene_peak},
      {2, "gene-expression dispersion", gene_dispersion},
      {3, "Schlogl structure", schlogl_structure},
      {4, "Schlogl region mass", schlogl_region_mass},
      {5, "Theorem 1 verdicts", theorem1_verdicts},
      {6, "monotonicity property suite", monotonicity},
      {7, "oracle consistency", oracle_consistency},
      {8, "numerical self-checks", numerical_self_checks},
      {9, "parser", parser_checks},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str());
    std::fflush(stdout);
    ok = ok && out.pass;
  }
  return ok ? 0 : 1;
}
