#include "peaksharp/report.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "peaksharp/parser.hpp"

namespace peaksharp {

json to_json(const Interval& r) { return json::array({r.lo, r.hi}); }

json to_json(const Polynomial& p) {
  json out = json::array();
  for (int d = 0; d <= p.degree(); ++d) out.push_back(p.coeff(d));
  return out;
}

json to_json(const KPolynomial& p) { return {{"base", to_json(p.base_part())}, {"k", to_json(p.k_part())}}; }

json to_json(const PeakStructure& ps) {
  json regions = json::array();
  for (const Interval& r : ps.regions) regions.push_back(to_json(r));
  return {{"peaks", ps.peaks},
          {"valleys", ps.valleys},
          {"regions", regions},
          {"modality", ps.modality},
          {"boundary_peak", ps.boundary_peak}};
}

json to_json(const ConditionReport& report) {
  json regions = json::array();
  for (std::size_t i = 0; i < report.regions.size(); ++i) {
    const RegionVerdict& v = report.regions[i];
    regions.push_back({{"index", i},
                       {"region", to_json(v.region)},
                       {"dKB_sign", to_string(v.dkb_sign)},
                       {"direction", to_string(v.direction)}});
  }
  return {{"lemma1", report.lemma1_holds},
          {"A_coeffs", to_json(report.drift)},
          {"B_coeffs", to_json(report.diffusion)},
          {"dKB_coeffs", to_json(report.dkb)},
          {"x_max", report.x_max},
          {"regions", regions}};
}

json to_json(const MonotonicityReport& report) {
  json regions = json::array();
  for (const RegionMonotonicity& r : report.regions) {
    regions.push_back({{"index", r.index},
                       {"direction", to_string(r.direction)},
                       {"max_violation", r.max_violation},
                       {"pass", r.pass}});
  }
  return {{"pass", report.pass()},
          {"max_violation", report.max_violation},
          {"tolerance", report.tolerance},
          {"regions", regions}};
}

json to_json(const PerturbationReport& report) {
  json perturbations = json::object();
  for (const auto& [i, v] : report.perturbations) perturbations[std::to_string(i + 1)] = v;
  json inequalities = json::array();
  for (const InequalityCheck& c : report.inequalities) {
    inequalities.push_back({{"label", c.label},
                            {"lhs", c.lhs},
                            {"rhs", c.rhs},
                            {"ratio", c.ratio},
                            {"negligible", c.negligible}});
  }
  return {{"K", report.k},
          {"perturbations", perturbations},
          {"baseline_peaks", report.baseline_peaks},
          {"perturbed_peaks", report.perturbed_peaks},
          {"peak_shift_max", report.peak_shift_max},
          {"modality_changed", report.modality_changed},
          {"dKB_sign_change", report.dkb_sign_change},
          {"schlogl_layout", report.schlogl_layout},
          {"negligible_ratio", PerturbationReport::negligible_ratio},
          {"inequalities", inequalities}};
}

json to_json(const StationarityDiagnostic& d) {
  return {{"tv", d.tv}, {"noise_tv", d.noise_tv}, {"threshold", d.threshold}, {"stationary", d.stationary}};
}

json to_json(const DistributionComparison& c) {
  json regions = json::array();
  for (const RegionMassPair& r : c.regions) {
    regions.push_back({{"lo", r.region.lo}, {"hi", r.region.hi}, {"mass_p", r.mass_p}, {"mass_q", r.mass_q}});
  }
  return {{"tv", c.tv}, {"regions", regions}};
}

std::string density_csv(const DensityGrid& density) {
  std::string out = "x,density,log_density\n";
  for (std::size_t j = 0; j < density.size(); ++j) {
    out += format_number(density.x(j));
    out += ',';
    out += format_number(density.values[j]);
    out += ',';
    out += format_number(density.log_values[j] + density.log_norm_const);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const EnsembleHistogram& h) {
  std::string out = "state,count\n";
  for (const auto& [x, c] : h.counts) out += std::to_string(x) + ',' + std::to_string(c) + '\n';
  return out;
}

std::string time_series_csv(const std::vector<double>& times,
                            const std::vector<std::vector<std::int64_t>>& samples) {
  std::string out = "t";
  for (std::size_t j = 0; j < samples.size(); ++j) out += ",cell_" + std::to_string(j);
  out += '\n';
  for (std::size_t c = 0; c < times.size(); ++c) {
    out += format_number(times[c]);
    for (const auto& row : samples) out += ',' + std::to_string(row[c]);
    out += '\n';
  }
  return out;
}

std::string stationary_csv(const StationaryVector& sv) {
  std::string out = "state,prob\n";
  for (std::size_t x = 0; x < sv.probs.size(); ++x) out += std::to_string(x) + ',' + format_number(sv.probs[x]) + '\n';
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) {
      throw fs::filesystem_error("cannot write", tmp, std::make_error_code(std::errc::io_error));
    }
  }
  fs::rename(tmp, path);
}

}  // namespace peaksharp
