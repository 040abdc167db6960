#include "peaksharp/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peaksharp/error.hpp"

namespace peaksharp {

const char* to_string(DkbSign s) {
  switch (s) {
    case DkbSign::positive: return "positive";
    case DkbSign::negative: return "negative";
    case DkbSign::mixed: return "mixed";
    case DkbSign::zero: return "zero";
  }
  return "unknown";
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::flattens: return "flattens";
    case Direction::sharpens: return "sharpens";
    case Direction::none: return "none";
    case Direction::indeterminate: return "indeterminate";
  }
  return "unknown";
}

SharpnessProfile lambda_profile(const DensityGrid& density, const PeakStructure& ps, std::size_t i,
                                const Polynomial& drift, const Polynomial& diffusion) {
  if (i >= ps.regions.size() || i >= ps.peaks.size()) {
    throw Error(ErrorKind::range, "region index " + std::to_string(i + 1) + " does not exist");
  }
  const Interval region = ps.regions[i];
  const double peak = ps.peaks[i];
  const double h = density.h;
  const std::size_t last = density.size() - 1;

  // log P(x_p) from the nearest node plus a Simpson step of -A/B.
  const auto near = std::min(last, static_cast<std::size_t>(std::llround(std::max(0.0, peak) / h)));
  const double xn = density.x(near);
  const double mid = 0.5 * (xn + peak);
  auto ratio = [&](double x) { return drift(x) / diffusion(x); };
  const double step = (peak - xn) / 6.0 * (ratio(xn) + 4.0 * ratio(mid) + ratio(peak));
  const double log_peak = density.log_values[near] - step;
  if (!std::isfinite(log_peak)) {
    throw Error(ErrorKind::zero_peak_density, "density at peak x=" + std::to_string(peak) + " underflowed");
  }

  SharpnessProfile out;
  out.region_index = i;
  out.peak_x = peak;
  const double tie = 1e-12 * std::max(1.0, std::fabs(peak));
  bool peak_inserted = false;
  auto push = [&](double x, double log_lambda) {
    out.grid_x.push_back(x);
    out.log_lambda.push_back(log_lambda);
    out.lambda.push_back(std::exp(log_lambda));
  };
  for (std::size_t j = 0; j <= last; ++j) {
    const double xj = density.x(j);
    const bool inside = region.contains(xj) || (j == last && xj == region.hi);
    if (!inside) continue;
    if (!peak_inserted && xj >= peak - tie) {
      if (std::fabs(xj - peak) > tie) push(peak, 0.0);
      peak_inserted = true;
    }
    if (std::fabs(xj - peak) <= tie) {
      push(xj, 0.0);
    } else {
      push(xj, density.log_values[j] - log_peak);
    }
  }
  if (!peak_inserted) push(peak, 0.0);
  return out;
}

SharpnessProfile lambda_profile(const StationaryAnalysis& analysis, std::size_t i) {
  return lambda_profile(analysis.density, analysis.structure, i, analysis.drift, analysis.diffusion);
}

bool check_lemma1(const KPolynomial& drift) {
  return std::all_of(drift.coeffs().begin(), drift.coeffs().end(),
                     [](const KPolynomial::Coeff& c) { return c.second == 0.0; });
}

DkbSign classify_sign(const Polynomial& p, double lo, double hi) {
  if (p.is_zero()) return DkbSign::zero;
  std::vector<double> knots{lo};
  for (double r : real_roots(p, lo, hi)) {
    if (r > knots.back()) knots.push_back(r);
  }
  if (hi > knots.back()) knots.push_back(hi);
  bool pos = false;
  bool neg = false;
  if (knots.size() == 1) {
    const double v = p(lo);
    pos = v > 0.0;
    neg = v < 0.0;
  }
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const double v = p(0.5 * (knots[j] + knots[j + 1]));
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  if (pos && neg) return DkbSign::mixed;
  if (pos) return DkbSign::positive;
  if (neg) return DkbSign::negative;
  return DkbSign::zero;
}

namespace {

Direction direction_for(DkbSign sign) {
  switch (sign) {
    case DkbSign::positive:
    case DkbSign::zero: return Direction::flattens;
    case DkbSign::negative: return Direction::sharpens;
    case DkbSign::mixed: return Direction::indeterminate;
  }
  return Direction::indeterminate;
}

}  // namespace

ConditionReport check_theorem1(const ReactionNetwork& net, Convention convention,
                               std::optional<double> x_max, double h) {
  ConditionReport rep;
  rep.drift = build_drift(net, convention);
  rep.diffusion = build_diffusion(net, convention);
  rep.lemma1_holds = check_lemma1(rep.drift);
  rep.dkb = rep.diffusion.k_part();
  const double kd = net.k_default;
  const Polynomial a = rep.drift.at(kd);
  rep.x_max = x_max ? *x_max : choose_x_max(a, rep.diffusion.at(kd), h);
  rep.structure = find_extrema(a, rep.x_max, h);
  for (const Interval& region : rep.structure.regions) {
    RegionVerdict v;
    v.region = region;
    v.dkb_sign = classify_sign(rep.dkb, region.lo, region.hi);
    v.direction = rep.lemma1_holds ? direction_for(v.dkb_sign) : Direction::none;
    rep.regions.push_back(v);
  }
  return rep;
}

bool MonotonicityReport::pass() const {
  return !regions.empty() &&
         std::all_of(regions.begin(), regions.end(), [](const RegionMonotonicity& r) { return r.pass; });
}

MonotonicityReport verify_monotonicity(const ReactionNetwork& net, const std::vector<double>& ks,
                                       Convention convention, const GridSpec& grid) {
  if (ks.size() < 2) throw Error(ErrorKind::validation, "monotonicity check needs at least two K values");
  if (!std::is_sorted(ks.begin(), ks.end())) {
    throw Error(ErrorKind::validation, "K values must be ascending");
  }
  for (double k : ks) net.check_k(k);
  const double x_max = grid.x_max ? *grid.x_max : common_x_max(net, ks, convention, grid.h);
  const GridSpec fixed{grid.h, x_max};
  const ConditionReport verdict = check_theorem1(net, convention, x_max, grid.h);
  if (!verdict.lemma1_holds) {
    throw Error(ErrorKind::validation, "drift depends on K; peak positions are not preserved");
  }

  std::vector<StationaryAnalysis> runs;
  runs.reserve(ks.size());
  for (double k : ks) runs.push_back(analyze_at(net, k, convention, fixed));

  MonotonicityReport rep;
  const std::size_t n_regions = verdict.regions.size();
  for (std::size_t i = 0; i < n_regions; ++i) {
    RegionMonotonicity rm;
    rm.index = i;
    rm.direction = verdict.regions[i].direction;
    for (std::size_t t = 0; t + 1 < runs.size(); ++t) {
      const SharpnessProfile a = lambda_profile(runs[t], i);
      const SharpnessProfile b = lambda_profile(runs[t + 1], i);
      if (a.grid_x != b.grid_x) {
        throw Error(ErrorKind::structure, "lambda profiles at different K use different grids");
      }
      for (std::size_t j = 0; j < a.lambda.size(); ++j) {
        double breach = 0.0;
        if (rm.direction == Direction::flattens) breach = a.lambda[j] - b.lambda[j];
        if (rm.direction == Direction::sharpens) breach = b.lambda[j] - a.lambda[j];
        rm.max_violation = std::max(rm.max_violation, breach);
      }
    }
    const bool decided = rm.direction == Direction::flattens || rm.direction == Direction::sharpens;
    rm.pass = decided && rm.max_violation <= rep.tolerance;
    rep.max_violation = std::max(rep.max_violation, rm.max_violation);
    rep.regions.push_back(rm);
  }
  return rep;
}

GProfile g_profile(const ReactionNetwork& net, double k, double dk, std::size_t i,
                   Convention convention, const GridSpec& grid) {
  if (!(dk > 0.0)) throw Error(ErrorKind::validation, "dK must be positive");
  const double k_lo = k - dk;
  const double k_hi = k + dk;
  net.check_k(k_lo);
  net.check_k(k_hi);
  if (!check_lemma1(build_drift(net, convention))) {
    throw Error(ErrorKind::validation, "drift depends on K; G_i is undefined across K");
  }
  const double x_max = grid.x_max ? *grid.x_max : common_x_max(net, {k_lo, k, k_hi}, convention, grid.h);
  const GridSpec fixed{grid.h, x_max};
  const SharpnessProfile lo = lambda_profile(analyze_at(net, k_lo, convention, fixed), i);
  const SharpnessProfile hi = lambda_profile(analyze_at(net, k_hi, convention, fixed), i);
  if (lo.grid_x != hi.grid_x) {
    throw Error(ErrorKind::structure, "lambda profiles at K +/- dK use different grids");
  }
  GProfile out;
  out.region_index = i;
  out.peak_x = lo.peak_x;
  out.x = lo.grid_x;
  out.g.resize(out.x.size());
  for (std::size_t j = 0; j < out.x.size(); ++j) {
    out.g[j] = (hi.log_lambda[j] - lo.log_lambda[j]) / (2.0 * dk);
  }
  return out;
}

bool is_schlogl_layout(const ReactionNetwork& net) {
  static constexpr int kS[7] = {0, 1, 2, 3, 0, 1, 1};
  static constexpr int kR[7] = {1, -1, 1, -1, 1, -1, 1};
  if (net.reactions.size() != 7) return false;
  for (std::size_t i = 0; i < 7; ++i) {
    const Reaction& rx = net.reactions[i];
    if (rx.s != kS[i] || rx.r != kR[i]) return false;
    const bool controlled = i >= 4;
    if (controlled != (rx.rate.slope != 0.0)) return false;
  }
  return true;
}

PerturbationReport perturb_analysis(const ReactionNetwork& net, double k,
                                    const std::map<std::size_t, double>& perturbations,
                                    Convention convention, const GridSpec& grid) {
  net.check_k(k);
  ReactionNetwork perturbed = net;
  for (const auto& [idx, delta] : perturbations) {
    if (idx >= net.reactions.size()) {
      throw Error(ErrorKind::validation, "perturbation targets reaction " + std::to_string(idx + 1) +
                                             " but the network has " +
                                             std::to_string(net.reactions.size()));
    }
    perturbed.reactions[idx].rate.base += delta;
    if (perturbed.reactions[idx].rate.at(k) < 0.0) {
      throw Error(ErrorKind::validation,
                  "perturbed rate of reaction " + std::to_string(idx + 1) + " is negative at K=" +
                      std::to_string(k));
    }
  }

  PerturbationReport rep;
  rep.k = k;
  rep.perturbations = perturbations;
  const Polynomial a0 = build_drift(net, convention).at(k);
  const Polynomial b0 = build_diffusion(net, convention).at(k);
  const Polynomial a1 = build_drift(perturbed, convention).at(k);
  const Polynomial b1 = build_diffusion(perturbed, convention).at(k);
  const double x_max = grid.x_max ? *grid.x_max
                                  : std::max(choose_x_max(a0, b0, grid.h), choose_x_max(a1, b1, grid.h));
  const PeakStructure base = find_extrema(a0, x_max, grid.h);
  const PeakStructure pert = find_extrema(a1, x_max, grid.h);
  rep.baseline_peaks = base.peaks;
  rep.perturbed_peaks = pert.peaks;
  if (base.peaks.size() != pert.peaks.size()) {
    rep.modality_changed = true;
    rep.peak_shift_max = std::numeric_limits<double>::infinity();
    rep.dkb_sign_change = true;
  } else {
    for (std::size_t j = 0; j < base.peaks.size(); ++j) {
      rep.peak_shift_max = std::max(rep.peak_shift_max, std::fabs(pert.peaks[j] - base.peaks[j]));
    }
    const Polynomial dkb = build_diffusion(net, convention).k_part();
    const Polynomial dkb_pert = build_diffusion(perturbed, convention).k_part();
    for (std::size_t j = 0; j < base.regions.size(); ++j) {
      if (classify_sign(dkb, base.regions[j].lo, base.regions[j].hi) !=
          classify_sign(dkb_pert, pert.regions[j].lo, pert.regions[j].hi)) {
        rep.dkb_sign_change = true;
      }
    }
  }

  rep.schlogl_layout = is_schlogl_layout(net);
  if (rep.schlogl_layout) {
    auto value_of = [&](std::size_t idx) {
      auto it = perturbations.find(idx);
      return it == perturbations.end() ? 0.0 : it->second;
    };
    const double s1k1 = net.reactions[0].rate.at(k);
    const double k2 = net.reactions[1].rate.at(k);
    const double s2k3 = net.reactions[2].rate.at(k);
    const double delta = value_of(5);
    const double epsilon = value_of(6);
    auto add = [&](std::string label, double lhs, double rhs) {
      InequalityCheck c{std::move(label), lhs, rhs, rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity(),
                        false};
      if (lhs == 0.0) c.ratio = 0.0;
      c.negligible = c.ratio < PerturbationReport::negligible_ratio;
      rep.inequalities.push_back(std::move(c));
    };
    add("|delta - epsilon| << S2k3/2 + k2", std::fabs(delta - epsilon), 0.5 * s2k3 + k2);
    add("|delta| << |-S1k1 + k2/2|", std::fabs(delta), std::fabs(-s1k1 + 0.5 * k2));
    add("|delta + epsilon| << k2 + 2K", std::fabs(delta + epsilon), k2 + 2.0 * k);
  }
  return rep;
}

}  // namespace peaksharp
