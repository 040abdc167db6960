#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peaksharp/cfpe.hpp"

namespace peaksharp {

/// Probability ratio lambda_i(x) = P(x) / P(x_pi) over region R_i.
struct SharpnessProfile {
  std::size_t region_index = 0;  // 0-based
  double peak_x = 0.0;
  std::vector<double> grid_x;      // region grid points plus the peak itself
  std::vector<double> lambda;
  std::vector<double> log_lambda;  // exact log ratio, never underflows
};

/// `drift` and `diffusion` must be the polynomials the density was built from;
/// they pin P(x_pi) by integrating -A/B from the nearest grid node to the peak.
SharpnessProfile lambda_profile(const DensityGrid& density, const PeakStructure& ps, std::size_t i,
                                const Polynomial& drift, const Polynomial& diffusion);
SharpnessProfile lambda_profile(const StationaryAnalysis& analysis, std::size_t i);

/// True iff every coefficient of the drift is K-independent (exact test).
bool check_lemma1(const KPolynomial& drift);

enum class DkbSign { positive, negative, mixed, zero };
enum class Direction { flattens, sharpens, none, indeterminate };

const char* to_string(DkbSign s);
const char* to_string(Direction d);

/// Sign of `p` over [lo, hi], decided from its real roots rather than sampling.
DkbSign classify_sign(const Polynomial& p, double lo, double hi);

struct RegionVerdict {
  Interval region;
  DkbSign dkb_sign = DkbSign::zero;
  Direction direction = Direction::none;
};

struct ConditionReport {
  bool lemma1_holds = false;
  KPolynomial drift;
  KPolynomial diffusion;
  Polynomial dkb;  // d/dK of B(x)
  PeakStructure structure;  // at the network's default K
  double x_max = 0.0;
  std::vector<RegionVerdict> regions;
};

ConditionReport check_theorem1(const ReactionNetwork& net, Convention convention = Convention::continuous,
                               std::optional<double> x_max = std::nullopt, double h = 0.1);

struct RegionMonotonicity {
  std::size_t index = 0;
  Direction direction = Direction::none;
  double max_violation = 0.0;
  bool pass = false;
};

struct MonotonicityReport {
  double max_violation = 0.0;
  double tolerance = 1e-6;
  std::vector<RegionMonotonicity> regions;
  bool pass() const;
};

/// Checks, for every adjacent pair of K values and every region, that the
/// lambda profiles are ordered in the direction the symbolic verdict predicts.
MonotonicityReport verify_monotonicity(const ReactionNetwork& net, const std::vector<double>& ks,
                                       Convention convention = Convention::continuous,
                                       const GridSpec& grid = {});

struct GProfile {
  std::size_t region_index = 0;
  double peak_x = 0.0;
  std::vector<double> x;
  std::vector<double> g;  // d/dK ln lambda_i(x) by central differences
};

GProfile g_profile(const ReactionNetwork& net, double k, double dk, std::size_t i,
                   Convention convention = Convention::continuous, const GridSpec& grid = {});

struct InequalityCheck {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool negligible = false;
};

struct PerturbationReport {
  double k = 0.0;
  std::map<std::size_t, double> perturbations;
  std::vector<double> baseline_peaks;
  std::vector<double> perturbed_peaks;
  double peak_shift_max = 0.0;
  bool modality_changed = false;
  bool dkb_sign_change = false;
  bool schlogl_layout = false;
  std::vector<InequalityCheck> inequalities;
  /// Ratio below which an inequality "lhs << rhs" counts as satisfied.
  static constexpr double negligible_ratio = 0.1;
};

/// True for the controlled Schlögl reaction layout (source, decay, autocatalysis,
/// reverse, then the three control reactions).
bool is_schlogl_layout(const ReactionNetwork& net);

/// Perturbs base rates (reaction index -> additive change) and reports the
/// resulting peak shift plus, for the Schlögl layout, the negligibility
/// inequalities for delta (reaction 6) and epsilon (reaction 7).
PerturbationReport perturb_analysis(const ReactionNetwork& net, double k,
                                    const std::map<std::size_t, double>& perturbations,
                                    Convention convention = Convention::continuous,
                                    const GridSpec& grid = {});

}  // namespace peaksharp
