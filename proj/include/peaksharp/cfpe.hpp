#pragma once

#include <optional>
#include <vector>

#include "peaksharp/network.hpp"
#include "peaksharp/polynomial.hpp"

namespace peaksharp {

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x < hi; }
  bool operator==(const Interval&) const = default;
};

/// Uniform analysis grid. When x_max is unset the truncation policy picks it.
struct GridSpec {
  double h = 0.1;
  std::optional<double> x_max;
};

/// Stationary CFPE density sampled at x_j = j * h, j = 0..n.
struct DensityGrid {
  double x0 = 0.0;
  double h = 0.1;
  double x_max = 0.0;
  std::vector<double> values;      // normalized density
  std::vector<double> log_values;  // -Phi(x_j), unnormalized
  double norm_const = 0.0;         // C = 1 / integral of exp(-Phi)
  double log_norm_const = 0.0;

  std::size_t size() const { return values.size(); }
  double x(std::size_t j) const { return x0 + static_cast<double>(j) * h; }
  /// Trapezoidal mass of `values`.
  double mass() const;
  /// Trapezoidal mass over [lo, hi) restricted to grid points.
  double mass_in(const Interval& region) const;
  /// Mean and standard deviation of the density restricted to a region.
  std::pair<double, double> moments_in(const Interval& region) const;
  /// Linear interpolation of the normalized density; zero outside the grid.
  double density_at(double x) const;
};

/// Peaks, valleys and the regions they induce.
struct PeakStructure {
  std::vector<double> peaks;
  std::vector<double> valleys;
  std::vector<Interval> regions;
  int modality = 0;
  bool boundary_peak = false;
};

/// Contribution of a single reaction to A(x): -r f(x) + r^2/2 f'(x).
KPolynomial reaction_drift(const Reaction& rxn, Convention convention);
/// Contribution of a single reaction to B(x): r^2/2 f(x).
KPolynomial reaction_diffusion(const Reaction& rxn, Convention convention);

KPolynomial build_drift(const ReactionNetwork& net, Convention convention = Convention::continuous);
KPolynomial build_diffusion(const ReactionNetwork& net,
                            Convention convention = Convention::continuous);

/// Truncation point: twice the largest positive root of the drift (or a
/// production/degradation scale when there is none), doubled until the
/// unnormalized density at x_max falls below 1e-12 of its maximum.
double choose_x_max(const Polynomial& drift, const Polynomial& diffusion, double h);

DensityGrid stationary_density(const Polynomial& drift, const Polynomial& diffusion,
                               const GridSpec& grid);
DensityGrid stationary_density(const ReactionNetwork& net, double k, const GridSpec& grid = {},
                               Convention convention = Convention::continuous);

/// Extrema of the stationary density from the roots of the drift on (0, x_max).
PeakStructure find_extrema(const Polynomial& drift, double x_max, double h = 0.1);
PeakStructure find_extrema(const ReactionNetwork& net, double k,
                           Convention convention = Convention::continuous,
                           const GridSpec& grid = {});

/// R_1 = [0, v_1), R_i = [v_(i-1), v_i), R_n = [v_(n-1), x_max).
std::vector<Interval> regions(const PeakStructure& ps, double x_max);

/// Everything the sharpness layer needs at one value of K.
struct StationaryAnalysis {
  double k = 0.0;
  Convention convention = Convention::continuous;
  Polynomial drift;
  Polynomial diffusion;
  DensityGrid density;
  PeakStructure structure;
};

StationaryAnalysis analyze_at(const ReactionNetwork& net, double k, Convention convention,
                              const GridSpec& grid);

/// Policy x_max that works for every K in `ks` (the maximum of the per-K choices).
double common_x_max(const ReactionNetwork& net, const std::vector<double>& ks, Convention convention,
                    double h);

}  // namespace peaksharp
