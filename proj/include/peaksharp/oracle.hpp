#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "peaksharp/cfpe.hpp"
#include "peaksharp/network.hpp"

namespace peaksharp {

/// Stationary law of the CME truncated to states 0..x_max_trunc.
struct StationaryVector {
  std::vector<double> probs;
  std::int64_t x_max_trunc = 0;
  double residual = 0.0;  // max-norm of the global balance equations
  bool truncation_warning = false;  // probs[x_max_trunc] > 1e-8
};

/// Builds the truncated generator (jumps leaving [0, x_max_trunc] are dropped,
/// which keeps the boundary reflecting) and solves pQ = 0, sum p = 1 with the
/// Grassmann-Taksar-Heyman state reduction. GTH performs no subtractions, so
/// even 1e-300-scale probabilities keep full relative precision.
/// Throws Error(singular_system) when the chain has several closed classes.
StationaryVector cme_stationary(const ReactionNetwork& net, double k, std::int64_t x_max_trunc);

/// Peaks and valleys of a distribution over 0..n-1: strict local maxima and
/// minima, with a boundary peak at 0 when P(0) > P(1). Mass beyond the last
/// state is taken as zero.
PeakStructure discrete_extrema(std::span<const double> probs);

double total_variation(std::span<const double> p, std::span<const double> q);

struct RegionMassPair {
  Interval region;
  double mass_p = 0.0;
  double mass_q = 0.0;
};

struct DistributionComparison {
  double tv = 0.0;
  std::vector<RegionMassPair> regions;
};

DistributionComparison compare_distributions(std::span<const double> p, std::span<const double> q,
                                             const std::vector<Interval>& regions);

struct RegionStats {
  Interval region;
  double mass = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Raw mass plus the mean and standard deviation within each region.
std::vector<RegionStats> region_stats(std::span<const double> dist, const std::vector<Interval>& regions);

/// CFPE density evaluated at integer states 0..x_max and renormalized.
std::vector<double> bin_density(const DensityGrid& density, std::int64_t x_max);

}  // namespace peaksharp
