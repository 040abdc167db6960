#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "peaksharp/cfpe.hpp"
#include "peaksharp/network.hpp"

namespace peaksharp {

/// Seed of cell `index` derived from `base` (SplitMix64 step + finalizer).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::int64_t> states;
  std::uint64_t seed = 0;
};

/// Gillespie direct method on the CME; propensities always use the exact
/// falling-factorial convention.
std::int64_t simulate_end_state(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                                std::uint64_t seed);

/// Full jump path on [0, t_end]. `max_events` bounds memory.
Trajectory simulate_trajectory(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                               std::uint64_t seed, std::size_t max_events = 10'000'000);

struct EnsembleHistogram {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t n_cells = 0;
  double t_end = 0.0;
  double k = 0.0;
  std::uint64_t base_seed = 0;

  double mean() const;
  /// Sample standard deviation (n - 1 denominator).
  double stddev() const;
  double fraction_in(const Interval& region) const;
  /// Empirical probabilities over states 0..max(x_max, largest state).
  std::vector<double> distribution(std::int64_t x_max = 0) const;
};

/// Worker threads for ensembles; 0 selects hardware concurrency. Results never
/// depend on this value.
struct EnsembleOptions {
  unsigned threads = 0;
};

EnsembleHistogram ensemble_histogram(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                                     std::int64_t n_cells, std::uint64_t base_seed,
                                     const EnsembleOptions& options = {});

/// n_cells x |sample_times| matrix of zero-order-hold samples. Cell j of this
/// ensemble follows exactly the same path as cell j of ensemble_histogram.
std::vector<std::vector<std::int64_t>> time_series(const ReactionNetwork& net, double k, std::int64_t x0,
                                                   const std::vector<double>& sample_times,
                                                   std::int64_t n_cells, std::uint64_t base_seed,
                                                   const EnsembleOptions& options = {});

EnsembleHistogram histogram_from_column(const std::vector<std::vector<std::int64_t>>& samples,
                                        std::size_t column, double t, double k, std::uint64_t base_seed);

/// Compares the ensemble at t_end/2 with the ensemble at t_end on shared
/// pooled-decile bins. The output is labelled stationary when the binned
/// total variation stays under max(0.02, three times its sampling-noise mean).
struct StationarityDiagnostic {
  double tv = 0.0;
  double noise_tv = 0.0;
  double threshold = 0.02;
  bool stationary = false;
};

StationarityDiagnostic stationarity_check(const EnsembleHistogram& half, const EnsembleHistogram& end);

}  // namespace peaksharp
