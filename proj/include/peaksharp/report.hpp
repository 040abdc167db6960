#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "peaksharp/cfpe.hpp"
#include "peaksharp/oracle.hpp"
#include "peaksharp/sharpness.hpp"
#include "peaksharp/ssa.hpp"

namespace peaksharp {

using nlohmann::json;

json to_json(const Interval& r);
json to_json(const Polynomial& p);
json to_json(const KPolynomial& p);  // {"base": [...], "k": [...]}, ascending powers
json to_json(const PeakStructure& ps);
json to_json(const ConditionReport& report);
json to_json(const MonotonicityReport& report);
json to_json(const PerturbationReport& report);
json to_json(const StationarityDiagnostic& d);
json to_json(const DistributionComparison& c);

std::string density_csv(const DensityGrid& density);
std::string histogram_csv(const EnsembleHistogram& h);
std::string time_series_csv(const std::vector<double>& times,
                            const std::vector<std::vector<std::int64_t>>& samples);
std::string stationary_csv(const StationaryVector& sv);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partial file. Throws std::filesystem::filesystem_error on failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace peaksharp
