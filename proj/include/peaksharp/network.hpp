#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace peaksharp {

/// Propensity convention. `exact` is the falling-factorial mass-action form
/// used by the CME; `continuous` is the power-law form k * x^s / s!.
enum class Convention { exact, continuous };

const char* to_string(Convention c);
Convention convention_from_string(const std::string& name);

/// Closed interval of admissible control-parameter values.
struct KRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double k) const { return k >= lo && k <= hi; }
  bool operator==(const KRange&) const = default;
};

/// Rate constant affine in the control parameter: base + slope * K.
struct RateExpr {
  double base = 0.0;
  double slope = 0.0;

  double at(double k) const { return base + slope * k; }
  bool operator==(const RateExpr&) const = default;
};

/// Range-checked rate evaluation. Throws Error(range) when K is outside `range`.
double rate_eval(const RateExpr& expr, double k, const KRange& range);

/// s X -> (s + r) X with rate constant `rate`.
struct Reaction {
  int s = 0;
  int r = 0;
  RateExpr rate;

  bool operator==(const Reaction&) const = default;
};

struct ReactionNetwork {
  std::string name;
  std::vector<Reaction> reactions;
  KRange k_range;
  double k_default = 0.0;
  std::map<std::string, double> params;
  // Optional declared start state; lets a network without a source reaction
  // pass validation.
  std::optional<std::int64_t> initial_state;

  bool operator==(const ReactionNetwork&) const = default;

  /// Throws Error(range) if K is outside k_range.
  void check_k(double k) const;
  /// Rate constant of reaction `i` at K, range-checked.
  double rate(std::size_t i, double k) const;
};

/// x^s / s! (continuous) or x (x-1) ... (x-s+1) / s! (exact, zero for x < s).
double combinatorial_factor(int s, double x, Convention convention);

/// f_i(x) for an already evaluated rate constant.
double propensity(const Reaction& rxn, double rate_value, std::int64_t x, Convention convention);

/// f_i(x) with K range checking against the owning network.
double propensity(const ReactionNetwork& net, std::size_t i, std::int64_t x, double k,
                  Convention convention);

struct Violation {
  std::optional<std::size_t> reaction;  // index into net.reactions, if any
  std::string rule;
  std::string message;
};

/// Empty iff every model invariant holds.
std::vector<Violation> validate_network(const ReactionNetwork& net);

/// Throws Error(validation) carrying the first violation, if any.
void require_valid(const ReactionNetwork& net);

}  // namespace peaksharp
