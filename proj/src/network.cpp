#include "peaksharp/network.hpp"

#include <cmath>
#include <sstream>

#include "peaksharp/error.hpp"

namespace peaksharp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::range: return "range";
    case ErrorKind::validation: return "validation";
    case ErrorKind::diffusion_nonpositive: return "diffusion_nonpositive";
    case ErrorKind::tail_mass: return "tail_mass_error";
    case ErrorKind::degenerate_root: return "degenerate_root";
    case ErrorKind::no_peaks: return "no_peaks";
    case ErrorKind::structure: return "structure";
    case ErrorKind::zero_peak_density: return "zero_peak_density";
    case ErrorKind::singular_system: return "singular_system";
  }
  return "unknown";
}

const char* to_string(Convention c) {
  return c == Convention::exact ? "exact" : "continuous";
}

Convention convention_from_string(const std::string& name) {
  if (name == "exact") return Convention::exact;
  if (name == "continuous") return Convention::continuous;
  throw Error(ErrorKind::validation, "unknown propensity convention '" + name + "'");
}

namespace {

std::string format_k(double k) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << k;
  return os.str();
}

}  // namespace

double rate_eval(const RateExpr& expr, double k, const KRange& range) {
  if (!range.contains(k)) {
    throw Error(ErrorKind::range, "K=" + format_k(k) + " outside declared range [" +
                                      format_k(range.lo) + ", " + format_k(range.hi) + "]");
  }
  return expr.at(k);
}

void ReactionNetwork::check_k(double k) const {
  if (!k_range.contains(k)) {
    throw Error(ErrorKind::range, "K=" + format_k(k) + " outside declared range [" +
                                      format_k(k_range.lo) + ", " + format_k(k_range.hi) + "]");
  }
}

double ReactionNetwork::rate(std::size_t i, double k) const {
  return rate_eval(reactions.at(i).rate, k, k_range);
}

double combinatorial_factor(int s, double x, Convention convention) {
  double value = 1.0;
  double factorial = 1.0;
  for (int j = 0; j < s; ++j) {
    if (convention == Convention::exact) {
      const double term = x - j;
      if (term <= 0.0) return 0.0;
      value *= term;
    } else {
      value *= x;
    }
    factorial *= j + 1;
  }
  return value / factorial;
}

double propensity(const Reaction& rxn, double rate_value, std::int64_t x, Convention convention) {
  if (x < 0) return 0.0;
  return rate_value * combinatorial_factor(rxn.s, static_cast<double>(x), convention);
}

double propensity(const ReactionNetwork& net, std::size_t i, std::int64_t x, double k,
                  Convention convention) {
  return propensity(net.reactions.at(i), net.rate(i, k), x, convention);
}

std::vector<Violation> validate_network(const ReactionNetwork& net) {
  std::vector<Violation> out;
  if (net.reactions.empty()) {
    out.push_back({std::nullopt, "at least one reaction", "network has no reactions"});
  }
  if (!(net.k_range.lo <= net.k_range.hi) || !std::isfinite(net.k_range.lo) ||
      !std::isfinite(net.k_range.hi)) {
    out.push_back({std::nullopt, "K range ordered",
                   "K range [" + format_k(net.k_range.lo) + ", " + format_k(net.k_range.hi) +
                       "] is empty or not finite"});
  } else if (!net.k_range.contains(net.k_default)) {
    out.push_back({std::nullopt, "default K in range",
                   "default K=" + format_k(net.k_default) + " outside K range"});
  }

  bool has_source = false;
  for (std::size_t i = 0; i < net.reactions.size(); ++i) {
    const Reaction& rx = net.reactions[i];
    if (rx.s < 0) {
      out.push_back({i, "s >= 0", "negative reactant count " + std::to_string(rx.s)});
    }
    if (rx.r == 0) {
      out.push_back({i, "r != 0", "reaction has zero net change"});
    }
    if (rx.r < -rx.s) {
      out.push_back({i, "r >= -s",
                     "net change " + std::to_string(rx.r) + " would consume more than " +
                         std::to_string(rx.s) + " reactant molecules"});
    }
    if (!std::isfinite(rx.rate.base) || !std::isfinite(rx.rate.slope)) {
      out.push_back({i, "finite rate", "rate coefficients must be finite"});
    } else {
      // Affine in K: extremes of the rate sit on the range end points.
      for (double k : {net.k_range.lo, net.k_range.hi}) {
        if (rx.rate.at(k) < 0.0) {
          out.push_back({i, "rate nonnegative", "rate negative at K=" + format_k(k)});
          break;
        }
      }
    }
    if (rx.s == 0 && rx.r > 0) has_source = true;
  }
  if (!net.reactions.empty() && !has_source && !net.initial_state) {
    out.push_back({std::nullopt, "source reaction or initial state",
                   "no reaction with s=0 and r>0 and no declared initial state"});
  }
  if (net.initial_state && *net.initial_state < 0) {
    out.push_back({std::nullopt, "initial state nonnegative", "initial state is negative"});
  }
  return out;
}

void require_valid(const ReactionNetwork& net) {
  const auto violations = validate_network(net);
  if (violations.empty()) return;
  const Violation& v = violations.front();
  std::string msg = v.rule + ": " + v.message;
  if (v.reaction) msg = "reaction " + std::to_string(*v.reaction + 1) + ": " + msg;
  throw Error(ErrorKind::validation, msg);
}

}  // namespace peaksharp
