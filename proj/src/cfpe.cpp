#include "peaksharp/cfpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peaksharp/error.hpp"

namespace peaksharp {

namespace {

constexpr double kTailRatioLog = -27.631021115928547;  // ln(1e-12)
constexpr std::size_t kMaxGridPoints = 20'000'000;
constexpr double kRootTol = 1e-9;
constexpr double kDegenerateSlope = 1e-12;

// x^s / s! or the falling factorial x (x-1) ... (x-s+1) / s!.
Polynomial combinatorial_polynomial(int s, Convention convention) {
  double fact = 1.0;
  for (int j = 2; j <= s; ++j) fact *= j;
  if (convention == Convention::continuous) {
    std::vector<double> c(static_cast<std::size_t>(s) + 1, 0.0);
    c.back() = 1.0 / fact;
    return Polynomial(std::move(c));
  }
  std::vector<double> roots;
  for (int j = 0; j < s; ++j) roots.push_back(j);
  return from_roots(roots, 1.0 / fact);
}

KPolynomial scale_by_rate(const Polynomial& shape, const RateExpr& rate) {
  std::vector<KPolynomial::Coeff> c(shape.coeffs().size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = {rate.base * shape.coeffs()[j], rate.slope * shape.coeffs()[j]};
  }
  return KPolynomial(std::move(c));
}

std::size_t grid_points(double x_max, double h) {
  const double n = std::ceil(x_max / h - 1e-9);
  if (!(n >= 1.0) || n > static_cast<double>(kMaxGridPoints)) {
    throw Error(ErrorKind::tail_mass, "grid with x_max=" + std::to_string(x_max) +
                                          " and h=" + std::to_string(h) + " is too large");
  }
  return static_cast<std::size_t>(n);
}

double ratio_at(const Polynomial& drift, const Polynomial& diffusion, double x) {
  const double b = diffusion(x);
  if (!(b > 0.0)) {
    throw Error(ErrorKind::diffusion_nonpositive,
                "diffusion B(x) = " + std::to_string(b) + " <= 0 at x = " + std::to_string(x));
  }
  return drift(x) / b;
}

// Returns (log density at the last node) - (max log density) for a grid of n steps.
double tail_log_ratio(const Polynomial& drift, const Polynomial& diffusion, double h, std::size_t n) {
  double phi = 0.0;
  double f_prev = ratio_at(drift, diffusion, 0.0);
  double lo = 0.0;  // min of phi == max of log density
  for (std::size_t j = 1; j <= n; ++j) {
    const double f = ratio_at(drift, diffusion, static_cast<double>(j) * h);
    phi += 0.5 * h * (f_prev + f);
    lo = std::min(lo, phi);
    f_prev = f;
  }
  return -(phi - lo);
}

}  // namespace

double DensityGrid::mass() const {
  if (values.empty()) return 0.0;
  double m = 0.0;
  for (double v : values) m += v;
  m -= 0.5 * (values.front() + values.back());
  return m * h;
}

namespace {

double trapezoid_weight(std::size_t j, std::size_t size) {
  return (j == 0 || j + 1 == size) ? 0.5 : 1.0;
}

}  // namespace

double DensityGrid::mass_in(const Interval& region) const {
  double m = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double xj = x(j);
    const bool inside = region.contains(xj) || (j + 1 == values.size() && xj == region.hi);
    if (inside) m += trapezoid_weight(j, values.size()) * values[j];
  }
  return m * h;
}

std::pair<double, double> DensityGrid::moments_in(const Interval& region) const {
  double w = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double xj = x(j);
    const bool inside = region.contains(xj) || (j + 1 == values.size() && xj == region.hi);
    if (!inside) continue;
    const double p = trapezoid_weight(j, values.size()) * values[j];
    w += p;
    s1 += p * xj;
    s2 += p * xj * xj;
  }
  if (w <= 0.0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double mean = s1 / w;
  return {mean, std::sqrt(std::max(0.0, s2 / w - mean * mean))};
}

double DensityGrid::density_at(double xq) const {
  if (values.empty() || xq < x0 || xq > x(values.size() - 1)) return 0.0;
  const double t = (xq - x0) / h;
  const auto j = std::min(static_cast<std::size_t>(t), values.size() - 2);
  const double frac = t - static_cast<double>(j);
  return values[j] * (1.0 - frac) + values[j + 1] * frac;
}

KPolynomial reaction_drift(const Reaction& rxn, Convention convention) {
  const Polynomial f = combinatorial_polynomial(rxn.s, convention);
  const double r = rxn.r;
  const Polynomial shape = (-r) * f + (0.5 * r * r) * f.derivative();
  return scale_by_rate(shape, rxn.rate);
}

KPolynomial reaction_diffusion(const Reaction& rxn, Convention convention) {
  const Polynomial f = combinatorial_polynomial(rxn.s, convention);
  const double r = rxn.r;
  return scale_by_rate((0.5 * r * r) * f, rxn.rate);
}

KPolynomial build_drift(const ReactionNetwork& net, Convention convention) {
  KPolynomial a;
  for (const Reaction& rx : net.reactions) a += reaction_drift(rx, convention);
  return a;
}

KPolynomial build_diffusion(const ReactionNetwork& net, Convention convention) {
  KPolynomial b;
  for (const Reaction& rx : net.reactions) b += reaction_diffusion(rx, convention);
  return b;
}

double choose_x_max(const Polynomial& drift, const Polynomial& diffusion, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::validation, "grid step h must be positive");
  double start = 0.0;
  const auto roots = real_roots(drift, 0.0, std::max(1.0, root_bound(drift)));
  if (!roots.empty() && roots.back() > 0.0) {
    start = 2.0 * roots.back();
  } else if (drift.coeff(1) != 0.0 && drift.coeff(0) != 0.0) {
    start = 10.0 * std::fabs(drift.coeff(0) / drift.coeff(1));
  }
  double x_max = std::max(start, 100.0 * h);
  for (int attempt = 0; attempt < 48; ++attempt) {
    const std::size_t n = grid_points(x_max, h);
    if (tail_log_ratio(drift, diffusion, h, n) < kTailRatioLog) return static_cast<double>(n) * h;
    x_max *= 2.0;
  }
  throw Error(ErrorKind::tail_mass, "density tail does not decay below 1e-12 of its maximum");
}

DensityGrid stationary_density(const Polynomial& drift, const Polynomial& diffusion,
                               const GridSpec& grid) {
  if (!(grid.h > 0.0)) throw Error(ErrorKind::validation, "grid step h must be positive");
  const double h = grid.h;
  const double requested = grid.x_max ? *grid.x_max : choose_x_max(drift, diffusion, h);
  const std::size_t n = grid_points(requested, h);

  DensityGrid out;
  out.h = h;
  out.x_max = static_cast<double>(n) * h;
  out.log_values.resize(n + 1);
  double phi = 0.0;
  double f_prev = ratio_at(drift, diffusion, 0.0);
  out.log_values[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double f = ratio_at(drift, diffusion, out.x(j));
    phi += 0.5 * h * (f_prev + f);
    out.log_values[j] = -phi;
    f_prev = f;
  }

  const double top = *std::max_element(out.log_values.begin(), out.log_values.end());
  double z = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    z += trapezoid_weight(j, n + 1) * std::exp(out.log_values[j] - top);
  }
  const double log_z = top + std::log(z * h);
  out.log_norm_const = -log_z;
  out.norm_const = std::exp(-log_z);
  out.values.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) out.values[j] = std::exp(out.log_values[j] - log_z);
  return out;
}

DensityGrid stationary_density(const ReactionNetwork& net, double k, const GridSpec& grid,
                               Convention convention) {
  net.check_k(k);
  return stationary_density(build_drift(net, convention).at(k), build_diffusion(net, convention).at(k),
                            grid);
}

PeakStructure find_extrema(const Polynomial& drift, double x_max, double h) {
  PeakStructure ps;
  const Polynomial slope = drift.derivative();
  const double a0 = drift(0.0);
  if (a0 > 0.0) {
    // Density decreasing at the reflecting boundary.
    ps.peaks.push_back(0.0);
    ps.boundary_peak = true;
  }
  for (double root : scan_roots(drift, 0.0, x_max, h, kRootTol)) {
    if (root >= x_max) continue;
    const double d = slope(root);
    if (std::fabs(d) < kDegenerateSlope) {
      throw Error(ErrorKind::degenerate_root,
                  "drift touches zero tangentially near x = " + std::to_string(root));
    }
    if (d > 0.0) {
      ps.peaks.push_back(root);
      if (root == 0.0) ps.boundary_peak = true;
    } else if (root > 0.0) {
      ps.valleys.push_back(root);
    }
  }
  if (ps.peaks.empty()) {
    throw Error(ErrorKind::no_peaks, "stationary density has no peak on [0, x_max)");
  }
  // Peaks and valleys must alternate p, v, p, ..., p.
  if (ps.valleys.size() + 1 != ps.peaks.size()) {
    throw Error(ErrorKind::structure, "peaks and valleys do not interleave on [0, x_max); "
                                      "increase x_max");
  }
  for (std::size_t i = 0; i < ps.valleys.size(); ++i) {
    if (!(ps.peaks[i] < ps.valleys[i] && ps.valleys[i] < ps.peaks[i + 1])) {
      throw Error(ErrorKind::structure, "peaks and valleys do not interleave");
    }
  }
  ps.modality = static_cast<int>(ps.peaks.size());
  ps.regions = regions(ps, x_max);
  return ps;
}

PeakStructure find_extrema(const ReactionNetwork& net, double k, Convention convention,
                           const GridSpec& grid) {
  net.check_k(k);
  const Polynomial a = build_drift(net, convention).at(k);
  const Polynomial b = build_diffusion(net, convention).at(k);
  const double x_max = grid.x_max ? *grid.x_max : choose_x_max(a, b, grid.h);
  return find_extrema(a, x_max, grid.h);
}

std::vector<Interval> regions(const PeakStructure& ps, double x_max) {
  std::vector<Interval> out;
  double lo = 0.0;
  for (double v : ps.valleys) {
    out.push_back({lo, v});
    lo = v;
  }
  out.push_back({lo, x_max});
  return out;
}

StationaryAnalysis analyze_at(const ReactionNetwork& net, double k, Convention convention,
                              const GridSpec& grid) {
  net.check_k(k);
  StationaryAnalysis out;
  out.k = k;
  out.convention = convention;
  out.drift = build_drift(net, convention).at(k);
  out.diffusion = build_diffusion(net, convention).at(k);
  out.density = stationary_density(out.drift, out.diffusion, grid);
  out.structure = find_extrema(out.drift, out.density.x_max, grid.h);
  return out;
}

double common_x_max(const ReactionNetwork& net, const std::vector<double>& ks, Convention convention,
                    double h) {
  const KPolynomial a = build_drift(net, convention);
  const KPolynomial b = build_diffusion(net, convention);
  double x_max = 0.0;
  for (double k : ks) {
    net.check_k(k);
    x_max = std::max(x_max, choose_x_max(a.at(k), b.at(k), h));
  }
  return x_max;
}

}  // namespace peaksharp
