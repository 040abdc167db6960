#include "peaksharp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peaksharp/error.hpp"

namespace peaksharp {

namespace {

// Square matrix with nonzeros only on offsets j - i in [-below, above].
class BandMatrix {
 public:
  BandMatrix(std::size_t n, int below, int above)
      : n_(n), below_(below), above_(above), width_(below + above + 1),
        data_(n * static_cast<std::size_t>(width_), 0.0) {}

  double& at(std::size_t i, std::size_t j) {
    return data_[i * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(static_cast<long long>(j) - static_cast<long long>(i) + below_)];
  }
  int below() const { return below_; }
  int above() const { return above_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  int below_;
  int above_;
  int width_;
  std::vector<double> data_;
};

struct Edge {
  std::int64_t to;
  double rate;
};

std::vector<std::vector<Edge>> truncated_generator(const ReactionNetwork& net, double k, std::int64_t n_max) {
  std::vector<double> rates;
  for (std::size_t i = 0; i < net.reactions.size(); ++i) rates.push_back(net.rate(i, k));
  std::vector<std::vector<Edge>> out(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t x = 0; x <= n_max; ++x) {
    for (std::size_t i = 0; i < net.reactions.size(); ++i) {
      const Reaction& rx = net.reactions[i];
      const std::int64_t y = x + rx.r;
      if (y < 0 || y > n_max) continue;
      const double a = propensity(rx, rates[i], x, Convention::exact);
      if (a > 0.0) out[static_cast<std::size_t>(x)].push_back({y, a});
    }
  }
  return out;
}

// Tarjan's strongly connected components, iterative. Returns component id per node.
std::vector<int> strongly_connected(const std::vector<std::vector<Edge>>& g, int& n_components) {
  const std::size_t n = g.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge
  int counter = 0;
  n_components = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < g[v].size()) {
        const auto w = static_cast<std::size_t>(g[v][e].to);
        ++e;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = n_components;
        } while (w != done);
        ++n_components;
      }
    }
  }
  return comp;
}

}  // namespace

StationaryVector cme_stationary(const ReactionNetwork& net, double k, std::int64_t x_max_trunc) {
  require_valid(net);
  net.check_k(k);
  if (x_max_trunc < 0) throw Error(ErrorKind::validation, "truncation must be nonnegative");
  const auto g = truncated_generator(net, k, x_max_trunc);
  const std::size_t n = g.size();

  int n_comp = 0;
  const std::vector<int> comp = strongly_connected(g, n_comp);
  std::vector<char> leaks(static_cast<std::size_t>(n_comp), 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (const Edge& e : g[x]) {
      if (comp[static_cast<std::size_t>(e.to)] != comp[x]) leaks[static_cast<std::size_t>(comp[x])] = 1;
    }
  }
  const auto closed = std::count(leaks.begin(), leaks.end(), 0);
  if (closed != 1) {
    throw Error(ErrorKind::singular_system,
                "truncated chain has " + std::to_string(closed) + " closed classes");
  }
  const int closed_id = static_cast<int>(std::find(leaks.begin(), leaks.end(), 0) - leaks.begin());

  // States of the closed class in ascending order; the map keeps the band.
  std::vector<std::size_t> states;
  std::vector<long long> local(n, -1);
  for (std::size_t x = 0; x < n; ++x) {
    if (comp[x] == closed_id) {
      local[x] = static_cast<long long>(states.size());
      states.push_back(x);
    }
  }
  int above = 0, below = 0;
  for (const Reaction& rx : net.reactions) {
    above = std::max(above, rx.r);
    below = std::max(below, -rx.r);
  }
  const std::size_t m = states.size();
  BandMatrix q(m, below, above);
  for (std::size_t a = 0; a < m; ++a) {
    for (const Edge& e : g[states[a]]) {
      const long long b = local[static_cast<std::size_t>(e.to)];
      if (b >= 0) q.at(a, static_cast<std::size_t>(b)) += e.rate;
    }
  }

  // GTH reduction: eliminate states from the top down.
  for (std::size_t s = m; s-- > 1;) {
    const std::size_t j_lo = s >= static_cast<std::size_t>(below) ? s - below : 0;
    const std::size_t i_lo = s >= static_cast<std::size_t>(above) ? s - above : 0;
    double out = 0.0;
    for (std::size_t j = j_lo; j < s; ++j) out += q.at(s, j);
    if (!(out > 0.0)) {
      throw Error(ErrorKind::singular_system, "state reduction hit a state with no downward exit");
    }
    for (std::size_t i = i_lo; i < s; ++i) q.at(i, s) /= out;
    for (std::size_t i = i_lo; i < s; ++i) {
      const double via = q.at(i, s);
      if (via == 0.0) continue;
      for (std::size_t j = j_lo; j < s; ++j) {
        if (j != i) q.at(i, j) += via * q.at(s, j);
      }
    }
  }
  std::vector<double> p_local(m, 0.0);
  p_local[0] = 1.0;
  for (std::size_t s = 1; s < m; ++s) {
    const std::size_t i_lo = s >= static_cast<std::size_t>(above) ? s - above : 0;
    double acc = 0.0;
    for (std::size_t i = i_lo; i < s; ++i) acc += p_local[i] * q.at(i, s);
    p_local[s] = acc;
  }
  const double total = std::accumulate(p_local.begin(), p_local.end(), 0.0);

  StationaryVector sv;
  sv.x_max_trunc = x_max_trunc;
  sv.probs.assign(n, 0.0);
  for (std::size_t a = 0; a < m; ++a) sv.probs[states[a]] = std::max(0.0, p_local[a] / total);
  const double norm = std::accumulate(sv.probs.begin(), sv.probs.end(), 0.0);
  for (double& p : sv.probs) p /= norm;

  std::vector<double> balance(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (const Edge& e : g[x]) {
      const double flow = sv.probs[x] * e.rate;
      balance[x] -= flow;
      balance[static_cast<std::size_t>(e.to)] += flow;
    }
  }
  for (double b : balance) sv.residual = std::max(sv.residual, std::fabs(b));
  sv.truncation_warning = sv.probs.back() > 1e-8;
  return sv;
}

PeakStructure discrete_extrema(std::span<const double> probs) {
  PeakStructure ps;
  const std::size_t n = probs.size();
  if (n == 0) return ps;
  auto at = [&](std::size_t x) { return x < n ? probs[x] : 0.0; };
  if (probs[0] > at(1)) {
    ps.peaks.push_back(0.0);
    ps.boundary_peak = true;
  }
  for (std::size_t x = 1; x < n; ++x) {
    const double left = probs[x - 1];
    const double right = at(x + 1);
    if (probs[x] > left && probs[x] > right) ps.peaks.push_back(static_cast<double>(x));
    if (probs[x] < left && probs[x] < right) ps.valleys.push_back(static_cast<double>(x));
  }
  ps.modality = static_cast<int>(ps.peaks.size());
  ps.regions = regions(ps, static_cast<double>(n));
  return ps;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double tv = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double a = x < p.size() ? p[x] : 0.0;
    const double b = x < q.size() ? q[x] : 0.0;
    tv += std::fabs(a - b);
  }
  return 0.5 * tv;
}

namespace {

double mass_in(std::span<const double> p, const Interval& region) {
  double m = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (region.contains(static_cast<double>(x))) m += p[x];
  }
  return m;
}

}  // namespace

DistributionComparison compare_distributions(std::span<const double> p, std::span<const double> q,
                                             const std::vector<Interval>& regions) {
  DistributionComparison out;
  out.tv = total_variation(p, q);
  for (const Interval& r : regions) out.regions.push_back({r, mass_in(p, r), mass_in(q, r)});
  return out;
}

std::vector<RegionStats> region_stats(std::span<const double> dist, const std::vector<Interval>& regions) {
  std::vector<RegionStats> out;
  for (const Interval& r : regions) {
    RegionStats st;
    st.region = r;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t x = 0; x < dist.size(); ++x) {
      const double xd = static_cast<double>(x);
      if (!r.contains(xd)) continue;
      st.mass += dist[x];
      s1 += dist[x] * xd;
    }
    if (st.mass > 0.0) {
      st.mean = s1 / st.mass;
      for (std::size_t x = 0; x < dist.size(); ++x) {
        const double xd = static_cast<double>(x);
        if (r.contains(xd)) s2 += dist[x] * (xd - st.mean) * (xd - st.mean);
      }
      st.stddev = std::sqrt(s2 / st.mass);
    }
    out.push_back(st);
  }
  return out;
}

std::vector<double> bin_density(const DensityGrid& density, std::int64_t x_max) {
  std::vector<double> p(static_cast<std::size_t>(std::max<std::int64_t>(0, x_max)) + 1, 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) p[x] = density.density_at(static_cast<double>(x));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (total > 0.0) {
    for (double& v : p) v /= total;
  }
  return p;
}

}  // namespace peaksharp
