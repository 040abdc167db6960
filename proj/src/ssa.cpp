#include "peaksharp/ssa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include "peaksharp/error.hpp"

namespace peaksharp {

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Cumulative propensities per state, cached for small states and shared
// read-only between worker threads.
class PropensityTable {
 public:
  static constexpr std::int64_t kCachedStates = 1 << 14;

  PropensityTable(const ReactionNetwork& net, double k) : n_(net.reactions.size()) {
    require_valid(net);
    net.check_k(k);
    rates_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      rates_.push_back(net.reactions[i].rate.at(k));
      jumps_.push_back(net.reactions[i].r);
      orders_.push_back(net.reactions[i].s);
    }
    cum_.resize(static_cast<std::size_t>(kCachedStates) * n_);
    for (std::int64_t x = 0; x < kCachedStates; ++x) fill(x, &cum_[static_cast<std::size_t>(x) * n_]);
  }

  std::size_t size() const { return n_; }
  int jump(std::size_t i) const { return jumps_[i]; }

  // Row of cumulative propensities for state x; the last entry is the total.
  const double* row(std::int64_t x, std::vector<double>& scratch) const {
    if (x < kCachedStates) return &cum_[static_cast<std::size_t>(x) * n_];
    scratch.resize(n_);
    fill(x, scratch.data());
    return scratch.data();
  }

 private:
  void fill(std::int64_t x, double* out) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      acc += rates_[i] * combinatorial_factor(orders_[i], static_cast<double>(x), Convention::exact);
      out[i] = acc;
    }
  }

  std::size_t n_;
  std::vector<double> rates_;
  std::vector<int> jumps_;
  std::vector<int> orders_;
  std::vector<double> cum_;
};

using Engine = boost::random::mt19937_64;

// Top 53 bits as a double in [0, 1).
inline double unit_draw(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

// First reaction whose cumulative propensity exceeds u; never one with zero
// propensity, even when u rounds up to the total.
std::size_t pick(const double* cum, std::size_t n, double u) {
  std::size_t i = 0;
  while (i + 1 < n && !(u < cum[i])) ++i;
  while (i > 0 && cum[i] == cum[i - 1]) --i;
  return i;
}

// Runs one cell and writes the state at each (sorted) sample time.
void run_cell(const PropensityTable& table, std::int64_t x0, const std::vector<double>& times,
              std::uint64_t seed, std::int64_t* out) {
  Engine eng(seed);
  boost::random::exponential_distribution<double> waiting(1.0);
  std::vector<double> scratch;
  const std::size_t n = table.size();
  const double horizon = times.back();
  std::size_t next_sample = 0;
  std::int64_t x = x0;
  double t = 0.0;
  while (true) {
    const double* cum = table.row(x, scratch);
    const double total = cum[n - 1];
    if (!(total > 0.0)) break;
    const double t_next = t + waiting(eng) / total;
    while (next_sample < times.size() && times[next_sample] < t_next) out[next_sample++] = x;
    if (t_next > horizon) break;
    t = t_next;
    x += table.jump(pick(cum, n, unit_draw(eng) * total));
  }
  while (next_sample < times.size()) out[next_sample++] = x;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw Error(ErrorKind::validation, "at least one sample time is required");
  if (times.front() < 0.0 || !std::is_sorted(times.begin(), times.end())) {
    throw Error(ErrorKind::validation, "sample times must be nonnegative and ascending");
  }
}

unsigned worker_count(const EnsembleOptions& options, std::int64_t n_cells) {
  unsigned t = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::int64_t>(t, std::max<std::int64_t>(1, n_cells)));
}

}  // namespace

std::int64_t simulate_end_state(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                                std::uint64_t seed) {
  if (x0 < 0) throw Error(ErrorKind::validation, "initial state must be nonnegative");
  if (t_end < 0.0) throw Error(ErrorKind::validation, "t_end must be nonnegative");
  const PropensityTable table(net, k);
  std::int64_t out = x0;
  run_cell(table, x0, {t_end}, seed, &out);
  return out;
}

Trajectory simulate_trajectory(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                               std::uint64_t seed, std::size_t max_events) {
  if (x0 < 0) throw Error(ErrorKind::validation, "initial state must be nonnegative");
  if (t_end < 0.0) throw Error(ErrorKind::validation, "t_end must be nonnegative");
  const PropensityTable table(net, k);
  Engine eng(seed);
  boost::random::exponential_distribution<double> waiting(1.0);
  std::vector<double> scratch;
  Trajectory tr;
  tr.seed = seed;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  const std::size_t n = table.size();
  std::int64_t x = x0;
  double t = 0.0;
  while (tr.times.size() <= max_events) {
    const double* cum = table.row(x, scratch);
    const double total = cum[n - 1];
    if (!(total > 0.0)) break;
    const double t_next = t + waiting(eng) / total;
    if (t_next > t_end) break;
    t = t_next;
    x += table.jump(pick(cum, n, unit_draw(eng) * total));
    tr.times.push_back(t);
    tr.states.push_back(x);
  }
  return tr;
}

std::vector<std::vector<std::int64_t>> time_series(const ReactionNetwork& net, double k, std::int64_t x0,
                                                   const std::vector<double>& sample_times,
                                                   std::int64_t n_cells, std::uint64_t base_seed,
                                                   const EnsembleOptions& options) {
  check_times(sample_times);
  if (n_cells < 1) throw Error(ErrorKind::validation, "n_cells must be at least 1");
  if (x0 < 0) throw Error(ErrorKind::validation, "initial state must be nonnegative");
  const PropensityTable table(net, k);
  std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(n_cells),
                                              std::vector<std::int64_t>(sample_times.size(), x0));
  std::atomic<std::int64_t> next{0};
  constexpr std::int64_t chunk = 16;
  auto work = [&] {
    for (std::int64_t start; (start = next.fetch_add(chunk)) < n_cells;) {
      const std::int64_t stop = std::min(n_cells, start + chunk);
      for (std::int64_t j = start; j < stop; ++j) {
        run_cell(table, x0, sample_times, split_seed(base_seed, static_cast<std::uint64_t>(j)),
                 rows[static_cast<std::size_t>(j)].data());
      }
    }
  };
  const unsigned workers = worker_count(options, n_cells);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

EnsembleHistogram histogram_from_column(const std::vector<std::vector<std::int64_t>>& samples,
                                        std::size_t column, double t, double k, std::uint64_t base_seed) {
  EnsembleHistogram h;
  h.t_end = t;
  h.k = k;
  h.base_seed = base_seed;
  h.n_cells = static_cast<std::int64_t>(samples.size());
  for (const auto& row : samples) ++h.counts[row.at(column)];
  return h;
}

EnsembleHistogram ensemble_histogram(const ReactionNetwork& net, double k, std::int64_t x0, double t_end,
                                     std::int64_t n_cells, std::uint64_t base_seed,
                                     const EnsembleOptions& options) {
  if (t_end < 0.0) throw Error(ErrorKind::validation, "t_end must be nonnegative");
  return histogram_from_column(time_series(net, k, x0, {t_end}, n_cells, base_seed, options), 0, t_end, k,
                               base_seed);
}

double EnsembleHistogram::mean() const {
  double s = 0.0;
  for (const auto& [x, c] : counts) s += static_cast<double>(x) * static_cast<double>(c);
  return n_cells ? s / static_cast<double>(n_cells) : 0.0;
}

double EnsembleHistogram::stddev() const {
  if (n_cells < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (const auto& [x, c] : counts) {
    const double d = static_cast<double>(x) - m;
    s += d * d * static_cast<double>(c);
  }
  return std::sqrt(s / static_cast<double>(n_cells - 1));
}

double EnsembleHistogram::fraction_in(const Interval& region) const {
  std::int64_t inside = 0;
  for (const auto& [x, c] : counts) {
    if (region.contains(static_cast<double>(x))) inside += c;
  }
  return n_cells ? static_cast<double>(inside) / static_cast<double>(n_cells) : 0.0;
}

std::vector<double> EnsembleHistogram::distribution(std::int64_t x_max) const {
  const std::int64_t top = counts.empty() ? x_max : std::max(x_max, counts.rbegin()->first);
  std::vector<double> p(static_cast<std::size_t>(top) + 1, 0.0);
  for (const auto& [x, c] : counts) {
    p[static_cast<std::size_t>(x)] = static_cast<double>(c) / static_cast<double>(n_cells);
  }
  return p;
}

StationarityDiagnostic stationarity_check(const EnsembleHistogram& half, const EnsembleHistogram& end) {
  StationarityDiagnostic d;
  if (half.n_cells == 0 || end.n_cells == 0) return d;
  std::map<std::int64_t, std::int64_t> pooled = half.counts;
  for (const auto& [x, c] : end.counts) pooled[x] += c;
  const double total = static_cast<double>(half.n_cells + end.n_cells);

  // Upper edges of pooled-decile bins.
  std::vector<std::int64_t> cuts;
  double running = 0.0;
  int decile = 1;
  for (const auto& [x, c] : pooled) {
    running += static_cast<double>(c);
    while (decile < 10 && running >= total * decile / 10.0) {
      if (cuts.empty() || cuts.back() != x) cuts.push_back(x);
      ++decile;
    }
  }
  const std::size_t bins = cuts.size() + 1;
  auto bin_of = [&](std::int64_t x) {
    return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
  };
  std::vector<double> p(bins, 0.0), q(bins, 0.0), pool(bins, 0.0);
  for (const auto& [x, c] : half.counts) p[bin_of(x)] += static_cast<double>(c);
  for (const auto& [x, c] : end.counts) q[bin_of(x)] += static_cast<double>(c);
  const double n1 = static_cast<double>(half.n_cells);
  const double n2 = static_cast<double>(end.n_cells);
  for (std::size_t b = 0; b < bins; ++b) {
    pool[b] = (p[b] + q[b]) / total;
    d.tv += 0.5 * std::fabs(p[b] / n1 - q[b] / n2);
    const double var = pool[b] * (1.0 - pool[b]) * (1.0 / n1 + 1.0 / n2);
    d.noise_tv += 0.5 * std::sqrt(2.0 / std::numbers::pi * var);
  }
  d.threshold = std::max(0.02, 3.0 * d.noise_tv);
  d.stationary = d.tv < d.threshold;
  return d;
}

}  // namespace peaksharp
