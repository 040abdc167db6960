#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "peaksharp/cfpe.hpp"
#include "peaksharp/error.hpp"
#include "support.hpp"

using namespace peaksharp;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::range;
}

std::size_t argmax(const DensityGrid& d) {
  return static_cast<std::size_t>(std::max_element(d.values.begin(), d.values.end()) - d.values.begin());
}

std::vector<double> local_maxima(const DensityGrid& d) {
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < d.size(); ++j) {
    if (d.values[j] > d.values[j - 1] && d.values[j] >= d.values[j + 1]) out.push_back(d.x(j));
  }
  return out;
}

}  // namespace

TEST_CASE("gene drift and diffusion") {
  const auto g = testing_support::gene();
  for (auto conv : {Convention::exact, Convention::continuous}) {
    const auto a = build_drift(g, conv);
    CHECK(a == KPolynomial({{-149.8, 0.0}, {0.4, 0.0}}));
    const auto b = build_diffusion(g, conv);
    CHECK(b.coeffs()[0].first == doctest::Approx(225.0));
    CHECK(b.coeffs()[0].second == doctest::Approx(-3.0));
    CHECK(b.coeffs()[1].first == doctest::Approx(0.2));
    CHECK(b.coeffs()[1].second == 0.0);
  }
}

TEST_CASE("Schlogl drift and diffusion, continuous convention") {
  const auto a = build_drift(testing_support::schlogl());
  REQUIRE(a.degree() == 3);
  CHECK(a.coeffs()[3].first == doctest::Approx(1e-4 / 6));
  CHECK(a.coeffs()[2].first == doctest::Approx(1e-4 / 4 - 0.03 / 2));
  CHECK(a.coeffs()[1].first == doctest::Approx(0.03 / 2 + 3.5));
  CHECK(a.coeffs()[0].first == doctest::Approx(-220 + 3.5 / 2));
  CHECK(a.k_part().is_zero());

  const auto b = build_diffusion(testing_support::schlogl());
  CHECK(b.base_part().coeff(3) == doctest::Approx(1e-4 / 12));
  CHECK(b.base_part().coeff(2) == doctest::Approx(0.03 / 4));
  CHECK(b.base_part().coeff(1) == doctest::Approx(3.5 / 2));
  CHECK(b.base_part().coeff(0) == doctest::Approx(110));
  CHECK(b.k_part() == Polynomial({0.5, 1.0}));
}

TEST_CASE("drift is additive over reactions") {
  const auto s = testing_support::schlogl();
  KPolynomial sum;
  for (const auto& r : s.reactions) sum += reaction_drift(r, Convention::continuous);
  CHECK(sum == build_drift(s));
}

TEST_CASE("all-zero rates give zero polynomials") {
  ReactionNetwork net;
  net.reactions = {{0, 1, {0, 1}}, {1, -1, {0, 1}}};
  net.k_range = {0, 1};
  const auto a = build_drift(net);
  CHECK(a.at(0).is_zero());
  CHECK(a.at(1) == Polynomial({-0.5, 1.0}));
  CHECK(build_diffusion(net).at(0).is_zero());
}

TEST_CASE("gene density: peak and normalization") {
  const auto d = stationary_density(testing_support::gene(), 0.0, GridSpec{0.1, {}});
  CHECK(std::fabs(d.x(argmax(d)) - 374.5) <= 0.1);
  CHECK(std::fabs(d.mass() - 1.0) < 1e-6);
  CHECK(d.norm_const > 0);
  CHECK(d.values.back() < 1e-12 * d.values[argmax(d)]);
}

TEST_CASE("Schlogl density is bimodal at the drift roots") {
  const auto d = stationary_density(testing_support::schlogl(), 0.0, GridSpec{0.1, {}});
  const auto maxima = local_maxima(d);
  REQUIRE(maxima.size() == 2);
  CHECK(std::fabs(maxima[0] - 99.8) <= 0.1 + 0.04);
  CHECK(std::fabs(maxima[1] - 567.6) <= 0.1 + 0.04);
}

TEST_CASE("normalization holds across grid steps") {
  for (const auto& net : {testing_support::gene(), testing_support::schlogl()}) {
    for (double h : {0.01, 0.05, 0.1, 0.25, 0.5}) {
      const auto d = stationary_density(net, net.k_range.hi, GridSpec{h, {}});
      CHECK(std::fabs(d.mass() - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("Laplace approximation of the birth-death std") {
  const auto net = testing_support::birth_death(100, 1);
  const auto d = stationary_density(net, 0.0, GridSpec{0.05, {}});
  const auto [mean, sd] = d.moments_in(Interval{0, d.x_max + 1});
  const auto a = build_drift(net).at(0);
  const auto b = build_diffusion(net).at(0);
  const double xp = 99.5;
  CHECK(std::fabs(a(xp)) < 1e-12);
  const double laplace = std::sqrt(b(xp) / a.derivative()(xp));
  CHECK(sd == doctest::Approx(laplace).epsilon(0.02));
  CHECK(mean == doctest::Approx(100).epsilon(0.01));
}

TEST_CASE("log-density gradient converges at second order") {
  for (const auto& net : {testing_support::gene(), testing_support::schlogl()}) {
    const auto a = build_drift(net).at(0);
    const auto b = build_diffusion(net).at(0);
    const double x_max = choose_x_max(a, b, 0.1);
    double err[2];
    int idx = 0;
    for (double h : {0.1, 0.05}) {
      const auto d = stationary_density(a, b, GridSpec{h, x_max});
      double e = 0.0;
      for (std::size_t j = 1; j + 1 < d.size(); ++j) {
        const double fd = (d.log_values[j + 1] - d.log_values[j - 1]) / (2 * h);
        e = std::max(e, std::fabs(fd + a(d.x(j)) / b(d.x(j))));
      }
      err[idx++] = e;
    }
    CHECK(err[0] / err[1] > 3.5);
    CHECK(err[0] / err[1] < 4.5);
  }
}

TEST_CASE("find_extrema on the reference networks is K-invariant") {
  const auto g = testing_support::gene();
  for (double k : {0.0, 10.0, 25.0, 50.0}) {
    const auto ps = find_extrema(g, k);
    REQUIRE(ps.peaks.size() == 1);
    CHECK(std::fabs(ps.peaks[0] - 374.5) < 1e-9);
    CHECK(ps.valleys.empty());
    CHECK(ps.modality == 1);
    CHECK_FALSE(ps.boundary_peak);
  }
  const auto s = testing_support::schlogl();
  const auto base = find_extrema(s, 0.0);
  for (double k : {0.0, 5.0, 10.0}) {
    const auto ps = find_extrema(s, k);
    REQUIRE(ps.modality == 2);
    CHECK(std::fabs(ps.peaks[0] - 99.8) < 0.2);
    CHECK(std::fabs(ps.peaks[1] - 567.6) < 0.2);
    CHECK(std::fabs(ps.valleys[0] - 231.1) < 0.2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(ps.peaks[i] - base.peaks[i]) < 1e-9);
    CHECK(std::fabs(ps.valleys[0] - base.valleys[0]) < 1e-9);
    REQUIRE(ps.regions.size() == 2);
    CHECK(ps.regions[0].lo == 0.0);
    CHECK(ps.regions[0].hi == ps.valleys[0]);
  }
}

TEST_CASE("extrema agree with density maxima within one grid step") {
  const auto s = testing_support::schlogl();
  const auto an = analyze_at(s, 5.0, Convention::continuous, GridSpec{0.1, {}});
  const auto maxima = local_maxima(an.density);
  REQUIRE(maxima.size() == an.structure.peaks.size());
  for (std::size_t i = 0; i < maxima.size(); ++i) CHECK(std::fabs(maxima[i] - an.structure.peaks[i]) <= 0.1);
}

TEST_CASE("trimodal synthetic drift") {
  const auto a = from_roots({10, 20, 30, 40, 50});
  const auto ps = find_extrema(a, 100, 0.1);
  CHECK(ps.peaks == std::vector<double>{10, 30, 50});
  REQUIRE(ps.valleys.size() == 2);
  CHECK(std::fabs(ps.valleys[0] - 20) < 1e-9);
  CHECK(std::fabs(ps.valleys[1] - 40) < 1e-9);
  REQUIRE(ps.regions.size() == 3);
  CHECK(ps.regions[0].hi == ps.valleys[0]);
  CHECK(ps.regions[1] == Interval{ps.valleys[0], ps.valleys[1]});
  CHECK(ps.regions[2].hi == 100);
  CHECK(ps.modality == 3);
}

TEST_CASE("toy drifts") {
  const auto lin = find_extrema(Polynomial({-5, 1}), 20, 0.1);
  CHECK(lin.peaks == std::vector<double>{5});
  CHECK(regions(lin, 20).size() == 1);

  const auto boundary = find_extrema(Polynomial({2, 1}), 20, 0.1);
  CHECK(boundary.peaks == std::vector<double>{0});
  CHECK(boundary.boundary_peak);

  CHECK(kind_of([] { find_extrema(Polynomial({-2, -1}), 20, 0.1); }) == ErrorKind::no_peaks);
  CHECK(kind_of([] { find_extrema(from_roots({5, 5}), 20, 0.1); }) == ErrorKind::degenerate_root);
}

TEST_CASE("non-positive diffusion is rejected") {
  // B(x) = 1 - x/10 vanishes inside the grid.
  CHECK(kind_of([] { stationary_density(Polynomial({-5, 1}), Polynomial({1, -0.1}), GridSpec{0.1, 30.0}); }) ==
        ErrorKind::diffusion_nonpositive);
  // B(0) = 0 for a network without sources at K = 0.
  ReactionNetwork net;
  net.reactions = {{0, 1, {0, 1}}, {1, -1, {1, 0}}};
  net.k_range = {0, 1};
  CHECK(kind_of([&] { stationary_density(net, 0.0); }) == ErrorKind::diffusion_nonpositive);
}

TEST_CASE("density lookups") {
  const auto d = stationary_density(testing_support::gene(), 0.0);
  CHECK(d.density_at(-1) == 0.0);
  CHECK(d.density_at(d.x_max + 1) == 0.0);
  CHECK(d.density_at(d.x(100)) == doctest::Approx(d.values[100]));
  CHECK(d.mass_in(Interval{0, d.x_max + 1}) == doctest::Approx(d.mass()).epsilon(1e-9));
}
