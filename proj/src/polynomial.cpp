#include "peaksharp/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace peaksharp {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(power)];
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = static_cast<double>(j) * coeffs_[j];
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t j = 0; j < other.coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
  trim();
  return *this;
}

Polynomial operator*(double s, Polynomial p) {
  for (double& c : p.coeffs_) c *= s;
  p.trim();
  return p;
}

Polynomial from_roots(const std::vector<double>& roots, double lead) {
  std::vector<double> c{lead};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= r * c[j];
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

namespace {

double bisect(const Polynomial& p, double a, double b, double fa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = p(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> scan_roots(const Polynomial& p, double lo, double hi, double step, double tol) {
  std::vector<double> roots;
  if (p.is_zero() || !(hi > lo) || !(step > 0.0)) return roots;
  const auto n = static_cast<long long>(std::ceil((hi - lo) / step - 1e-12));
  auto x_at = [&](long long j) { return j == n ? hi : lo + static_cast<double>(j) * step; };
  double x_prev = lo;
  double f_prev = p(lo);
  if (f_prev == 0.0) roots.push_back(lo);
  for (long long j = 1; j <= n; ++j) {
    const double x = x_at(j);
    const double f = p(x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      roots.push_back(bisect(p, x_prev, x, f_prev, tol));
    }
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

double root_bound(const Polynomial& p) {
  if (p.degree() < 1) return 0.0;
  const double lead = std::fabs(p.coeffs().back());
  double m = 0.0;
  for (int j = 0; j < p.degree(); ++j) m = std::max(m, std::fabs(p.coeff(j)) / lead);
  return 1.0 + m;
}

std::vector<double> real_roots(const Polynomial& p, double lo, double hi, double tol) {
  if (p.is_zero() || p.degree() == 0 || !(hi >= lo)) return {};
  if (p.degree() == 1) {
    const double r = -p.coeff(0) / p.coeff(1);
    if (r >= lo && r <= hi) return {r};
    return {};
  }
  // p is monotone between consecutive critical points.
  std::vector<double> knots{lo};
  for (double c : real_roots(p.derivative(), lo, hi, tol)) {
    if (c > knots.back()) knots.push_back(c);
  }
  if (hi > knots.back()) knots.push_back(hi);

  std::vector<double> roots;
  auto push = [&](double r) {
    if (roots.empty() || r - roots.back() > 10.0 * tol * std::max(1.0, std::fabs(r))) {
      roots.push_back(r);
    }
  };
  const double scale = [&] {
    double s = 0.0;
    for (double x : knots) s = std::max(s, std::fabs(x));
    return std::max(1.0, s);
  }();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const double fa = p(a);
    const double fb = p(b);
    if (fa == 0.0) push(a);
    if (fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      push(bisect(p, a, b, fa, tol * scale));
    }
    if (fb == 0.0) push(b);
  }
  // A critical point where p touches zero is an even-multiplicity root.
  const Polynomial dp = p.derivative();
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const double x = knots[i];
    double mag = 0.0;
    for (int j = 0; j <= p.degree(); ++j) mag += std::fabs(p.coeff(j)) * std::pow(std::fabs(x), j);
    if (std::fabs(p(x)) <= 1e-12 * mag && std::fabs(dp(x)) <= 1e-9 * mag) {
      push(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) { return std::fabs(a - b) <= 10.0 * tol * scale; }),
              roots.end());
  return roots;
}

KPolynomial::KPolynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void KPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().first == 0.0 && coeffs_.back().second == 0.0) {
    coeffs_.pop_back();
  }
}

Polynomial KPolynomial::at(double k) const {
  std::vector<double> c(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] = coeffs_[j].first + coeffs_[j].second * k;
  return Polynomial(std::move(c));
}

Polynomial KPolynomial::base_part() const {
  std::vector<double> c(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] = coeffs_[j].first;
  return Polynomial(std::move(c));
}

Polynomial KPolynomial::k_part() const {
  std::vector<double> c(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] = coeffs_[j].second;
  return Polynomial(std::move(c));
}

KPolynomial& KPolynomial::operator+=(const KPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), {0.0, 0.0});
  for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
    coeffs_[j].first += other.coeffs_[j].first;
    coeffs_[j].second += other.coeffs_[j].second;
  }
  trim();
  return *this;
}

}  // namespace peaksharp
