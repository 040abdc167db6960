#pragma once

#include <utility>
#include <vector>

namespace peaksharp {

/// Dense real polynomial, coefficients in ascending powers of x.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double coeff(int power) const;

  double operator()(double x) const;
  Polynomial derivative() const;

  Polynomial& operator+=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(double s, Polynomial p);

  bool operator==(const Polynomial&) const = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

/// Monic-free product (x - r1)(x - r2)... scaled by `lead`.
Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0);

/// Roots located by sampling at lo, lo+step, ... and bisecting every sign change
/// (or exact zero sample) to absolute tolerance `tol`. Results are ascending.
std::vector<double> scan_roots(const Polynomial& p, double lo, double hi, double step,
                               double tol = 1e-9);

/// All real roots in [lo, hi] via recursive isolation between the critical points
/// of p. Independent of any sampling step; even-multiplicity roots are reported
/// once when p touches zero to within the bisection tolerance.
std::vector<double> real_roots(const Polynomial& p, double lo, double hi, double tol = 1e-12);

/// Upper bound on the modulus of every root (Cauchy).
double root_bound(const Polynomial& p);

/// Polynomial in x whose coefficients are affine in K: coefficient of x^j is
/// c0_j + c1_j * K. Trailing all-zero pairs are trimmed.
class KPolynomial {
 public:
  using Coeff = std::pair<double, double>;

  KPolynomial() = default;
  explicit KPolynomial(std::vector<Coeff> coeffs);

  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Specialization at a fixed K.
  Polynomial at(double k) const;
  /// K-independent part (c0 coefficients).
  Polynomial base_part() const;
  /// d/dK of the polynomial (c1 coefficients).
  Polynomial k_part() const;
  double operator()(double x, double k) const { return at(k)(x); }

  KPolynomial& operator+=(const KPolynomial& other);
  bool operator==(const KPolynomial&) const = default;

 private:
  void trim();
  std::vector<Coeff> coeffs_;
};

}  // namespace peaksharp
