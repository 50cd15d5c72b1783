#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace popwave {

/// Dense univariate polynomial  sum_n alpha_n rho^n  used as a reaction term or drift.
///
/// Coefficients are stored exactly as given (trailing zeros are kept so that a
/// truncated series such as [0, a, 0] round-trips); degree() reports the index
/// of the highest nonzero coefficient and is 0 for the zero polynomial.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coefficients);
  Polynomial(std::initializer_list<double> coefficients)
      : Polynomial(std::vector<double>(coefficients)) {}

  std::span<const double> coefficients() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::size_t degree() const noexcept;
  bool is_zero() const noexcept;

  /// alpha_n, or 0 for n beyond the stored coefficients.
  double coefficient(std::size_t n) const noexcept {
    return n < coeffs_.size() ? coeffs_[n] : 0.0;
  }
  double leading() const noexcept { return coeffs_[degree()]; }

  /// Horner evaluation. Throws ErrorKind::domain for non-finite rho.
  double operator()(double rho) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  Polynomial scaled(double factor) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// Simple real roots of `poly` in [lo, hi], ascending.
///
/// The interval is scanned on a uniform grid of `cells` cells; every sign change
/// is bisected to width `tol` and then polished by Newton steps that stay inside
/// the bracket. Roots of even multiplicity (no sign change) can be missed, as can
/// pairs of simple roots closer together than one scan cell.
std::vector<double> real_roots(const Polynomial& poly, double lo, double hi,
                               double tol = 1e-12, std::size_t cells = 2048);

/// Maclaurin coefficients of the Holling type-II response a rho / (1 + a h rho)
/// up to rho^order: c_0 = 0, c_n = a (-a h)^(n-1).
Polynomial holling2_taylor(double a, double h, std::size_t order);

/// One monomial  coefficient * rho_1^e_1 ... rho_N^e_N  contributing to `component`.
struct MonomialTerm {
  std::vector<unsigned> exponents;
  std::size_t component = 0;
  double coefficient = 0.0;
};

/// Sparse multivariate polynomial vector field (one output per population).
class MultiPolynomial {
 public:
  MultiPolynomial(std::size_t populations, std::vector<MonomialTerm> terms);

  /// Single-population field from a dense polynomial.
  static MultiPolynomial from_scalar(const Polynomial& poly);

  std::size_t populations() const noexcept { return populations_; }
  std::span<const MonomialTerm> terms() const noexcept { return terms_; }

  /// Writes component values into `out` (size populations()).
  void evaluate(std::span<const double> rho, std::span<double> out) const;
  std::vector<double> operator()(std::span<const double> rho) const;

 private:
  std::size_t populations_;
  std::vector<MonomialTerm> terms_;
};

}  // namespace popwave
