#include "popwave/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "popwave/error.hpp"

namespace popwave {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double c : coeffs_) require_finite(c, "polynomial coefficient");
}

std::size_t Polynomial::degree() const noexcept {
  for (std::size_t n = coeffs_.size(); n-- > 0;) {
    if (coeffs_[n] != 0.0) return n;
  }
  return 0;
}

bool Polynomial::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double Polynomial::operator()(double rho) const {
  require_finite(rho, "polynomial argument");
  double acc = 0.0;
  for (std::size_t n = coeffs_.size(); n-- > 0;) acc = acc * rho + coeffs_[n];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() < 2) return Polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t n = 1; n < coeffs_.size(); ++n) d[n - 1] = static_cast<double>(n) * coeffs_[n];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> p(coeffs_.size() + 1, 0.0);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) p[n + 1] = coeffs_[n] / static_cast<double>(n + 1);
  return Polynomial(std::move(p));
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> s(coeffs_);
  for (double& c : s) c *= factor;
  return Polynomial(std::move(s));
}

namespace {

double bisect_and_polish(const Polynomial& p, const Polynomial& dp, double lo, double hi,
                         double flo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < 4; ++k) {
    const double fx = p(x);
    const double dfx = dp(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (next < lo || next > hi || std::abs(p(next)) >= std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<double> real_roots(const Polynomial& poly, double lo, double hi, double tol,
                               std::size_t cells) {
  require_finite(lo, "root interval lower bound");
  require_finite(hi, "root interval upper bound");
  if (!(lo < hi)) fail(ErrorKind::domain, "real_roots requires lo < hi");
  if (!(tol > 0.0)) fail(ErrorKind::domain, "real_roots requires tol > 0");
  if (cells == 0) fail(ErrorKind::domain, "real_roots requires at least one scan cell");
  if (poly.is_zero()) {
    fail(ErrorKind::degenerate_input, "real_roots: identically zero polynomial");
  }

  const Polynomial dp = poly.derivative();
  const double h = (hi - lo) / static_cast<double>(cells);
  std::vector<double> roots;
  double x0 = lo;
  double f0 = poly(x0);
  if (f0 == 0.0) roots.push_back(x0);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x1 = (i == cells) ? hi : lo + static_cast<double>(i) * h;
    const double f1 = poly(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
      roots.push_back(bisect_and_polish(poly, dp, x0, x1, f0, tol));
    }
    x0 = x1;
    f0 = f1;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [tol](double a, double b) { return std::abs(a - b) <= tol; }),
              roots.end());
  return roots;
}

Polynomial holling2_taylor(double a, double h, std::size_t order) {
  require_finite(a, "Holling attack rate a");
  require_finite(h, "Holling handling time h");
  if (order < 1) fail(ErrorKind::domain, "holling2_taylor requires order >= 1");
  std::vector<double> c(order + 1, 0.0);
  double term = a;
  for (std::size_t n = 1; n <= order; ++n) {
    c[n] = term;
    term *= -a * h;
  }
  return Polynomial(std::move(c));
}

MultiPolynomial::MultiPolynomial(std::size_t populations, std::vector<MonomialTerm> terms)
    : populations_(populations), terms_(std::move(terms)) {
  if (populations_ == 0) fail(ErrorKind::domain, "population count must be positive");
  for (const auto& t : terms_) {
    if (t.exponents.size() != populations_) {
      fail(ErrorKind::domain, "monomial exponent tuple has wrong length");
    }
    if (t.component >= populations_) {
      fail(ErrorKind::domain, "monomial targets a nonexistent population");
    }
    require_finite(t.coefficient, "monomial coefficient");
  }
}

MultiPolynomial MultiPolynomial::from_scalar(const Polynomial& poly) {
  std::vector<MonomialTerm> terms;
  const auto c = poly.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] != 0.0) terms.push_back({{static_cast<unsigned>(n)}, 0, c[n]});
  }
  return MultiPolynomial(1, std::move(terms));
}

void MultiPolynomial::evaluate(std::span<const double> rho, std::span<double> out) const {
  if (rho.size() != populations_ || out.size() != populations_) {
    fail(ErrorKind::domain, "MultiPolynomial::evaluate: size mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) {
    double m = t.coefficient;
    for (std::size_t k = 0; k < populations_; ++k) {
      for (unsigned e = 0; e < t.exponents[k]; ++e) m *= rho[k];
    }
    out[t.component] += m;
  }
}

std::vector<double> MultiPolynomial::operator()(std::span<const double> rho) const {
  std::vector<double> out(populations_);
  evaluate(rho, out);
  return out;
}

}  // namespace popwave
