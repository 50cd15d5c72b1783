#include "popwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "popwave/error.hpp"

namespace popwave {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  std::size_t evaluations = 0;
  double error = 0.0;
  bool converged = true;

  double eval(double x) {
    ++evaluations;
    const double y = f(x);
    if (!std::isfinite(y)) {
      fail(ErrorKind::divergence, "integrand is not finite at x = " + std::to_string(x));
    }
    return y;
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= max_depth || m <= a || b <= m) {
      if (std::abs(delta) > 15.0 * tol) converged = false;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options) {
  require_finite(a, "lower limit");
  require_finite(b, "upper limit");
  if (!(options.rtol > 0.0) && !(options.atol > 0.0)) {
    fail(ErrorKind::configuration, "quadrature needs a positive rtol or atol");
  }
  if (options.panels < 1) fail(ErrorKind::configuration, "quadrature needs at least one panel");
  if (a == b) return {};

  SimpsonState st{f, options.max_depth};
  const int n = options.panels;
  const double h = (b - a) / n;
  std::vector<double> xs(2 * n + 1), ys(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) {
    xs[i] = i == 2 * n ? b : a + 0.5 * h * i;
    ys[i] = st.eval(xs[i]);
  }
  std::vector<double> coarse(n);
  double estimate = 0.0;
  for (int p = 0; p < n; ++p) {
    coarse[p] = (xs[2 * p + 2] - xs[2 * p]) / 6.0 * (ys[2 * p] + 4.0 * ys[2 * p + 1] + ys[2 * p + 2]);
    estimate += coarse[p];
  }
  // Scale by the integral of |f| when the signed estimate cancels.
  double abs_estimate = 0.0;
  for (int p = 0; p < n; ++p) {
    abs_estimate += std::abs(xs[2 * p + 2] - xs[2 * p]) / 6.0 *
                    (std::abs(ys[2 * p]) + 4.0 * std::abs(ys[2 * p + 1]) + std::abs(ys[2 * p + 2]));
  }
  const double tol =
      std::max(options.atol, options.rtol * std::max(std::abs(estimate), 1e-3 * abs_estimate)) / n;

  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    total += st.recurse(xs[2 * p], xs[2 * p + 2], ys[2 * p], ys[2 * p + 1], ys[2 * p + 2],
                        coarse[p], tol, 0);
  }
  return {total, st.error, st.evaluations, st.converged};
}

QuadratureResult integrate_log_tail(const std::function<double(double)>& log_f, double a,
                                    const TailOptions& options) {
  require_finite(a, "lower limit");
  if (!(options.initial_step > 0.0)) fail(ErrorKind::configuration, "initial_step must be positive");

  // March outwards with a geometrically growing step until log f has dropped far enough
  // below its running peak while still decreasing.
  double x = a, lf = log_f(a);
  if (std::isnan(lf)) fail(ErrorKind::divergence, "log integrand is NaN at the lower limit");
  double peak = lf, step = options.initial_step;
  for (;;) {
    const double nx = x + step;
    const double nlf = log_f(nx);
    if (std::isnan(nlf) || nlf == HUGE_VAL) {
      fail(ErrorKind::divergence, "log integrand not finite at x = " + std::to_string(nx));
    }
    peak = std::max(peak, nlf);
    const bool decreasing = nlf < lf;
    x = nx;
    lf = nlf;
    if (decreasing && lf < peak - options.log_drop) break;
    if (std::abs(x) > options.max_extent) {
      fail(ErrorKind::divergence,
           "integrand does not decay: no truncation point below " + std::to_string(options.max_extent));
    }
    step *= 1.05;
  }

  const auto scaled = [&](double s) { return std::exp(log_f(s) - peak); };
  QuadratureResult total{};
  auto accumulate = [&](double lo, double hi) {
    const QuadratureResult piece = adaptive_simpson(scaled, lo, hi, options.simpson);
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += piece.evaluations;
    total.converged = total.converged && piece.converged;
    return piece.value;
  };

  double upper = x;
  accumulate(a, upper);
  // Doubling: the added piece must be negligible relative to the total.
  for (int rounds = 0;; ++rounds) {
    const double next = a + 2.0 * (upper - a);
    const double added = accumulate(upper, next);
    upper = next;
    if (std::abs(added) <= options.stability_rtol * std::abs(total.value)) break;
    if (rounds > 60 || std::abs(upper) > options.max_extent) {
      fail(ErrorKind::divergence, "tail integral does not stabilise under doubling");
    }
  }

  const double scale = std::exp(peak);
  total.value *= scale;
  total.error *= scale;
  if (!std::isfinite(total.value)) fail(ErrorKind::divergence, "tail integral overflows");
  return total;
}

GaussLegendre::GaussLegendre(std::size_t n) : nodes(n), weights(n) {
  if (n == 0) fail(ErrorKind::domain, "Gauss-Legendre needs at least one node");
  // Newton on P_n from the Chebyshev-like initial guesses; roots are symmetric.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace popwave
