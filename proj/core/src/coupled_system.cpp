#include "popwave/coupled_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <exception>
#include <thread>

#include <Eigen/QR>

#include "popwave/error.hpp"

namespace popwave {

LV3Params LV3Params::symmetric(double D11) {
  require_finite(D11, "D11");
  LV3Params p;
  p.D.diagonal().setConstant(D11);
  return p;
}

void LV3Params::validate() const {
  if (!r.allFinite() || !A.allFinite() || !D.allFinite()) {
    fail(ErrorKind::domain, "LV3 parameters must be finite");
  }
}

double& CoupledUnknowns::operator[](std::size_t i) noexcept {
  double* fields[size] = {&a0, &a1, &b0, &b1, &c0, &c1, &a, &b, &c, &v};
  return *fields[i];
}

double CoupledUnknowns::operator[](std::size_t i) const noexcept {
  return to_array()[i];
}

std::array<double, 9> build_residuals(const LV3Params& params, const CoupledUnknowns& u) {
  // Offsets and slopes of rho_k = s0[k] + s1[k] Phi.
  const double s0[3] = {u.a0, u.b0, u.c0};
  const double s1[3] = {u.a1, u.b1, u.c1};
  const double sign[3] = {-1.0, 1.0, 1.0};

  std::array<double, 9> res{};
  for (int i = 0; i < 3; ++i) {
    double q2 = 0.0, q1 = 0.0, q0 = 0.0;

    // Transport: -(v delta_ik + D_ik) rho_k' with rho_k' = s1[k] (a Phi^2 + b Phi + c).
    double slope = 0.0;
    for (int k = 0; k < 3; ++k) slope += (params.D(i, k) + (i == k ? u.v : 0.0)) * s1[k];
    q2 -= slope * u.a;
    q1 -= slope * u.b;
    q0 -= slope * u.c;

    // Reaction: -r_i rho_i (1 + sum_k sign_k A_ik rho_k).
    const double ri = params.r(i);
    q1 -= ri * s1[i];
    q0 -= ri * s0[i];
    for (int k = 0; k < 3; ++k) {
      const double w = ri * sign[k] * params.A(i, k);
      q2 -= w * s1[i] * s1[k];
      q1 -= w * (s0[i] * s1[k] + s1[i] * s0[k]);
      q0 -= w * s0[i] * s0[k];
    }

    res[3 * i] = q2;
    res[3 * i + 1] = q1;
    res[3 * i + 2] = q0;
  }
  return res;
}

std::array<double, 3> CoupledKinkSolution::operator()(double xi) const {
  const double phi = kernel.phi(xi);
  return {unknowns.a0 + unknowns.a1 * phi, unknowns.b0 + unknowns.b1 * phi,
          unknowns.c0 + unknowns.c1 * phi};
}

std::array<double, 3> CoupledKinkSolution::limit_plus() const {
  const double phi = kernel.asymptote_plus();
  return {unknowns.a0 + unknowns.a1 * phi, unknowns.b0 + unknowns.b1 * phi,
          unknowns.c0 + unknowns.c1 * phi};
}

std::array<double, 3> CoupledKinkSolution::limit_minus() const {
  const double phi = kernel.asymptote_minus();
  return {unknowns.a0 + unknowns.a1 * phi, unknowns.b0 + unknowns.b1 * phi,
          unknowns.c0 + unknowns.c1 * phi};
}

CoupledKinkSolution closed_form(double a1, double b1, double c0, double b, double D11,
                                double xi0) {
  for (double x : {a1, b1, c0, b, D11, xi0}) require_finite(x, "closed-form parameter");
  const double s = a1 + b1;
  const double g = s + 4.0 * a1 * c0;
  if (s == 0.0) fail(ErrorKind::parameter, "a1 + b1 must be nonzero");
  if (g == 0.0) fail(ErrorKind::parameter, "a1 + b1 + 4 a1 c0 must be nonzero");
  if (b == 0.0) fail(ErrorKind::parameter, "Riccati b must be nonzero");

  CoupledUnknowns u;
  u.a1 = a1;
  u.b1 = b1;
  u.c0 = c0;
  u.b = b;
  u.c1 = -s;
  u.v = -(4.0 * a1 * c0 + b * D11 * a1 - a1 * b + a1 - b1 * b + b * D11 * b1 + b1) / (b * s);
  u.c = -c0 * (2.0 * a1 * c0 + s) * b / (s * g);
  u.a = -2.0 * a1 * b * s / g;
  u.a0 = -a1 * c0 / s;
  u.b0 = -b1 * c0 / s;

  // a == 0 iff a1 == 0; the kernel reports it as degenerate.
  RiccatiKernel kernel(u.a, u.b, u.c, xi0);
  return {u, kernel, LV3Params::symmetric(D11)};
}

// ---------------------------------------------------------------------------
// Newton

namespace {

double sup_norm(const std::array<double, 9>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

Eigen::Matrix<double, 9, 1> as_vector(const std::array<double, 9>& r) {
  return Eigen::Map<const Eigen::Matrix<double, 9, 1>>(r.data());
}

}  // namespace

NewtonResult newton_solve(const LV3Params& params, const CoupledUnknowns& guess,
                          const NewtonOptions& options) {
  params.validate();
  for (double x : guess.to_array()) require_finite(x, "Newton guess");
  if (!(options.tol > 0.0)) fail(ErrorKind::configuration, "Newton tol must be positive");
  if (options.max_iter < 0) fail(ErrorKind::configuration, "Newton max_iter must be >= 0");
  if (options.free.empty()) fail(ErrorKind::configuration, "Newton needs at least one free unknown");
  for (std::size_t idx : options.free) {
    if (idx >= CoupledUnknowns::size) fail(ErrorKind::configuration, "free index out of range");
  }

  const auto k = static_cast<Eigen::Index>(options.free.size());
  const double h_rel = std::sqrt(std::numeric_limits<double>::epsilon());

  CoupledUnknowns x = guess;
  std::array<double, 9> r = build_residuals(params, x);
  double norm = sup_norm(r);

  for (int iter = 0;; ++iter) {
    if (!std::isfinite(norm)) {
      throw NonConvergenceError("Newton residual became non-finite", norm, iter);
    }
    if (norm < options.tol) return {x, norm, iter};
    if (iter >= options.max_iter) {
      throw NonConvergenceError("Newton did not converge in " + std::to_string(iter) +
                                    " iterations (residual " + std::to_string(norm) + ")",
                                norm, iter);
    }

    Eigen::Matrix<double, 9, Eigen::Dynamic> J(9, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t idx = options.free[static_cast<std::size_t>(j)];
      CoupledUnknowns xp = x;
      const double h = h_rel * std::max(1.0, std::abs(x[idx]));
      xp[idx] += h;
      J.col(j) = (as_vector(build_residuals(params, xp)) - as_vector(r)) / h;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
    qr.setThreshold(options.rank_tol);
    if (qr.rank() < k) {
      fail(ErrorKind::linear_solve, "Jacobian is rank deficient (rank " +
                                        std::to_string(qr.rank()) + " of " + std::to_string(k) +
                                        ")");
    }
    const Eigen::VectorXd step = qr.solve(-as_vector(r));

    // Halve until the residual drops; accept the smallest step otherwise.
    double lambda = 1.0;
    CoupledUnknowns trial;
    std::array<double, 9> r_trial{};
    double n_trial = 0.0;
    for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
      trial = x;
      for (Eigen::Index j = 0; j < k; ++j) trial[options.free[static_cast<std::size_t>(j)]] += lambda * step(j);
      r_trial = build_residuals(params, trial);
      n_trial = sup_norm(r_trial);
      if (std::isfinite(n_trial) && n_trial < norm) break;
    }
    x = trial;
    r = r_trial;
    norm = n_trial;
  }
}

std::vector<NewtonResult> newton_multi_start(const LV3Params& params, const CoupledUnknowns& guess,
                                             const NewtonOptions& options,
                                             const MultiStartOptions& multi) {
  if (multi.starts == 0) fail(ErrorKind::configuration, "multi-start needs at least one start");
  if (!(multi.amplitude >= 0.0)) fail(ErrorKind::configuration, "perturbation amplitude must be >= 0");

  std::vector<std::optional<NewtonResult>> slots(multi.starts);
  auto run_start = [&](std::size_t s) {
    // Start 0 is the unperturbed guess; each other start has its own seeded stream.
    CoupledUnknowns g = guess;
    if (s > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(multi.seed),
                        static_cast<std::uint32_t>(multi.seed >> 32),
                        static_cast<std::uint32_t>(s)};
      std::mt19937_64 gen(seq);
      std::uniform_real_distribution<double> dist(-multi.amplitude, multi.amplitude);
      for (std::size_t i = 0; i < CoupledUnknowns::size; ++i) g[i] += dist(gen);
    }
    try {
      slots[s] = newton_solve(params, g, options);
    } catch (const Error& e) {
      if (!is_numerical(e.kind())) throw;
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(multi.threads, static_cast<unsigned>(multi.starts)));
  if (threads == 1) {
    for (std::size_t s = 0; s < multi.starts; ++s) run_start(s);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t s = t; s < multi.starts; s += threads) run_start(s);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<NewtonResult> roots;
  for (auto& slot : slots) {
    if (slot) roots.push_back(*slot);
  }
  std::sort(roots.begin(), roots.end(), [](const NewtonResult& l, const NewtonResult& r) {
    return l.unknowns.to_array() < r.unknowns.to_array();
  });
  std::vector<NewtonResult> distinct;
  for (const auto& root : roots) {
    const bool dup = std::any_of(distinct.begin(), distinct.end(), [&](const NewtonResult& d) {
      const auto x = root.unknowns.to_array(), y = d.unknowns.to_array();
      double m = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
      return m < multi.dedupe;
    });
    if (!dup) distinct.push_back(root);
  }
  return distinct;
}

std::array<double, 3> lv3_wave_reaction(const LV3Params& params, const std::array<double, 3>& rho) {
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) {
    const double inner =
        1.0 - params.A(i, 0) * rho[0] + params.A(i, 1) * rho[1] + params.A(i, 2) * rho[2];
    f[i] = params.r(i) * rho[i] * inner;
  }
  return f;
}

namespace {

MultiPolynomial lv3_field(const LV3Params& params, const std::array<double, 3>& sign) {
  params.validate();
  std::vector<MonomialTerm> terms;
  for (unsigned i = 0; i < 3; ++i) {
    std::vector<unsigned> linear(3, 0);
    linear[i] = 1;
    terms.push_back({linear, i, params.r(i)});
    for (unsigned k = 0; k < 3; ++k) {
      std::vector<unsigned> quad(3, 0);
      quad[i] += 1;
      quad[k] += 1;
      terms.push_back({quad, i, params.r(i) * sign[k] * params.A(i, k)});
    }
  }
  return MultiPolynomial(3, std::move(terms));
}

}  // namespace

MultiPolynomial lv3_wave_field(const LV3Params& params) { return lv3_field(params, {-1.0, 1.0, 1.0}); }

MultiPolynomial lv3_competition_field(const LV3Params& params) {
  return lv3_field(params, {-1.0, -1.0, -1.0});
}

}  // namespace popwave
