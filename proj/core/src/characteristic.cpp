#include "qho/characteristic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qho/errors.hpp"
#include "qho/quadrature.hpp"

namespace qho {
namespace {

const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());

std::string near_time(const char* what, double t) {
  return std::string(what) + " (t = " + std::to_string(t) + ")";
}

}  // namespace

double CharacteristicSolution::lambda(double t) const {
  return std::exp(-lin_.eval_component(t, 4));
}

int CharacteristicSolution::maslov_index(double t) const {
  const auto it = std::lower_bound(caustics_.begin(), caustics_.end(), t);
  return static_cast<int>(it - caustics_.begin());
}

bool CharacteristicSolution::at_caustic(double t) const {
  if (std::abs(t) <= caustic_guard_) return true;  // mu0(0) = 0
  for (double tc : caustics_)
    if (std::abs(t - tc) <= caustic_guard_) return true;
  return false;
}

void CharacteristicSolution::require_clear_of_caustics(double t, const char* what) const {
  if (std::abs(t) <= caustic_guard_)
    throw caustic_error(0.0, near_time(what, t) + ": mu0 vanishes at t = 0");
  for (double tc : caustics_)
    if (std::abs(t - tc) <= caustic_guard_)
      throw caustic_error(tc, near_time(what, t) +
                                  ": mu0 vanishes at t = " + std::to_string(tc));
}

CharacteristicSolution solve_characteristic(const CoefficientSet& coeffs, double T, double tol) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_characteristic: T must be positive");
  if (T > coeffs.t_end() * (1.0 + 1e-12))
    throw time_domain_error(T, "solve_characteristic: T exceeds the coefficient domain [0, " +
                                   std::to_string(coeffs.t_end()) + "]");
  if (!(tol > 0.0) || tol > 1e-4)
    throw std::invalid_argument("solve_characteristic: tol must lie in (0, 1e-4]");

  CharacteristicSolution s;
  s.coeffs_ = std::make_shared<const CoefficientSet>(coeffs);
  s.T_ = T;
  s.tol_ = tol;
  s.t0_ = 1e-6 * T;
  s.caustic_guard_ = 1e-9 * std::max(1.0, T);

  const CoefficientSet& cs = *s.coeffs_;
  const double a0 = cs.a(0.0);

  // One dense pass carries mu0, mu0', mu1, mu1', L = int_0^t (c - 2d), and
  // I = int_0^t [(f - d g/a) mu0 + g mu0'/(2a)] / lambda, so that
  // mu0 delta0 = lambda I is available everywhere, caustics included.
  OdeOptions lin_opt;
  lin_opt.rtol = tol;
  lin_opt.atol = 1e-2 * tol;
  lin_opt.h_max = T / 512.0;
  const OdeRhs lin_rhs = [&cs](double t, std::span<const double> y, std::span<double> dy) {
    const TauSigma ts = tau_sigma(cs, t);
    const double a = cs.a(t);
    const double d = cs.d(t);
    const double g = cs.g(t);
    dy[0] = y[1];
    dy[1] = ts.tau * y[1] - 4.0 * ts.sigma * y[0];
    dy[2] = y[3];
    dy[3] = ts.tau * y[3] - 4.0 * ts.sigma * y[2];
    dy[4] = cs.c(t) - 2.0 * d;
    dy[5] = ((cs.f(t) - d * g / a) * y[0] + g * y[1] / (2.0 * a)) * std::exp(y[4]);
  };
  const std::array<double, 6> y0{0.0, 2.0 * a0, 1.0, 0.0, 0.0, 0.0};
  s.lin_ = integrate_dopri5(lin_rhs, y0, 0.0, T, lin_opt);

  s.caustics_ = s.lin_.component_roots(0, 0.0);
  s.turning_ = s.lin_.component_roots(1, 0.0);

  // t -> 0+ limits of the drive coefficients, from matching powers of t in the
  // kernel system: delta0 -> g/(2a), epsilon0 -> -g/(2a), kappa0 -> 0, with the
  // slopes below.  They seed the drive integration and serve small-t queries.
  const double g0 = cs.g(0.0), f0 = cs.f(0.0), c0 = cs.c(0.0);
  const double a0p = cs.a_dot(0.0), g0p = cs.g_dot(0.0);
  s.delta0_limit_ = g0 / (2.0 * a0);
  s.delta0_slope_ =
      0.5 * f0 + g0p / (4.0 * a0) - g0 * c0 / (4.0 * a0) - g0 * a0p / (4.0 * a0 * a0);
  s.epsilon0_limit_ = -s.delta0_limit_;
  s.epsilon0_slope_ =
      0.5 * f0 - g0p / (4.0 * a0) - g0 * c0 / (4.0 * a0) + g0 * a0p / (4.0 * a0 * a0);
  s.kappa0_slope_ = g0 * g0 / (4.0 * a0);

  s.inhom_end_ = T;
  if (!cs.homogeneous()) {
    // epsilon0 and kappa0 have genuine poles at zeros of mu0, so the drive
    // integration stops a margin short of the first one.
    if (!s.caustics_.empty()) {
      const double margin = 1e-6 * std::max(1.0, T);
      s.inhom_end_ = s.caustics_.front() - margin;
      if (s.inhom_end_ <= 2.0 * s.t0_)
        throw caustic_error(s.caustics_.front(),
                            "solve_characteristic: first zero of mu0 sits at the start of the "
                            "domain; the drive coefficients have no room to integrate");
    }
    const DenseSolution& lin = s.lin_;
    OdeOptions drv_opt;
    drv_opt.rtol = tol;
    drv_opt.atol = 1e-2 * tol;
    drv_opt.h_max = T / 512.0;
    const OdeRhs drv_rhs = [&cs, &lin](double t, std::span<const double>, std::span<double> dy) {
      const double mu0 = lin.eval_component(t, 0);
      const double lam = std::exp(-lin.eval_component(t, 4));
      const double delta0 = lam * lin.eval_component(t, 5) / mu0;
      const double beta0 = -lam / mu0;
      const double a = cs.a(t);
      const double g = cs.g(t);
      dy[0] = (g - 2.0 * a * delta0) * beta0;
      dy[1] = g * delta0 - a * delta0 * delta0;
    };
    const std::array<double, 2> drv0{s.epsilon0_limit_ + s.t0_ * s.epsilon0_slope_,
                                     s.t0_ * s.kappa0_slope_};
    s.inhom_ = integrate_dopri5(drv_rhs, drv0, s.t0_, s.inhom_end_, drv_opt);
  }
  return s;
}

FundamentalSolution::FundamentalSolution(std::shared_ptr<const CharacteristicSolution> sol)
    : sol_(std::move(sol)) {
  if (!sol_) throw std::invalid_argument("FundamentalSolution: null characteristic solution");
  const CoefficientSet& cs = sol_->coefficients();
  d0_over_2a0_ = cs.d(0.0) / (2.0 * cs.a(0.0));
}

FundamentalSolution fundamental_solution(const CharacteristicSolution& sol) {
  return FundamentalSolution(std::make_shared<const CharacteristicSolution>(sol));
}

FundamentalSolution fundamental_solution(std::shared_ptr<const CharacteristicSolution> sol) {
  return FundamentalSolution(std::move(sol));
}

void FundamentalSolution::require_time(double t, const char* what) const {
  const double pad = 1e-12 * std::max(1.0, sol_->T());
  if (t < -pad || t > sol_->T() + pad)
    throw time_domain_error(t, near_time(what, t) + ": outside [0, " +
                                   std::to_string(sol_->T()) + "]");
}

void FundamentalSolution::require_drive_range(double t, const char* what) const {
  if (t <= sol_->inhom_end_) return;
  throw caustic_error(sol_->caustics_.front(),
                      near_time(what, t) +
                          ": drive coefficients are unavailable at and beyond the first zero of "
                          "mu0 (t = " +
                          std::to_string(sol_->caustics_.front()) + ")");
}

double FundamentalSolution::alpha0(double t) const {
  require_time(t, "alpha0");
  sol_->require_clear_of_caustics(t, "alpha0");
  const CoefficientSet& cs = sol_->coefficients();
  return sol_->mu0_dot(t) / (4.0 * cs.a(t) * sol_->mu0(t)) - cs.d(t) / (2.0 * cs.a(t));
}

double FundamentalSolution::beta0(double t) const {
  require_time(t, "beta0");
  sol_->require_clear_of_caustics(t, "beta0");
  return -sol_->lambda(t) / sol_->mu0(t);
}

double FundamentalSolution::gamma0(double t) const {
  require_time(t, "gamma0");
  sol_->require_clear_of_caustics(t, "gamma0");
  return sol_->mu1(t) / (2.0 * sol_->mu0(t)) + d0_over_2a0_;
}

double FundamentalSolution::delta0(double t) const {
  require_time(t, "delta0");
  if (sol_->coefficients().homogeneous()) return 0.0;
  require_drive_range(t, "delta0");
  if (t < sol_->t0_) return sol_->delta0_limit_ + t * sol_->delta0_slope_;
  return sol_->lambda(t) * sol_->delta0_integral(t) / sol_->mu0(t);
}

double FundamentalSolution::epsilon0(double t) const {
  require_time(t, "epsilon0");
  if (sol_->coefficients().homogeneous()) return 0.0;
  require_drive_range(t, "epsilon0");
  if (t < sol_->t0_) return sol_->epsilon0_limit_ + t * sol_->epsilon0_slope_;
  return sol_->inhom_.eval_component(t, 0);
}

double FundamentalSolution::kappa0(double t) const {
  require_time(t, "kappa0");
  if (sol_->coefficients().homogeneous()) return 0.0;
  require_drive_range(t, "kappa0");
  if (t < sol_->t0_) return t * sol_->kappa0_slope_;
  return sol_->inhom_.eval_component(t, 1);
}

double FundamentalSolution::mu0_gamma0(double t) const {
  require_time(t, "mu0_gamma0");
  return 0.5 * sol_->mu1(t) + d0_over_2a0_ * sol_->mu0(t);
}

double FundamentalSolution::mu0_gamma0_dot(double t) const {
  require_time(t, "mu0_gamma0_dot");
  return 0.5 * sol_->mu1_dot(t) + d0_over_2a0_ * sol_->mu0_dot(t);
}

double FundamentalSolution::mu0_delta0(double t) const {
  require_time(t, "mu0_delta0");
  return sol_->lambda(t) * sol_->delta0_integral(t);
}

double asymp_alpha0(const CoefficientSet& coeffs, double t) {
  const double a0 = coeffs.a(0.0);
  return 1.0 / (4.0 * a0 * t) - coeffs.c(0.0) / (4.0 * a0) -
         coeffs.a_dot(0.0) / (8.0 * a0 * a0);
}

double asymp_beta0(const CoefficientSet& coeffs, double t) {
  const double a0 = coeffs.a(0.0);
  return -1.0 / (2.0 * a0 * t) + coeffs.a_dot(0.0) / (4.0 * a0 * a0);
}

double asymp_gamma0(const CoefficientSet& coeffs, double t) {
  const double a0 = coeffs.a(0.0);
  return 1.0 / (4.0 * a0 * t) + coeffs.c(0.0) / (4.0 * a0) -
         coeffs.a_dot(0.0) / (8.0 * a0 * a0);
}

double asymp_delta0(const CoefficientSet& coeffs) {
  return coeffs.g(0.0) / (2.0 * coeffs.a(0.0));
}

double asymp_epsilon0(const CoefficientSet& coeffs) {
  return -coeffs.g(0.0) / (2.0 * coeffs.a(0.0));
}

double verify_riccati_residual(const FundamentalSolution& fund, std::span<const double> grid) {
  const CoefficientSet& cs = fund.coefficients();
  double worst = 0.0;
  for (double t : grid) {
    const double h = kCbrtEps * std::abs(t);
    if (!(h > 0.0)) throw std::invalid_argument("verify_riccati_residual: grid must avoid t = 0");
    const double tp = t + h, tm = t - h;
    const double den = tp - tm;

    const double al = fund.alpha0(t), be = fund.beta0(t);
    const double de = fund.delta0(t);
    const double dal = (fund.alpha0(tp) - fund.alpha0(tm)) / den;
    const double dbe = (fund.beta0(tp) - fund.beta0(tm)) / den;
    const double dga = (fund.gamma0(tp) - fund.gamma0(tm)) / den;
    const double dde = (fund.delta0(tp) - fund.delta0(tm)) / den;
    const double dep = (fund.epsilon0(tp) - fund.epsilon0(tm)) / den;
    const double dka = (fund.kappa0(tp) - fund.kappa0(tm)) / den;

    const double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    const double f = cs.f(t), g = cs.g(t);
    const double ra = dal + b + 2.0 * c * al + 4.0 * a * al * al;
    const double rb = dbe + (c + 4.0 * a * al) * be;
    const double rc = dga + a * be * be;
    const double rd = dde + (c + 4.0 * a * al) * de - f - 2.0 * g * al;
    const double re = dep - (g - 2.0 * a * de) * be;
    const double rf = dka - g * de + a * de * de;
    for (double r : {ra, rb, rc, rd, re, rf}) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {

void require_before_first_turning(const CharacteristicSolution& s, double t, const char* what) {
  if (!(t > 0.0) || t > s.T())
    throw time_domain_error(t, near_time(what, t) + ": t must lie in (0, T]");
  if (!s.turning_points().empty() && t >= s.turning_points().front())
    throw numeric_error(near_time(what, t) +
                        ": mu0' vanishes inside (0, t] (first turning point at t = " +
                        std::to_string(s.turning_points().front()) + ")");
}

}  // namespace

double epsilon0_quadrature(const FundamentalSolution& fund, double t) {
  const CharacteristicSolution& s = fund.characteristic();
  const CoefficientSet& cs = s.coefficients();
  if (cs.homogeneous()) return 0.0;
  require_before_first_turning(s, t, "epsilon0_quadrature");

  const double qtol = 0.1 * s.tolerance();
  const double s1 = adaptive_simpson(
      [&](double u) {
        const double mp = s.mu0_dot(u);
        const double lam = s.lambda(u);
        return cs.a(u) * tau_sigma(cs, u).sigma * lam * (lam * s.delta0_integral(u)) / (mp * mp);
      },
      0.0, t, qtol);
  const double s2 = adaptive_simpson(
      [&](double u) {
        const double au = cs.a(u);
        return (au * s.lambda(u) / s.mu0_dot(u)) * (cs.f(u) - cs.d(u) * cs.g(u) / au);
      },
      0.0, t, qtol);
  const double at = cs.a(t);
  return -(2.0 * at * s.lambda(t) / s.mu0_dot(t)) * fund.delta0(t) + 8.0 * s1 + 2.0 * s2;
}

double kappa0_quadrature(const FundamentalSolution& fund, double t) {
  const CharacteristicSolution& s = fund.characteristic();
  const CoefficientSet& cs = s.coefficients();
  if (cs.homogeneous()) return 0.0;
  require_before_first_turning(s, t, "kappa0_quadrature");

  const double qtol = 0.1 * s.tolerance();
  const double s1 = adaptive_simpson(
      [&](double u) {
        const double mp = s.mu0_dot(u);
        const double md = s.lambda(u) * s.delta0_integral(u);  // mu0 delta0
        return cs.a(u) * tau_sigma(cs, u).sigma * md * md / (mp * mp);
      },
      0.0, t, qtol);
  const double s2 = adaptive_simpson(
      [&](double u) {
        const double au = cs.a(u);
        const double md = s.lambda(u) * s.delta0_integral(u);
        return (au / s.mu0_dot(u)) * md * (cs.f(u) - cs.d(u) * cs.g(u) / au);
      },
      0.0, t, qtol);
  const double d0t = fund.delta0(t);
  return (cs.a(t) * s.mu0(t) / s.mu0_dot(t)) * d0t * d0t - 4.0 * s1 - 2.0 * s2;
}

}  // namespace qho
