#include "qho/superposition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qho/errors.hpp"

namespace qho {
namespace {

const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());

void validate_init(const InitialData& init, const char* what) {
  if (!(init.mu > 0.0))
    throw std::invalid_argument(std::string(what) + ": initial mu must be positive");
  if (init.beta == 0.0)
    throw std::invalid_argument(std::string(what) + ": initial beta must be nonzero");
}

void require_map_time(const CharacteristicSolution& s, double t, const char* what) {
  const double pad = 1e-12 * std::max(1.0, s.T());
  if (t < -pad || t > s.T() + pad)
    throw time_domain_error(t, std::string(what) + ": t = " + std::to_string(t) +
                                   " outside [0, " + std::to_string(s.T()) + "]");
}

// p = mu0 (alpha(0) + gamma0) = mu1/2 + (alpha(0) + d(0)/(2a(0))) mu0, smooth
// across caustics, with p mu0' - p' mu0 = a lambda^2 (the Wronskian).
double smooth_p(const FundamentalSolution& fund, double alpha_init, double t) {
  return fund.mu0_gamma0(t) + alpha_init * fund.characteristic().mu0(t);
}

double smooth_p_dot(const FundamentalSolution& fund, double alpha_init, double t) {
  return fund.mu0_gamma0_dot(t) + alpha_init * fund.characteristic().mu0_dot(t);
}

}  // namespace

KernelState riccati_map(const FundamentalSolution& fund, const InitialData& init, double t) {
  validate_init(init, "riccati_map");
  const CharacteristicSolution& s = fund.characteristic();
  require_map_time(s, t, "riccati_map");
  if (!(t > 0.0))
    throw time_domain_error(t, "riccati_map: t must be positive (the map starts at 0+)");

  // gamma0 refuses at caustics of mu0; the c0 = 0 map inherits that domain.
  const double A = init.alpha + fund.gamma0(t);
  if (std::abs(A) <= 1e-12)
    throw degenerate_focus_error(
        t, "riccati_map: alpha(0) + gamma0(t) vanishes at t = " + std::to_string(t));

  // Formulas multiplied through by mu0: p = mu0 A stays well-scaled even where
  // gamma0 is large, and alpha = p'/(4 a p) - d/(2a) avoids the cancellation
  // between alpha0 and beta0^2/(4A) near caustics.
  const CoefficientSet& cs = fund.coefficients();
  const double mu0 = s.mu0(t);
  const double lam = s.lambda(t);
  const double p = smooth_p(fund, init.alpha, t);
  const double pd = smooth_p_dot(fund, init.alpha, t);
  const double at = cs.a(t);
  const double drive = init.delta + fund.epsilon0(t);

  KernelState st;
  st.t = t;
  st.c0 = 0;
  st.mu = 2.0 * init.mu * p;
  st.alpha = pd / (4.0 * at * p) - cs.d(t) / (2.0 * at);
  st.beta = init.beta * lam / (2.0 * p);
  st.gamma = init.gamma - init.beta * init.beta * mu0 / (4.0 * p);
  st.delta = fund.delta0(t) + lam * drive / (2.0 * p);
  st.epsilon = init.epsilon - init.beta * drive * mu0 / (2.0 * p);
  st.kappa = init.kappa + fund.kappa0(t) - drive * drive * mu0 / (4.0 * p);
  return st;
}

KernelState ermakov_map(const FundamentalSolution& fund, const InitialData& init, double t) {
  validate_init(init, "ermakov_map");
  const CharacteristicSolution& s = fund.characteristic();
  require_map_time(s, t, "ermakov_map");
  const CoefficientSet& cs = fund.coefficients();
  if (!(cs.a(0.0) > 0.0))
    throw std::invalid_argument("ermakov_map: requires a(0) > 0 (branch of the gamma formula)");

  const double mu0 = s.mu0(t);
  const double mu0d = s.mu0_dot(t);
  const double lam = s.lambda(t);
  const double b1 = init.beta, b2 = b1 * b1, b3 = b2 * b1, b4 = b2 * b2;
  const double p = smooth_p(fund, init.alpha, t);
  const double pd = smooth_p_dot(fund, init.alpha, t);
  const double q = b4 * mu0 * mu0 + 4.0 * p * p;  // > 0: mu0 and p never vanish together
  const double rq = std::sqrt(q);
  const double at = cs.a(t);
  const double drive = init.delta + fund.epsilon0(t);

  // Continuous angle of the smooth vector (2p, beta^2(0) mu0): the principal
  // atan2 value jumps by 2 pi when the vector crosses the negative real axis,
  // which happens exactly at caustics with p < 0 there.
  double theta = std::atan2(b2 * mu0, 2.0 * p);
  for (double tc : s.caustics()) {
    if (tc >= t) break;
    if (smooth_p(fund, init.alpha, tc) < 0.0)
      theta += (s.mu0_dot(tc) < 0.0) ? 2.0 * std::numbers::pi : -2.0 * std::numbers::pi;
  }

  KernelState st;
  st.t = t;
  st.c0 = 1;
  st.mu = init.mu * rq;
  st.alpha = (b4 * mu0 * mu0d + 4.0 * p * pd) / (4.0 * at * q) - cs.d(t) / (2.0 * at);
  st.beta = b1 * lam / rq;
  st.gamma = init.gamma - 0.5 * theta;
  st.delta = fund.delta0(t) + lam * (init.epsilon * b3 * mu0 + 2.0 * p * drive) / q;
  st.epsilon = (2.0 * init.epsilon * p - b1 * drive * mu0) / rq;
  st.kappa = init.kappa + fund.kappa0(t) +
             (-init.epsilon * b3 * drive * mu0 * mu0 +
              p * mu0 * (init.epsilon * init.epsilon * b2 - drive * drive)) /
                 q;
  return st;
}

double mu_pinney(const CharacteristicSolution& sol, const InitialData& init,
                 const CoefficientSet& coeffs, double t) {
  validate_init(init, "mu_pinney");
  const double a0 = coeffs.a(0.0);
  const double mu_dot0 = 2.0 * init.mu * (2.0 * a0 * init.alpha + coeffs.d(0.0));
  const double mu0 = sol.mu0(t);
  const double bracket = sol.mu1(t) + (mu_dot0 / (2.0 * init.mu)) * mu0 / a0;
  const double b2 = init.beta * init.beta;
  return init.mu * std::sqrt(b2 * b2 * mu0 * mu0 + bracket * bracket);
}

double ermakov_residual(const CharacteristicSolution& sol, const CoefficientSet& coeffs,
                        const InitialData& init, std::span<const double> grid) {
  validate_init(init, "ermakov_residual");
  double worst = 0.0;
  for (double t : grid) {
    double h = 5e-3 * std::max(std::abs(t), 0.2);
    h = std::min({h, t / 2.001, (sol.T() - t) / 2.001});
    if (!(h > 0.0))
      throw std::invalid_argument("ermakov_residual: grid must lie strictly inside (0, T)");
    const double ym2 = mu_pinney(sol, init, coeffs, t - 2.0 * h);
    const double ym1 = mu_pinney(sol, init, coeffs, t - h);
    const double y0 = mu_pinney(sol, init, coeffs, t);
    const double yp1 = mu_pinney(sol, init, coeffs, t + h);
    const double yp2 = mu_pinney(sol, init, coeffs, t + 2.0 * h);
    const double mu_d = (ym2 - 8.0 * ym1 + 8.0 * yp1 - yp2) / (12.0 * h);
    const double mu_dd = (-ym2 + 16.0 * ym1 - 30.0 * y0 + 16.0 * yp1 - yp2) / (12.0 * h * h);

    const TauSigma ts = tau_sigma(coeffs, t);
    const double a2 = 2.0 * coeffs.a(t);
    const double src = init.beta * init.mu * sol.lambda(t);
    const double src2 = src * src;
    const double rhs = a2 * a2 * src2 * src2 / (y0 * y0 * y0);
    worst = std::max(worst, std::abs(mu_dd - ts.tau * mu_d + 4.0 * ts.sigma * y0 - rhs));
  }
  return worst;
}

double superposition_residual(const FundamentalSolution& fund, const InitialData& init, int c0,
                              std::span<const double> grid) {
  if (c0 != 0 && c0 != 1)
    throw std::invalid_argument("superposition_residual: c0 must be 0 or 1");
  const auto map = (c0 == 0) ? riccati_map : ermakov_map;
  const CoefficientSet& cs = fund.coefficients();
  double worst = 0.0;
  for (double t : grid) {
    const double h = kCbrtEps * std::abs(t);
    if (!(h > 0.0))
      throw std::invalid_argument("superposition_residual: grid must avoid t = 0");
    const KernelState sm = map(fund, init, t - h);
    const KernelState s0 = map(fund, init, t);
    const KernelState sp = map(fund, init, t + h);
    const double den = 2.0 * h;
    const double dal = (sp.alpha - sm.alpha) / den;
    const double dbe = (sp.beta - sm.beta) / den;
    const double dga = (sp.gamma - sm.gamma) / den;
    const double dde = (sp.delta - sm.delta) / den;
    const double dep = (sp.epsilon - sm.epsilon) / den;
    const double dka = (sp.kappa - sm.kappa) / den;

    const double a = cs.a(t), b = cs.b(t), c = cs.c(t);
    const double f = cs.f(t), g = cs.g(t);
    const double be2 = s0.beta * s0.beta;
    const double cc = static_cast<double>(c0);
    const double ra = dal + b + 2.0 * c * s0.alpha + 4.0 * a * s0.alpha * s0.alpha -
                      cc * a * be2 * be2;
    const double rb = dbe + (c + 4.0 * a * s0.alpha) * s0.beta;
    const double rc = dga + a * be2;
    const double rd = dde + (c + 4.0 * a * s0.alpha) * s0.delta - f - 2.0 * g * s0.alpha -
                      2.0 * cc * a * be2 * s0.beta * s0.epsilon;
    const double re = dep - (g - 2.0 * a * s0.delta) * s0.beta;
    const double rf = dka - g * s0.delta + a * s0.delta * s0.delta -
                      cc * a * be2 * s0.epsilon * s0.epsilon;
    for (double r : {ra, rb, rc, rd, re, rf}) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace qho
