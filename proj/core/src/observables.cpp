#include "qho/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "qho/errors.hpp"
#include "qho/parallel_for.hpp"
#include "qho/quadrature.hpp"

namespace qho {
namespace {

double uniform_spacing(std::span<const double> g, const char* what) {
  if (g.size() < 2)
    throw std::invalid_argument(std::string(what) + ": grid needs at least 2 points");
  const double h = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
  if (!(h > 0.0))
    throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (std::abs((g[i + 1] - g[i]) - h) > 1e-9 * h)
      throw std::invalid_argument(std::string(what) + ": grid must be uniform");
  return h;
}

void require_monotone_tau(std::span<const KernelState> states, const char* what) {
  if (states.size() < 2)
    throw std::invalid_argument(std::string(what) + ": needs at least 2 states");
  const double dir = states[1].gamma - states[0].gamma;
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    if (!((states[i + 1].gamma - states[i].gamma) * dir > 0.0))
      throw std::invalid_argument(std::string(what) +
                                  ": tau = gamma(t) must be strictly monotone");
}

// Six-point Lagrange interpolation on a uniform grid (needs >= 6 nodes).
complexd interp6(std::span<const double> xg, std::span<const complexd> v, double h,
                 double xq) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xg.size());
  std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor((xq - xg[0]) / h)) - 2;
  j = std::clamp<std::ptrdiff_t>(j, 0, n - 6);
  complexd acc(0.0, 0.0);
  for (int k = 0; k < 6; ++k) {
    double w = 1.0;
    for (int m = 0; m < 6; ++m)
      if (m != k) w *= (xq - xg[j + m]) / (xg[j + k] - xg[j + m]);
    acc += w * v[j + k];
  }
  return acc;
}

}  // namespace

Trajectory expectation_x(const WaveField& field) {
  const std::size_t nx = field.nx(), nt = field.nt();
  if (nx < 8 || nt == 0)
    throw std::invalid_argument("expectation_x: field needs at least 8 x samples");
  const double hx = uniform_spacing(field.x, "expectation_x");

  for (std::size_t it = 0; it < nt; ++it) {
    const auto s = field.slice(it);
    double mx = 0.0;
    for (const complexd& v : s) mx = std::max(mx, std::abs(v));
    if (std::abs(s.front()) > 1e-10 * mx || std::abs(s.back()) > 1e-10 * mx)
      throw std::invalid_argument(
          "expectation_x: field must decay below 1e-10 of its max at the x boundary "
          "(slice " +
          std::to_string(it) + ")");
  }

  Trajectory traj;
  traj.t_grid = field.t;
  traj.xbar.assign(nt, 0.0);
  traj.norm.assign(nt, 0.0);
  parallel_for(nt, effective_threads(), [&](std::size_t it) {
    const auto s = field.slice(it);
    std::vector<double> dens(nx), xdens(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      dens[ix] = std::norm(s[ix]);
      xdens[ix] = field.x[ix] * dens[ix];
    }
    traj.norm[it] = integrate_uniform(std::span<const double>(dens), hx);
    traj.xbar[it] = integrate_uniform(std::span<const double>(xdens), hx);
  });
  for (std::size_t it = 0; it < nt; ++it) {
    if (!(traj.norm[it] > 0.0))
      throw numeric_error("expectation_x: vanishing norm at slice " + std::to_string(it));
    traj.xbar[it] /= traj.norm[it];
  }
  return traj;
}

double ehrenfest_residual(const Trajectory& traj, const CoefficientSet& coeffs) {
  const std::size_t n = traj.t_grid.size();
  if (n < 5 || traj.xbar.size() != n)
    throw std::invalid_argument("ehrenfest_residual: needs >= 5 slices with matching xbar");
  const double ht = uniform_spacing(traj.t_grid, "ehrenfest_residual");

  // Fourth-order five-point stencils; the 1e-4 target leaves no room for
  // O(ht^2) truncation at the default slice counts.
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double tv = traj.t_grid[i];
    const double a = coeffs.a(tv), b = coeffs.b(tv), c = coeffs.c(tv);
    const double f = coeffs.f(tv), g = coeffs.g(tv);
    const double ad = coeffs.a_dot(tv), cd = coeffs.c_dot(tv), gd = coeffs.g_dot(tv);
    const double x0 = traj.xbar[i];
    const double m2 = traj.xbar[i - 2], m1 = traj.xbar[i - 1];
    const double p1 = traj.xbar[i + 1], p2 = traj.xbar[i + 2];
    const double xd = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * ht);
    const double xdd = (-m2 + 16.0 * m1 - 30.0 * x0 + 16.0 * p1 - p2) / (12.0 * ht * ht);
    const double lhs = xdd - (ad / a) * xd + (4.0 * a * b - c * c + c * ad / a - cd) * x0;
    const double rhs = 2.0 * a * f - gd + g * ad / a - c * g;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

ArnoldData arnold_transform(const Trajectory& traj, std::span<const KernelState> states) {
  const std::size_t n = traj.t_grid.size();
  if (states.size() != n || traj.xbar.size() != n)
    throw std::invalid_argument("arnold_transform: states must be sampled on the t grid");
  require_monotone_tau(states, "arnold_transform");

  ArnoldData out;
  out.xi_bar.resize(n);
  out.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.xi_bar[i] = states[i].beta * traj.xbar[i] + states[i].epsilon;
    out.tau[i] = states[i].gamma;
  }
  return out;
}

double harmonic_normal_form_residual(std::span<const double> xi_bar,
                                     std::span<const double> tau, int c0) {
  if (c0 != 0 && c0 != 1)
    throw std::invalid_argument("harmonic_normal_form_residual: c0 must be 0 or 1");
  const std::size_t n = xi_bar.size();
  if (n < 5 || tau.size() != n)
    throw std::invalid_argument("harmonic_normal_form_residual: needs >= 5 samples");
  const double dir = tau[1] - tau[0];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!((tau[i + 1] - tau[i]) * dir > 0.0))
      throw std::invalid_argument("harmonic_normal_form_residual: tau must be monotone");

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double tm = tau[i - 1], t0 = tau[i], tp = tau[i + 1];
    const double d2 = 2.0 * (xi_bar[i - 1] / ((tm - t0) * (tm - tp)) +
                             xi_bar[i] / ((t0 - tm) * (t0 - tp)) +
                             xi_bar[i + 1] / ((tp - tm) * (tp - t0)));
    worst = std::max(worst, std::abs(d2 + 4.0 * c0 * xi_bar[i]));
  }
  return worst;
}

std::vector<double> xi_expectation_direct(const WaveField& field,
                                          std::span<const KernelState> states) {
  const std::size_t nx = field.nx(), nt = field.nt();
  if (nx < 16) throw std::invalid_argument("xi_expectation_direct: needs nx >= 16");
  if (states.size() != nt)
    throw std::invalid_argument("xi_expectation_direct: one state per slice required");
  const double hx = uniform_spacing(field.x, "xi_expectation_direct");
  for (const KernelState& st : states) {
    if (!(st.mu > 0.0))
      throw std::invalid_argument("xi_expectation_direct: states must carry positive mu");
    if (st.beta == 0.0)
      throw std::invalid_argument("xi_expectation_direct: states must carry nonzero beta");
  }

  std::vector<double> out(nt, 0.0);
  parallel_for(nt, effective_threads(), [&](std::size_t it) {
    const KernelState& st = states[it];
    const double e1 = st.beta * field.x.front() + st.epsilon;
    const double e2 = st.beta * field.x.back() + st.epsilon;
    const double lo = std::min(e1, e2), hi = std::max(e1, e2);
    const double hxi = (hi - lo) / static_cast<double>(nx - 1);
    const double rmu = std::sqrt(st.mu);
    std::vector<double> dens(nx), xdens(nx);
    for (std::size_t k = 0; k < nx; ++k) {
      const double xi = lo + hxi * static_cast<double>(k);
      const double xv = (xi - st.epsilon) / st.beta;
      // The gauge phase e^{-i(alpha x^2 + delta x + kappa)} drops out of |chi|^2.
      const complexd chi = rmu * interp6(field.x, field.slice(it), hx, xv);
      dens[k] = std::norm(chi);
      xdens[k] = xi * dens[k];
    }
    const double nrm = integrate_uniform(std::span<const double>(dens), hxi);
    const double xm = integrate_uniform(std::span<const double>(xdens), hxi);
    out[it] = xm / nrm;
  });
  return out;
}

}  // namespace qho
