#include "qho/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "qho/errors.hpp"
#include "qho/parallel_for.hpp"
#include "qho/quadrature.hpp"

namespace qho {
namespace {

constexpr double kPi = std::numbers::pi;

unsigned worker_threads() { return effective_threads(); }

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

// Six-point Lagrange interpolation on a uniform grid (needs >= 6 nodes).
complexd interp6(std::span<const double> xg, std::span<const complexd> v, double h, double xq) {
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

WaveField make_wave_field(double x_min, double x_max, std::size_t n_x,
                          std::span<const double> t_grid, std::string preset_id,
                          std::string label) {
  if (n_x < 16) throw std::invalid_argument("make_wave_field: n_x must be at least 16");
  if (!(x_max > x_min)) throw std::invalid_argument("make_wave_field: x_max must exceed x_min");
  if (t_grid.empty()) throw std::invalid_argument("make_wave_field: empty t grid");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i + 1] > t_grid[i]))
      throw std::invalid_argument("make_wave_field: t grid must be strictly increasing");

  WaveField wf;
  wf.x.resize(n_x);
  const double h = (x_max - x_min) / static_cast<double>(n_x - 1);
  for (std::size_t i = 0; i < n_x; ++i) wf.x[i] = x_min + h * static_cast<double>(i);
  wf.t.assign(t_grid.begin(), t_grid.end());
  wf.values.assign(n_x * t_grid.size(), complexd(0.0, 0.0));
  wf.preset_id = std::move(preset_id);
  wf.label = std::move(label);
  return wf;
}

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n must be nonnegative");
  if (n > 200)
    throw std::invalid_argument("hermite: n capped at 200 (double-precision recurrence)");
  double hk = 1.0;  // H_0
  if (n == 0) return hk;
  double hk1 = 2.0 * x;  // H_1
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * hk1 - 2.0 * k * hk;
    hk = hk1;
    hk1 = next;
  }
  return hk1;
}

double hermite_function(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_function: n must be nonnegative");
  double hk = std::exp(-0.5 * x * x) / std::pow(kPi, 0.25);  // h_0
  if (n == 0) return hk;
  double hk1 = std::sqrt(2.0) * x * hk;  // h_1
  for (int k = 1; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1.0)) * x * hk1 - std::sqrt(k / (k + 1.0)) * hk;
    hk = hk1;
    hk1 = next;
  }
  return hk1;
}

complexd eigenstate(int n, const KernelState& state, double x) {
  if (n < 0) throw std::invalid_argument("eigenstate: n must be nonnegative");
  if (state.c0 != 1)
    throw std::invalid_argument("eigenstate: the kernel state must target the c0 = 1 equation");
  if (!(state.mu > 0.0)) throw numeric_error("eigenstate: mu must be positive");
  const double xi = state.beta * x + state.epsilon;
  const double phase =
      state.alpha * x * x + state.delta * x + state.kappa + (2.0 * n + 1.0) * state.gamma;
  return hermite_function(n, xi) / std::sqrt(state.mu) * std::exp(complexd(0.0, phase));
}

complexd greens(const FundamentalSolution& fund, double x, double y, double t) {
  const CharacteristicSolution& s = fund.characteristic();
  const double al = fund.alpha0(t);  // refuses at t near 0 and at caustics
  const double be = fund.beta0(t);
  const double ga = fund.gamma0(t);
  const double de = fund.delta0(t);
  const double ep = fund.epsilon0(t);
  const double ka = fund.kappa0(t);
  const double phase = al * x * x + be * x * y + ga * y * y + de * x + ep * y + ka;
  const double branch = -0.25 * kPi - 0.5 * kPi * s.maslov_index(t);
  return std::exp(complexd(0.0, phase + branch)) /
         std::sqrt(2.0 * kPi * std::abs(s.mu0(t)));
}

GreensKernel::GreensKernel(std::shared_ptr<const FundamentalSolution> fund)
    : fund_(std::move(fund)) {
  if (!fund_) throw std::invalid_argument("GreensKernel: null fundamental solution");
}

complexd greens_asymptotic(const CoefficientSet& coeffs, double x, double y, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("greens_asymptotic: t must be positive");
  const double a0 = coeffs.a(0.0);
  if (!(a0 > 0.0)) throw std::invalid_argument("greens_asymptotic: requires a(0) > 0");
  const double dxy = x - y;
  const double lead = dxy * dxy / (4.0 * a0 * t);
  const double corr = coeffs.a_dot(0.0) / (8.0 * a0 * a0) * dxy * dxy +
                      coeffs.c(0.0) / (4.0 * a0) * (x * x - y * y) -
                      coeffs.g(0.0) / (2.0 * a0) * dxy;
  return std::exp(complexd(0.0, lead - corr - 0.25 * kPi)) / std::sqrt(4.0 * kPi * a0 * t);
}

WaveSlice propagate(const FundamentalSolution& fund, const WaveSlice& initial,
                    std::span<const double> x_out, double t) {
  if (initial.x.size() != initial.psi.size() || initial.x.size() < 8)
    throw std::invalid_argument(
        "propagate: initial slice needs matching x/psi arrays with at least 8 samples");
  if (x_out.empty()) throw std::invalid_argument("propagate: empty output grid");
  const double hy_in = uniform_spacing(initial.x, "propagate");

  double amax = 0.0;
  for (const complexd& v : initial.psi) amax = std::max(amax, std::abs(v));
  WaveSlice out;
  out.t = initial.t + t;
  out.x.assign(x_out.begin(), x_out.end());
  out.psi.assign(x_out.size(), complexd(0.0, 0.0));
  if (amax == 0.0) return out;

  const double cutoff = 1e-12 * amax;
  if (std::abs(initial.psi.front()) > cutoff || std::abs(initial.psi.back()) > cutoff)
    throw std::invalid_argument(
        "propagate: initial data must decay below 1e-12 of its max at the grid boundary");
  std::size_t lo = 0;
  while (std::abs(initial.psi[lo]) <= cutoff) ++lo;
  std::size_t hi = initial.x.size() - 1;
  while (std::abs(initial.psi[hi]) <= cutoff) --hi;
  if (lo > 0) --lo;
  if (hi + 1 < initial.x.size()) ++hi;
  const double y_lo = initial.x[lo], y_hi = initial.x[hi];
  const double len = y_hi - y_lo;

  // Kernel coefficients hoisted out of the grid loops (and any refusal raised
  // before threads start).
  const double al = fund.alpha0(t);
  const double be = fund.beta0(t);
  const double ga = fund.gamma0(t);
  const double de = fund.delta0(t);
  const double ep = fund.epsilon0(t);
  const double ka = fund.kappa0(t);
  const CharacteristicSolution& s = fund.characteristic();
  const double branch = -0.25 * kPi - 0.5 * kPi * s.maslov_index(t);
  const double pref = 1.0 / std::sqrt(2.0 * kPi * std::abs(s.mu0(t)));

  double x_abs = 0.0;
  for (double xv : x_out) x_abs = std::max(x_abs, std::abs(xv));
  const double y_abs = std::max(std::abs(y_lo), std::abs(y_hi));
  const double freq =
      (std::abs(be) * x_abs + 2.0 * std::abs(ga) * y_abs + std::abs(ep)) / (2.0 * kPi);

  // At least 8 quadrature points per kernel oscillation and at least twice the
  // sampling density of the data; refine until two levels agree.
  std::size_t panels = std::max<std::size_t>(
      {64, static_cast<std::size_t>(std::ceil(8.0 * freq * len)), 2 * (hi - lo)});
  panels += panels % 2;

  const unsigned threads = worker_threads();
  const auto eval = [&](std::size_t n, std::vector<complexd>& res) {
    const double h = len / static_cast<double>(n);
    std::vector<complexd> q(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double yj = y_lo + h * static_cast<double>(j);
      const double wj = (j == 0 || j == n) ? 1.0 : ((j % 2) ? 4.0 : 2.0);
      q[j] = interp6(initial.x, initial.psi, hy_in, yj) *
             std::polar(wj * h / 3.0, ga * yj * yj + ep * yj);
    }
    res.assign(out.x.size(), complexd(0.0, 0.0));
    parallel_for(out.x.size(), threads, [&](std::size_t ix) {
      const double xv = out.x[ix];
      complexd acc(0.0, 0.0);
      for (std::size_t j = 0; j <= n; ++j)
        acc += q[j] * std::polar(1.0, be * xv * (y_lo + h * static_cast<double>(j)));
      res[ix] = acc * std::polar(pref, al * xv * xv + de * xv + ka + branch);
    });
  };

  std::vector<complexd> cur, next;
  eval(panels, cur);
  for (int doubling = 0;; ++doubling) {
    if (doubling >= 12)
      throw integration_error("propagate: quadrature failed to converge to 1e-9");
    eval(2 * panels, next);
    double diff = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      diff = std::max(diff, std::abs(next[i] - cur[i]));
      mx = std::max(mx, std::abs(next[i]));
    }
    cur.swap(next);
    panels *= 2;
    if (diff <= 1e-9 * std::max(mx, 1e-30)) break;
  }
  out.psi = std::move(cur);
  return out;
}

std::pair<double, double> gauss_hermite_transform(int n, double lam, double a_scale, double x) {
  if (!(lam > 0.0))
    throw std::invalid_argument("gauss_hermite_transform: lam must be positive");
  if (!(lam * lam > a_scale * a_scale))
    throw std::invalid_argument("gauss_hermite_transform: requires lam^2 > a^2 (real branch)");
  const double r = lam * lam - a_scale * a_scale;
  const double rhs = std::sqrt(kPi) / std::pow(lam, n + 1) * std::pow(r, 0.5 * n) *
                     hermite(n, lam * a_scale * x / std::sqrt(r));
  const double lhs = adaptive_simpson(
      [&](double y) {
        const double e = x - y;
        return std::exp(-lam * lam * e * e) * hermite(n, a_scale * y);
      },
      x - 10.0 / lam, x + 10.0 / lam, 1e-12 * (1.0 + std::abs(rhs)));
  return {lhs, rhs};
}

double schrodinger_residual(const WaveField& field, const CoefficientSet& coeffs) {
  const std::size_t nx = field.nx(), nt = field.nt();
  if (nx < 5 || nt < 5)
    throw std::invalid_argument("schrodinger_residual: needs at least 5 points per direction");
  const double hx = uniform_spacing(field.x, "schrodinger_residual x");
  const double ht = uniform_spacing(field.t, "schrodinger_residual t");

  double amax = 0.0;
  for (const complexd& v : field.values) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) return 0.0;

  // Coefficients evaluated serially so the parallel body cannot throw.
  std::vector<std::array<double, 6>> co(nt);
  for (std::size_t it = 0; it < nt; ++it) {
    const double tv = field.t[it];
    co[it] = {coeffs.a(tv), coeffs.b(tv), coeffs.c(tv),
              coeffs.d(tv), coeffs.f(tv), coeffs.g(tv)};
  }

  std::vector<double> worst(nt, 0.0);
  parallel_for(nt - 2, worker_threads(), [&](std::size_t k) {
    const std::size_t it = k + 1;
    const auto [a, b, c, d, f, g] = co[it];
    const complexd iu(0.0, 1.0);
    double w = 0.0;
    for (std::size_t ix = 2; ix + 2 < nx; ++ix) {
      const complexd psi = field.at(it, ix);
      const complexd pt = (field.at(it + 1, ix) - field.at(it - 1, ix)) / (2.0 * ht);
      const complexd m2 = field.at(it, ix - 2), m1 = field.at(it, ix - 1);
      const complexd p1 = field.at(it, ix + 1), p2 = field.at(it, ix + 2);
      const complexd px = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * hx);
      const complexd pxx =
          (-m2 + 16.0 * m1 - 30.0 * psi + 16.0 * p1 - p2) / (12.0 * hx * hx);
      const double xv = field.x[ix];
      const complexd r = iu * pt + a * pxx - b * xv * xv * psi + iu * (c * xv) * px +
                         iu * d * psi + f * xv * psi - iu * g * px;
      w = std::max(w, std::abs(r));
    }
    worst[it] = w;
  });
  double res = 0.0;
  for (double w : worst) res = std::max(res, w);
  return res / amax;
}

double autonomous_residual(const WaveField& field, std::span<const KernelState> states, int c0) {
  if (c0 != 0 && c0 != 1)
    throw std::invalid_argument("autonomous_residual: c0 must be 0 or 1");
  const std::size_t nx = field.nx(), nt = field.nt();
  if (nx < 16 || nt < 5)
    throw std::invalid_argument("autonomous_residual: needs nx >= 16 and nt >= 5");
  if (states.size() != nt)
    throw std::invalid_argument("autonomous_residual: one kernel state per time slice required");
  const double hx = uniform_spacing(field.x, "autonomous_residual x");
  for (const KernelState& st : states) {
    if (st.c0 != c0)
      throw std::invalid_argument("autonomous_residual: states target a different c0");
    if (!(st.mu > 0.0))
      throw std::invalid_argument("autonomous_residual: states must carry positive mu");
    if (st.beta == 0.0)
      throw std::invalid_argument("autonomous_residual: states must carry nonzero beta");
  }
  const double dir = states[1].gamma - states[0].gamma;
  for (std::size_t i = 0; i + 1 < nt; ++i)
    if (!((states[i + 1].gamma - states[i].gamma) * dir > 0.0))
      throw std::invalid_argument(
          "autonomous_residual: tau = gamma(t) must be strictly monotone");

  // Common xi window across all slices.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const KernelState& st : states) {
    const double e1 = st.beta * field.x.front() + st.epsilon;
    const double e2 = st.beta * field.x.back() + st.epsilon;
    lo = std::max(lo, std::min(e1, e2));
    hi = std::min(hi, std::max(e1, e2));
  }
  if (!(hi > lo))
    throw std::invalid_argument("autonomous_residual: slice xi ranges do not overlap");

  const std::size_t nxi = nx;
  const double hxi = (hi - lo) / static_cast<double>(nxi - 1);
  std::vector<complexd> chi(nt * nxi);
  parallel_for(nt, worker_threads(), [&](std::size_t it) {
    const KernelState& st = states[it];
    const double rmu = std::sqrt(st.mu);
    for (std::size_t k = 0; k < nxi; ++k) {
      const double xi = lo + hxi * static_cast<double>(k);
      const double xv = (xi - st.epsilon) / st.beta;
      const complexd p = interp6(field.x, field.slice(it), hx, xv);
      const double ph = -(st.alpha * xv * xv + st.delta * xv + st.kappa);
      chi[it * nxi + k] = rmu * p * std::exp(complexd(0.0, ph));
    }
  });

  double cmax = 0.0;
  for (const complexd& v : chi) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return 0.0;

  std::vector<double> worst(nt, 0.0);
  parallel_for(nt - 2, worker_threads(), [&](std::size_t kk) {
    const std::size_t it = kk + 1;
    const double tm = states[it - 1].gamma, t0 = states[it].gamma, tp = states[it + 1].gamma;
    const double wm = (t0 - tp) / ((tm - t0) * (tm - tp));
    const double w0 = (2.0 * t0 - tm - tp) / ((t0 - tm) * (t0 - tp));
    const double wp = (t0 - tm) / ((tp - tm) * (tp - t0));
    const complexd iu(0.0, 1.0);
    double w = 0.0;
    for (std::size_t k = 2; k + 2 < nxi; ++k) {
      const complexd c_0 = chi[it * nxi + k];
      const complexd ct =
          wm * chi[(it - 1) * nxi + k] + w0 * c_0 + wp * chi[(it + 1) * nxi + k];
      const complexd m2 = chi[it * nxi + k - 2], m1 = chi[it * nxi + k - 1];
      const complexd p1 = chi[it * nxi + k + 1], p2 = chi[it * nxi + k + 2];
      const complexd cxx =
          (-m2 + 16.0 * m1 - 30.0 * c_0 + 16.0 * p1 - p2) / (12.0 * hxi * hxi);
      const double xi = lo + hxi * static_cast<double>(k);
      const complexd r = -iu * ct + cxx - static_cast<double>(c0) * xi * xi * c_0;
      w = std::max(w, std::abs(r));
    }
    worst[it] = w;
  });
  double res = 0.0;
  for (double w : worst) res = std::max(res, w);
  return res / cmax;
}

std::vector<KernelState> kernel_trajectory(const FundamentalSolution& fund,
                                           const InitialData& init, int c0,
                                           std::span<const double> t_grid) {
  if (c0 != 0 && c0 != 1)
    throw std::invalid_argument("kernel_trajectory: c0 must be 0 or 1");
  std::vector<KernelState> out;
  out.reserve(t_grid.size());
  for (double tv : t_grid)
    out.push_back(c0 == 1 ? ermakov_map(fund, init, tv) : riccati_map(fund, init, tv));
  return out;
}

WaveField eigenstate_field(const FundamentalSolution& fund, const InitialData& init, int n,
                           double x_min, double x_max, std::size_t n_x,
                           std::span<const double> t_grid) {
  if (n < 0) throw std::invalid_argument("eigenstate_field: n must be nonnegative");
  WaveField wf = make_wave_field(x_min, x_max, n_x, t_grid, fund.coefficients().id(),
                                 "eigenstate " + std::to_string(n));
  std::vector<KernelState> states;
  states.reserve(wf.nt());
  for (double tv : wf.t) states.push_back(ermakov_map(fund, init, tv));
  parallel_for(wf.nt(), worker_threads(), [&](std::size_t it) {
    for (std::size_t ix = 0; ix < wf.nx(); ++ix)
      wf.at(it, ix) = eigenstate(n, states[it], wf.x[ix]);
  });
  return wf;
}

}  // namespace qho
