// Acceptance suite: one line per criterion, exit status = number of failures.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "qho/characteristic.hpp"
#include "qho/coefficients.hpp"
#include "qho/errors.hpp"
#include "qho/observables.hpp"
#include "qho/parallel_for.hpp"
#include "qho/quantum.hpp"
#include "qho/superposition.hpp"
#include "qho/verify.hpp"
#include "test_support.hpp"

namespace {

using qho::complexd;
using qho::InitialData;
using qho::KernelState;
using qhotest::linspace;

constexpr double kPi = std::numbers::pi;
constexpr InitialData kStandard{1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
constexpr InitialData kGeneric{1.3, 0.12, 0.9, 0.0, 0.25, -0.2, 0.1};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& s, double lo, double hi) {
  const double u = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

qho::CoefficientSet preset(const std::string& name, double t_end,
                           std::map<std::string, double> params = {}) {
  return qho::make_preset({.name = name, .params = std::move(params), .samples_csv = {}},
                          t_end);
}

// Sample grid on the caustic-free (and, for driven systems, drive-covered)
// part of [0, T], matching the windowing of the verify suite.
struct Window {
  double t_hi, t_lo, t_top;
  std::vector<double> grid;
};

Window safe_window(const qho::CharacteristicSolution& sol, const qho::CoefficientSet& coeffs,
                   double T, std::size_t n = 40) {
  Window w;
  w.t_hi = T;
  if (!sol.caustics().empty()) w.t_hi = std::min(w.t_hi, sol.caustics().front());
  if (!coeffs.homogeneous()) w.t_hi = std::min(w.t_hi, sol.drive_end());
  w.t_top = 0.95 * w.t_hi;
  w.t_lo = std::max(0.02 * w.t_hi, 1e-3 * T);
  w.grid.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    w.grid[k] = w.t_lo + (w.t_top - w.t_lo) * static_cast<double>(k) /
                             static_cast<double>(n - 1);
  return w;
}

// Drops grid points near zeros of p = mu0 (alpha(0) + gamma0), where the
// c0 = 0 map degenerates.
std::vector<double> degeneracy_filtered(const qho::FundamentalSolution& fund,
                                        const qho::CharacteristicSolution& sol,
                                        const InitialData& init, const Window& w) {
  const auto p_of = [&](double t) { return fund.mu0_gamma0(t) + init.alpha * sol.mu0(t); };
  std::vector<double> zeros;
  double prev_t = w.t_lo, prev_p = p_of(w.t_lo);
  for (int k = 1; k <= 400; ++k) {
    const double t = w.t_lo + (w.t_top - w.t_lo) * static_cast<double>(k) / 400.0;
    const double p = p_of(t);
    if (prev_p == 0.0 || (prev_p < 0.0) != (p < 0.0)) zeros.push_back(0.5 * (prev_t + t));
    prev_t = t;
    prev_p = p;
  }
  std::vector<double> kept;
  for (double t : w.grid) {
    bool clear = true;
    for (double z : zeros)
      if (std::abs(t - z) < 0.04 * w.t_hi) clear = false;
    if (clear) kept.push_back(t);
  }
  return kept;
}

KernelState state_at_zero(const InitialData& init) {
  KernelState st;
  st.t = 0.0;
  st.mu = init.mu;
  st.alpha = init.alpha;
  st.beta = init.beta;
  st.gamma = init.gamma;
  st.delta = init.delta;
  st.epsilon = init.epsilon;
  st.kappa = init.kappa;
  st.c0 = 1;
  return st;
}

qho::WaveSlice initial_slice(int n, double x_lo, double x_hi, std::size_t npts) {
  const KernelState st = state_at_zero(kStandard);
  qho::WaveSlice s;
  s.t = 0.0;
  s.x = linspace(x_lo, x_hi, npts);
  s.psi.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) s.psi[i] = qho::eigenstate(n, st, s.x[i]);
  return s;
}

qho::WaveField propagated_field(const qho::FundamentalSolution& fund, int n,
                                std::size_t nt) {
  const std::vector<double> tg = linspace(0.05, 1.0, nt);
  qho::WaveField f = qho::make_wave_field(-8.0, 8.0, 512, tg, "acceptance", "propagated");
  const qho::WaveSlice s0 = initial_slice(n, -10.0, 10.0, 801);
  for (std::size_t it = 0; it < nt; ++it) {
    const qho::WaveSlice out = qho::propagate(fund, s0, f.x, tg[it]);
    std::copy(out.psi.begin(), out.psi.end(), f.values.begin() + it * f.nx());
  }
  return f;
}

qho::WaveField mix_field(const qho::FundamentalSolution& fund, std::span<const double> tg,
                         double x_lo, double x_hi, std::size_t nx,
                         std::vector<KernelState>* states_out) {
  qho::WaveField f = qho::make_wave_field(x_lo, x_hi, nx, tg, "acceptance", "mix");
  std::vector<KernelState> states = qho::kernel_trajectory(fund, kStandard, 1, tg);
  const double w = 1.0 / std::sqrt(2.0);
  for (std::size_t it = 0; it < f.nt(); ++it)
    for (std::size_t ix = 0; ix < f.nx(); ++ix)
      f.at(it, ix) = w * (qho::eigenstate(0, states[it], f.x[ix]) +
                          qho::eigenstate(1, states[it], f.x[ix]));
  if (states_out) *states_out = std::move(states);
  return f;
}

double max_component_diff(const KernelState& st, const InitialData& init) {
  double d = std::abs(st.mu - init.mu);
  d = std::max(d, std::abs(st.alpha - init.alpha));
  d = std::max(d, std::abs(st.beta - init.beta));
  d = std::max(d, std::abs(st.gamma - init.gamma));
  d = std::max(d, std::abs(st.delta - init.delta));
  d = std::max(d, std::abs(st.epsilon - init.epsilon));
  d = std::max(d, std::abs(st.kappa - init.kappa));
  return d;
}

}  // namespace

int main() {
  int failures = 0;
  const auto criterion = [&](int idx, const char* name, auto&& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%2d] %-34s %-56s %s\n", idx, name, detail.c_str(), ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  criterion(1, "closed-form fundamental data", [&](std::string& detail) {
    double worst = 0.0;
    const auto rel = [&](double num, double ana) {
      worst = std::max(worst, std::abs(num - ana) / std::max(std::abs(ana), 1e-14));
    };
    {
      const auto coeffs = preset("free", 4.0);
      const auto sol = qho::solve_characteristic(coeffs, 4.0);
      const auto fund = qho::fundamental_solution(sol);
      for (double t : linspace(0.05, 4.0, 50)) {
        rel(sol.mu0(t), t);
        rel(sol.mu1(t), 1.0);
        rel(sol.lambda(t), 1.0);
        rel(fund.alpha0(t), 1.0 / (2.0 * t));
        rel(fund.beta0(t), -1.0 / t);
        rel(fund.gamma0(t), 1.0 / (2.0 * t));
      }
    }
    {
      const auto coeffs = preset("sho", 2.9);
      const auto sol = qho::solve_characteristic(coeffs, 2.9);
      const auto fund = qho::fundamental_solution(sol);
      for (double t : linspace(0.05, 2.85, 50)) {
        rel(sol.mu0(t), std::sin(t));
        rel(sol.mu1(t), std::cos(t));
        rel(sol.lambda(t), 1.0);
        rel(fund.alpha0(t), std::cos(t) / (2.0 * std::sin(t)));
        rel(fund.beta0(t), -1.0 / std::sin(t));
        rel(fund.gamma0(t), std::cos(t) / (2.0 * std::sin(t)));
      }
    }
    detail = fmt("max rel err %.3g (limit 1e-8), 50 pts per preset", worst);
    return worst < 1e-8;
  });

  criterion(2, "transport-system residuals", [&](std::string& detail) {
    std::vector<qho::CoefficientSet> sets;
    sets.push_back(preset("free", 3.0));
    sets.push_back(preset("sho", 3.0));
    sets.push_back(preset("driven-sho", 3.0, {{"force", 0.3}}));
    sets.push_back(preset("damped", 3.0));
    for (std::uint64_t seed = 101; seed <= 105; ++seed)
      sets.push_back(qho::random_smooth_coefficients(seed, 2.0));
    double worst = 0.0;
    std::size_t grids = 0;
    for (const auto& coeffs : sets) {
      const double T = coeffs.t_end();
      const auto sol = qho::solve_characteristic(coeffs, T);
      const auto fund = qho::fundamental_solution(sol);
      const Window w = safe_window(sol, coeffs, T);
      const std::vector<double> kept = degeneracy_filtered(fund, sol, kGeneric, w);
      if (kept.size() >= 5) {
        worst = std::max(worst, qho::superposition_residual(fund, kGeneric, 0, kept));
        ++grids;
      }
      worst = std::max(worst, qho::superposition_residual(fund, kGeneric, 1, w.grid));
      ++grids;
    }
    detail = fmt("max residual %.3g over %.0f grids (limit 1e-6)", worst,
                 static_cast<double>(grids));
    return worst < 1e-6 && grids >= 13;
  });

  criterion(3, "mu routes + Ermakov equation", [&](std::string& detail) {
    double mu_diff = 0.0, eq_res = 0.0;
    for (const char* name : {"sho", "damped", "free"}) {
      const auto coeffs = preset(name, 3.0);
      const auto sol = qho::solve_characteristic(coeffs, 3.0);
      const auto fund = qho::fundamental_solution(sol);
      const Window w = safe_window(sol, coeffs, 3.0);
      for (double t : w.grid)
        mu_diff = std::max(mu_diff, std::abs(qho::ermakov_map(fund, kGeneric, t).mu -
                                             qho::mu_pinney(sol, kGeneric, coeffs, t)));
      eq_res = std::max(eq_res, qho::ermakov_residual(sol, coeffs, kGeneric, w.grid));
    }
    detail = fmt("mu %.3g (limit 1e-9), equation %.3g (limit 1e-6)", mu_diff, eq_res);
    return mu_diff < 1e-9 && eq_res < 1e-6;
  });

  criterion(4, "small-time continuity", [&](std::string& detail) {
    const auto coeffs = preset("sho", 2.8);
    const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 2.8));
    double min_order = 1e9;
    for (int c0 : {0, 1}) {
      double d[3];
      for (int k = 0; k < 3; ++k) {
        const double t = std::pow(10.0, -2 - k);
        const KernelState st = c0 == 0 ? qho::riccati_map(fund, kGeneric, t)
                                       : qho::ermakov_map(fund, kGeneric, t);
        d[k] = max_component_diff(st, kGeneric);
      }
      min_order = std::min({min_order, std::log10(d[0] / d[1]), std::log10(d[1] / d[2])});
    }
    detail = fmt("observed order %.3f (limit 0.9)", min_order);
    return min_order >= 0.9;
  });

  criterion(5, "PDE residual on default grid", [&](std::string& detail) {
    const auto sho = preset("sho", 1.5);
    const auto sho_fund = qho::fundamental_solution(qho::solve_characteristic(sho, 1.5));
    const auto driven = preset("driven-sho", 1.5, {{"force", 0.3}});
    const auto driven_fund =
        qho::fundamental_solution(qho::solve_characteristic(driven, 1.5));

    const std::vector<double> t64 = linspace(0.05, 1.0, 64);
    const qho::WaveField eig64 =
        qho::eigenstate_field(sho_fund, kStandard, 2, -8.0, 8.0, 512, t64);
    const double res_eig64 = qho::schrodinger_residual(eig64, sho);

    const qho::WaveField eig128 = qho::eigenstate_field(sho_fund, kStandard, 2, -8.0, 8.0,
                                                        512, linspace(0.05, 1.0, 128));
    const qho::WaveField eig256 = qho::eigenstate_field(sho_fund, kStandard, 2, -8.0, 8.0,
                                                        512, linspace(0.05, 1.0, 256));
    const double res_eig128 = qho::schrodinger_residual(eig128, sho);
    const double res_eig256 = qho::schrodinger_residual(eig256, sho);

    const double res_prop64 =
        qho::schrodinger_residual(propagated_field(sho_fund, 2, 64), sho);
    const double res_prop128 =
        qho::schrodinger_residual(propagated_field(sho_fund, 2, 128), sho);
    const double res_drv64 =
        qho::schrodinger_residual(propagated_field(driven_fund, 1, 64), driven);

    const double worst64 = std::max({res_eig64, res_prop64, res_drv64});
    const double r1 = res_eig64 / res_eig128;
    const double r2 = res_eig128 / res_eig256;
    const double r3 = res_prop64 / res_prop128;
    detail = fmt("max %.3g (limit 1e-3), refinement ratios %.2f/%.2f", worst64,
                 std::min({r1, r2, r3}), r2);
    return worst64 < 1e-3 && r1 > 3.0 && r2 > 3.0 && r3 > 3.0;
  });

  criterion(6, "propagator round trip", [&](std::string& detail) {
    double worst = 0.0;
    const std::vector<double> x_out = linspace(-6.0, 6.0, 241);
    for (const char* name : {"sho", "driven-sho"}) {
      const auto coeffs =
          preset(name, 3.0, std::string(name) == "driven-sho"
                                ? std::map<std::string, double>{{"force", 0.3}}
                                : std::map<std::string, double>{});
      const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 3.0));
      const KernelState st = qho::ermakov_map(fund, kStandard, 1.1);
      for (int n = 0; n <= 3; ++n) {
        const qho::WaveSlice got =
            qho::propagate(fund, initial_slice(n, -10.0, 10.0, 801), x_out, 1.1);
        for (std::size_t i = 0; i < x_out.size(); ++i)
          worst = std::max(worst, std::abs(got.psi[i] - qho::eigenstate(n, st, x_out[i])));
      }
    }
    detail = fmt("max pointwise err %.3g (limit 1e-6), n=0..3", worst);
    return worst < 1e-6;
  });

  criterion(7, "Gauss-Hermite transform", [&](std::string& detail) {
    std::uint64_t rng = 0x5161E5ull;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int n = static_cast<int>(splitmix64(rng) % 9);
      const double lam = uniform(rng, 0.6, 2.4);
      const double a = lam * uniform(rng, -0.9, 0.9);
      const double x = uniform(rng, -2.0, 2.0);
      const auto [lhs, rhs] = qho::gauss_hermite_transform(n, lam, a, x);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    detail = fmt("max rel err %.3g (limit 1e-9), 20 triples, n<=8", worst);
    return worst < 1e-9;
  });

  criterion(8, "norm law", [&](std::string& detail) {
    double worst = 0.0;
    const auto check_norms = [&](const qho::CoefficientSet& coeffs, const InitialData& init,
                                 double x_half, std::span<const double> tg) {
      const auto sol = qho::solve_characteristic(coeffs, coeffs.t_end());
      const auto fund = qho::fundamental_solution(sol);
      const qho::WaveField f =
          qho::eigenstate_field(fund, init, 1, -x_half, x_half, 512, tg);
      const qho::Trajectory traj = qho::expectation_x(f);
      for (std::size_t k = 0; k < tg.size(); ++k) {
        const double law = 1.0 / (init.beta * init.mu * sol.lambda(tg[k]));
        worst = std::max(worst, std::abs(traj.norm[k] - law));
      }
    };
    const std::vector<double> tg = linspace(0.2, 1.6, 8);
    check_norms(qhotest::mixed_set(1.75), kStandard, 18.0, tg);
    InitialData scaled = kStandard;
    scaled.mu = 1.21;
    scaled.beta = 0.9;
    check_norms(qhotest::mixed_set(1.75), scaled, 18.0, tg);

    // Hermitian gauge d = c/2: lambda is identically 1 and the norm freezes.
    qho::CoefficientSet::Parts p;
    p.a = [](double) { return 0.5; };
    p.b = [](double) { return 0.4; };
    p.c = [](double t) { return 0.3 * std::sin(t); };
    p.d = [](double t) { return 0.15 * std::sin(t); };
    p.f = [](double) { return 0.0; };
    p.g = [](double) { return 0.0; };
    p.a_dot = [](double) { return 0.0; };
    p.c_dot = [](double t) { return 0.3 * std::cos(t); };
    p.d_dot = [](double t) { return 0.15 * std::cos(t); };
    p.g_dot = [](double) { return 0.0; };
    const qho::CoefficientSet hermitian(std::move(p), 2.0, true, "hermitian-gauge");
    double worst_h = 0.0;
    {
      const auto sol = qho::solve_characteristic(hermitian, 2.0);
      const auto fund = qho::fundamental_solution(sol);
      const std::vector<double> tg2 = linspace(0.2, 1.9, 8);
      const qho::WaveField f =
          qho::eigenstate_field(fund, kStandard, 1, -14.0, 14.0, 512, tg2);
      const qho::Trajectory traj = qho::expectation_x(f);
      for (double nrm : traj.norm) worst_h = std::max(worst_h, std::abs(nrm - 1.0));
    }
    worst = std::max(worst, worst_h);
    detail = fmt("max |norm - 1/(beta mu lambda)| %.3g (limit 1e-6)", worst);
    return worst < 1e-6;
  });

  criterion(9, "Green's function asymptotics", [&](std::string& detail) {
    const std::vector<std::pair<double, double>> pairs = {{0.3, -0.2}, {0.7, 0.1},
                                                          {-0.5, 0.4}};
    double coarse = 0.0, fine = 0.0;
    for (int which = 0; which < 2; ++which) {
      const qho::CoefficientSet coeffs =
          which == 0 ? qhotest::mixed_set(1.75) : preset("damped", 1.75);
      const auto fund =
          qho::fundamental_solution(qho::solve_characteristic(coeffs, 1.75));
      for (const auto& [x, y] : pairs) {
        const complexd g2 = qho::greens(fund, x, y, 1e-2);
        const complexd a2 = qho::greens_asymptotic(coeffs, x, y, 1e-2);
        coarse = std::max(coarse, std::abs(g2 / a2 - 1.0));
        const complexd g3 = qho::greens(fund, x, y, 1e-3);
        const complexd a3 = qho::greens_asymptotic(coeffs, x, y, 1e-3);
        fine = std::max(fine, std::abs(g3 / a3 - 1.0));
      }
    }
    detail = fmt("t=1e-2: %.3g (limit 5e-2); t=1e-3: %.3g (limit 5e-3)", coarse, fine);
    return coarse < 5e-2 && fine < 5e-3;
  });

  criterion(10, "Ehrenfest + Arnold normal form", [&](std::string& detail) {
    const auto coeffs = preset("sho", 6.4);
    const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 6.4));
    InitialData displaced = kStandard;
    displaced.epsilon = 0.3;
    const std::vector<double> tg = linspace(0.05, 6.3, 128);
    const qho::WaveField f =
        qho::eigenstate_field(fund, displaced, 0, -9.0, 9.0, 512, tg);
    const qho::Trajectory traj = qho::expectation_x(f);
    const double ehr = qho::ehrenfest_residual(traj, coeffs);
    double xbar_err = 0.0;
    for (std::size_t k = 0; k < tg.size(); ++k)
      xbar_err = std::max(xbar_err, std::abs(traj.xbar[k] + 0.3 * std::cos(tg[k])));

    const auto mix_coeffs = preset("sho", 3.0);
    const auto mix_fund =
        qho::fundamental_solution(qho::solve_characteristic(mix_coeffs, 3.0));
    const std::vector<double> tg2 = linspace(0.1, 2.6, 128);
    std::vector<KernelState> states;
    const qho::WaveField mixed = mix_field(mix_fund, tg2, -9.0, 9.0, 512, &states);
    const qho::ArnoldData arnold = qho::arnold_transform(qho::expectation_x(mixed), states);
    const double nf = qho::harmonic_normal_form_residual(arnold.xi_bar, arnold.tau, 1);

    detail = fmt("ehrenfest %.3g (1e-4), normal form %.3g (1e-3), xbar %.3g (1e-6)", ehr,
                 nf, xbar_err);
    return ehr < 1e-4 && nf < 1e-3 && xbar_err < 1e-6;
  });

  criterion(11, "deterministic verify artifacts", [&](std::string& detail) {
    const auto coeffs = preset("sho", 2.8);
    const unsigned configured = qho::configured_thread_count();
    qho::VerifyArtifacts art[3];
    std::vector<qho::CheckResult> reports[3];
    const unsigned threads[3] = {configured, 1, 4};
    for (int k = 0; k < 3; ++k) {
      qho::set_thread_count(threads[k]);
      reports[k] = qho::verify_coefficients(coeffs, 20260819ull, &art[k]);
    }
    qho::set_thread_count(configured);
    bool identical = true;
    for (int k = 1; k < 3; ++k)
      identical = identical && art[k].fundamental_csv == art[0].fundamental_csv &&
                  art[k].states_csv == art[0].states_csv &&
                  art[k].trajectory_csv == art[0].trajectory_csv;
    bool all_pass = true;
    for (const auto& r : reports[0]) all_pass = all_pass && r.pass;
    detail = std::string("3 runs x 3 artifacts byte-identical: ") +
             (identical ? "yes" : "NO") + "; verify checks: " +
             (all_pass ? "all pass" : "FAILURES");
    return identical && all_pass;
  });

  std::printf("acceptance: %d/11 criteria passed\n", 11 - failures);
  return failures;
}
