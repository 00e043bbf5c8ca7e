#include "qho/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>

#include "qho/characteristic.hpp"
#include "qho/observables.hpp"
#include "qho/parallel_for.hpp"
#include "qho/quantum.hpp"
#include "qho/superposition.hpp"
#include "qho/wavefield_io.hpp"

namespace qho {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double u01(std::uint64_t& state) {
  // splitmix64; deterministic and platform-independent.
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double state_distance(const KernelState& s, const InitialData& i) {
  double d = std::abs(s.mu - i.mu);
  d = std::max(d, std::abs(s.alpha - i.alpha));
  d = std::max(d, std::abs(s.beta - i.beta));
  d = std::max(d, std::abs(s.gamma - i.gamma));
  d = std::max(d, std::abs(s.delta - i.delta));
  d = std::max(d, std::abs(s.epsilon - i.epsilon));
  d = std::max(d, std::abs(s.kappa - i.kappa));
  return d;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

std::vector<CheckResult> verify_coefficients(const CoefficientSet& coeffs,
                                             std::uint64_t seed,
                                             VerifyArtifacts* artifacts) {
  std::vector<CheckResult> out;
  const auto add = [&](std::string name, double measured, double threshold,
                       std::string comparison = "<=", std::string note = "") {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.comparison = std::move(comparison);
    r.pass = std::isfinite(measured) &&
             (r.comparison == ">=" ? measured >= threshold : measured <= threshold);
    r.note = std::move(note);
    out.push_back(std::move(r));
  };
  const auto guarded = [&](const char* name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, kNan, 0.0, "<=", e.what());
    }
  };

  const double T = coeffs.t_end();
  auto sol_ptr =
      std::make_shared<const CharacteristicSolution>(solve_characteristic(coeffs, T));
  const CharacteristicSolution& sol = *sol_ptr;
  FundamentalSolution fund = fundamental_solution(sol_ptr);

  // Working window: clear of t=0, the first caustic, and (for driven systems)
  // the end of the drive-coefficient domain.
  double t_hi = T;
  if (!sol.caustics().empty()) t_hi = std::min(t_hi, sol.caustics().front());
  if (!coeffs.homogeneous()) t_hi = std::min(t_hi, sol.drive_end());
  const double t_top = 0.95 * t_hi;
  const double t_lo = std::max(0.02 * t_hi, 1e-3 * T);

  std::vector<double> grid(40);
  for (std::size_t k = 0; k < grid.size(); ++k)
    grid[k] = t_lo + (t_top - t_lo) * static_cast<double>(k) /
                         static_cast<double>(grid.size() - 1);

  const InitialData init{1.0, 0.1, 1.3, -0.2, 0.4, -0.3, 0.15};

  guarded("coefficient-derivatives", [&] {
    add("coefficient-derivatives", derivative_consistency(coeffs, 200, seed), 1e-5);
  });

  guarded("wronskian-abel", [&] {
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = T * static_cast<double>(k) / 50.0;
      const double w = sol.mu0_dot(t) * sol.mu1(t) - sol.mu0(t) * sol.mu1_dot(t);
      const double lam = sol.lambda(t);
      worst = std::max(worst, std::abs(w / (2.0 * coeffs.a(t) * lam * lam) - 1.0));
    }
    add("wronskian-abel", worst, 1e-8);
  });

  guarded("kernel-transport", [&] {
    add("kernel-transport", verify_riccati_residual(fund, grid), 1e-6);
  });

  guarded("superposition-oscillator", [&] {
    add("superposition-oscillator", superposition_residual(fund, init, 1, grid), 1e-6);
  });

  guarded("superposition-free", [&] {
    // The c0 = 0 map degenerates where p = mu0 (alpha(0) + gamma0) vanishes;
    // keep only grid points well clear of those times.
    const auto p_of = [&](double t) {
      return fund.mu0_gamma0(t) + init.alpha * sol.mu0(t);
    };
    std::vector<double> zeros;
    double prev_t = t_lo, prev_p = p_of(t_lo);
    for (int k = 1; k <= 400; ++k) {
      const double t = t_lo + (t_top - t_lo) * static_cast<double>(k) / 400.0;
      const double p = p_of(t);
      if (prev_p == 0.0 || (prev_p < 0.0) != (p < 0.0))
        zeros.push_back(0.5 * (prev_t + t));
      prev_t = t;
      prev_p = p;
    }
    std::vector<double> kept;
    for (double t : grid) {
      bool clear = true;
      for (double z : zeros)
        if (std::abs(t - z) < 0.04 * t_hi) clear = false;
      if (clear) kept.push_back(t);
    }
    if (kept.size() < 5) {
      add("superposition-free", kNan, 1e-6, "<=", "not enough degeneracy-free points");
      return;
    }
    add("superposition-free", superposition_residual(fund, init, 0, kept), 1e-6);
  });

  guarded("pinney-consistency", [&] {
    double worst = 0.0;
    for (double t : grid)
      worst = std::max(worst, std::abs(ermakov_map(fund, init, t).mu -
                                       mu_pinney(sol, init, coeffs, t)));
    add("pinney-consistency", worst, 1e-9);
  });

  guarded("ermakov-equation", [&] {
    add("ermakov-equation", ermakov_residual(sol, coeffs, init, grid), 1e-6);
  });

  guarded("small-time-continuity", [&] {
    const double s = std::min(1.0, T);
    double dist[2][3];
    for (int j = 0; j < 3; ++j) {
      const double t = s * std::pow(10.0, -2 - j);
      dist[0][j] = state_distance(ermakov_map(fund, init, t), init);
      dist[1][j] = state_distance(riccati_map(fund, init, t), init);
    }
    double order = 2.0;
    for (int m = 0; m < 2; ++m)
      for (int j = 0; j < 2; ++j) {
        if (dist[m][j + 1] == 0.0) continue;
        order = std::min(order, std::log10(dist[m][j] / dist[m][j + 1]));
      }
    add("small-time-continuity", order, 0.9, ">=");
  });

  // Shared field: an equal-weight mix of the n = 0 and n = 1 states, which
  // keeps the norm law intact and gives the observables a nontrivial xi_bar.
  const InitialData finit{1.0, 0.0, 1.0, 0.0, 0.25, 0.3, 0.0};
  WaveField wf;
  std::vector<KernelState> states;
  Trajectory traj;
  ArnoldData arnold;
  bool field_ok = false;

  guarded("field-setup", [&] {
    // 160 slices keep the 2nd-order t-truncation of the field residuals well
    // under the 1e-3 gates even when the caustic-free window spans ~3 units.
    std::vector<double> tgrid(160);
    for (std::size_t k = 0; k < tgrid.size(); ++k)
      tgrid[k] = t_lo + (t_top - t_lo) * static_cast<double>(k) /
                            static_cast<double>(tgrid.size() - 1);
    states = kernel_trajectory(fund, finit, 1, tgrid);
    double xr = (9.5 + std::abs(finit.epsilon)) / std::abs(finit.beta);
    for (const KernelState& st : states)
      xr = std::max(xr, (9.5 + std::abs(st.epsilon)) / std::abs(st.beta));
    xr = std::min(xr, 60.0);
    wf = make_wave_field(-xr, xr, 512, tgrid, coeffs.id(), "verify mix");
    const double r2 = 1.0 / std::sqrt(2.0);
    parallel_for(wf.nt(), effective_threads(), [&](std::size_t it) {
      const KernelState& st = states[it];
      for (std::size_t ix = 0; ix < wf.nx(); ++ix)
        wf.at(it, ix) =
            r2 * (eigenstate(0, st, wf.x[ix]) + eigenstate(1, st, wf.x[ix]));
    });
    field_ok = true;
  });

  if (field_ok) {
    guarded("norm-law", [&] {
      traj = expectation_x(wf);
      double worst = 0.0;
      for (std::size_t it = 0; it < wf.nt(); ++it) {
        const double expected =
            1.0 / (finit.beta * finit.mu * sol.lambda(wf.t[it]));
        worst = std::max(worst, std::abs(traj.norm[it] / expected - 1.0));
      }
      add("norm-law", worst, 1e-6);
    });

    guarded("schrodinger-field", [&] {
      add("schrodinger-field", schrodinger_residual(wf, coeffs), 1e-3);
    });

    guarded("autonomous-frame", [&] {
      add("autonomous-frame", autonomous_residual(wf, states, 1), 1e-3);
    });

    guarded("ehrenfest", [&] {
      if (traj.t_grid.empty()) traj = expectation_x(wf);
      add("ehrenfest", ehrenfest_residual(traj, coeffs), 1e-4);
    });

    guarded("arnold-normal-form", [&] {
      if (traj.t_grid.empty()) traj = expectation_x(wf);
      arnold = arnold_transform(traj, states);
      add("arnold-normal-form",
          harmonic_normal_form_residual(arnold.xi_bar, arnold.tau, 1), 1e-3);
    });

    guarded("xi-consistency", [&] {
      if (arnold.xi_bar.empty()) {
        if (traj.t_grid.empty()) traj = expectation_x(wf);
        arnold = arnold_transform(traj, states);
      }
      const std::vector<double> direct = xi_expectation_direct(wf, states);
      double worst = 0.0;
      for (std::size_t i = 0; i < direct.size(); ++i)
        worst = std::max(worst, std::abs(direct[i] - arnold.xi_bar[i]));
      add("xi-consistency", worst, 1e-5);
    });

    guarded("propagator-roundtrip", [&] {
      KernelState st0;
      st0.t = 0.0;
      st0.mu = finit.mu;
      st0.alpha = finit.alpha;
      st0.beta = finit.beta;
      st0.gamma = finit.gamma;
      st0.delta = finit.delta;
      st0.epsilon = finit.epsilon;
      st0.kappa = finit.kappa;
      st0.c0 = 1;
      WaveSlice slice0;
      slice0.t = 0.0;
      slice0.x = wf.x;
      slice0.psi.resize(wf.nx());
      const double r2 = 1.0 / std::sqrt(2.0);
      for (std::size_t ix = 0; ix < wf.nx(); ++ix)
        slice0.psi[ix] =
            r2 * (eigenstate(0, st0, wf.x[ix]) + eigenstate(1, st0, wf.x[ix]));
      const std::size_t mid = (wf.nt() * 3) / 5;
      const WaveSlice prop = propagate(fund, slice0, wf.x, wf.t[mid]);
      double worst = 0.0;
      for (std::size_t ix = 0; ix < wf.nx(); ++ix)
        worst = std::max(worst, std::abs(prop.psi[ix] - wf.at(mid, ix)));
      add("propagator-roundtrip", worst, 1e-6);
    });
  }

  guarded("gauss-transform", [&] {
    std::uint64_t rng = seed ^ 0xa5a5a5a5deadbeefull;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const int n = static_cast<int>(u01(rng) * 8.999);
      const double lam = 0.6 + 1.6 * u01(rng);
      const double a = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.1 + 0.85 * u01(rng)) * lam;
      const double x = -2.0 + 4.0 * u01(rng);
      const auto [lhs, rhs] = gauss_hermite_transform(n, lam, a, x);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    add("gauss-transform", worst, 1e-9);
  });

  const auto asymp_check = [&](const char* name, double t, double threshold) {
    guarded(name, [&] {
      const double pairs[3][2] = {{0.3, -0.2}, {0.7, 0.1}, {-0.5, 0.4}};
      double worst = 0.0;
      for (const auto& p : pairs) {
        const complexd ratio =
            greens(fund, p[0], p[1], t) / greens_asymptotic(coeffs, p[0], p[1], t);
        worst = std::max(worst, std::abs(ratio - 1.0));
      }
      add(name, worst, threshold);
    });
  };
  asymp_check("kernel-asymptotics-coarse", std::min(1e-2, 0.1 * t_hi), 5e-2);
  asymp_check("kernel-asymptotics-fine", std::min(1e-3, 0.01 * t_hi), 5e-3);

  guarded("determinism", [&] {
    if (!field_ok || traj.t_grid.empty() || arnold.xi_bar.empty()) {
      add("determinism", kNan, 0.5, "<=", "field checks did not run");
      return;
    }
    const std::string multi =
        trajectory_csv(traj, arnold.xi_bar, arnold.tau) + kernel_states_csv(wf.t, states);
    const unsigned saved = configured_thread_count();
    set_thread_count(1);
    WaveField wf1 = make_wave_field(wf.x.front(), wf.x.back(), wf.nx(),
                                    wf.t, coeffs.id(), "verify mix");
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t it = 0; it < wf1.nt(); ++it)
      for (std::size_t ix = 0; ix < wf1.nx(); ++ix)
        wf1.at(it, ix) =
            r2 * (eigenstate(0, states[it], wf1.x[ix]) + eigenstate(1, states[it], wf1.x[ix]));
    const Trajectory traj1 = expectation_x(wf1);
    const ArnoldData arnold1 = arnold_transform(traj1, states);
    const std::string single =
        trajectory_csv(traj1, arnold1.xi_bar, arnold1.tau) + kernel_states_csv(wf1.t, states);
    set_thread_count(saved);
    add("determinism", multi == single ? 0.0 : 1.0, 0.5);
  });

  if (artifacts != nullptr) {
    artifacts->fundamental_csv = fundamental_csv(fund, grid);
    if (field_ok) {
      artifacts->states_csv = kernel_states_csv(wf.t, states);
      if (traj.t_grid.empty()) traj = expectation_x(wf);
      if (arnold.xi_bar.empty()) arnold = arnold_transform(traj, states);
      artifacts->trajectory_csv = trajectory_csv(traj, arnold.xi_bar, arnold.tau);
    }
  }

  return out;
}

}  // namespace qho
