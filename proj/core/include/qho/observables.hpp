#pragma once

#include <span>
#include <vector>

#include "qho/quantum.hpp"

namespace qho {

// Per-slice coordinate expectation values of a wave field.
struct Trajectory {
  std::vector<double> t_grid;
  std::vector<double> xbar;  // <x> / <1>
  std::vector<double> norm;  // <1>
};

// xbar = <psi, x psi> / <psi, psi> by composite quadrature per time slice.
// Requires the field to decay below 1e-10 of its slice maximum at the x
// boundaries, and a positive norm on every slice.
Trajectory expectation_x(const WaveField& field);

// Finite-difference residual of the classical equation of motion
//   xbar'' - (a'/a) xbar' + (4ab - c^2 + c a'/a - c') xbar
//     = 2af - g' + g a'/a - cg,
// maximized over interior slices of a uniform t grid with >= 5 slices.
double ehrenfest_residual(const Trajectory& traj, const CoefficientSet& coeffs);

// Expectation values mapped to the autonomous frame: xi_bar = beta xbar + eps,
// tau = gamma, sampled on the trajectory's t grid.
struct ArnoldData {
  std::vector<double> xi_bar;
  std::vector<double> tau;
};

ArnoldData arnold_transform(const Trajectory& traj, std::span<const KernelState> states);

// Max |d^2 xi_bar / d tau^2 + 4 c0 xi_bar| over interior samples, with
// three-point divided differences on the (generically non-uniform) tau grid.
double harmonic_normal_form_residual(std::span<const double> xi_bar,
                                     std::span<const double> tau, int c0);

// Independent route to xi_bar: resample chi = sqrt(mu) e^{-i(...)} psi on a
// uniform xi grid per slice and integrate <chi, xi chi> / <chi, chi> there.
std::vector<double> xi_expectation_direct(const WaveField& field,
                                          std::span<const KernelState> states);

}  // namespace qho
