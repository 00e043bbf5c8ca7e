#pragma once

#include <span>

#include "qho/characteristic.hpp"
#include "qho/coefficients.hpp"

namespace qho {

// Values of (mu, alpha, beta, gamma, delta, epsilon, kappa) at t = 0.
// beta != 0 and mu > 0 are required by both superposition maps.
struct InitialData {
  double mu = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double kappa = 0.0;
};

// State of the transforming ansatz
//   psi = e^{i(alpha x^2 + delta x + kappa)} / sqrt(mu) * chi(beta x + epsilon, gamma)
// at time t; c0 identifies the autonomous target
//   -i chi_tau = -chi_xixi + c0 xi^2 chi.
struct KernelState {
  double t = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double kappa = 0.0;
  int c0 = 0;
};

// Nonlinear superposition for the c0 = 0 (Riccati-type) transport system:
// propagates arbitrary initial data along the fundamental solution.  The map
// degenerates at isolated times where alpha(0) + gamma0(t) vanishes.
KernelState riccati_map(const FundamentalSolution& fund, const InitialData& init, double t);

// Nonlinear superposition for the c0 = 1 (Ermakov-type) system.  Evaluated in
// caustic-safe form: every formula is multiplied through by mu0^2 so only the
// smooth products p = mu0 (alpha(0) + gamma0) and mu0 beta0 = -lambda appear,
// and the arc-tangent in gamma is unwound to a continuous branch.
KernelState ermakov_map(const FundamentalSolution& fund, const InitialData& init, double t);

// Pinney form of mu for the c0 = 1 system,
//   mu = mu(0) sqrt(beta^4(0) mu0^2 + (mu1 + mu'(0) mu0 / (2 mu(0) a(0)))^2),
// with mu'(0) = 2 mu(0) (2 a(0) alpha(0) + d(0)).  An independent route to
// ermakov_map(...).mu.
double mu_pinney(const CharacteristicSolution& sol, const InitialData& init,
                 const CoefficientSet& coeffs, double t);

// Max absolute residual of the Ermakov equation
//   mu'' - tau mu' + 4 sigma mu = (2a)^2 (beta(0) mu(0) lambda)^4 mu^{-3}
// along the mu_pinney trajectory, with five-point finite-difference
// derivatives.
double ermakov_residual(const CharacteristicSolution& sol, const CoefficientSet& coeffs,
                        const InitialData& init, std::span<const double> grid);

// Max absolute residual of the mapped state in the transport system with the
// given c0 (0 picks riccati_map, 1 picks ermakov_map); time derivatives by
// central differences of step cbrt(machine epsilon) * t.
double superposition_residual(const FundamentalSolution& fund, const InitialData& init, int c0,
                              std::span<const double> grid);

}  // namespace qho
