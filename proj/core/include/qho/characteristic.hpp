#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qho/coefficients.hpp"
#include "qho/ode.hpp"

namespace qho {

// Standard solutions of the characteristic equation
//   mu'' - tau(t) mu' + 4 sigma(t) mu = 0
// with mu0(0)=0, mu0'(0)=2a(0) and mu1(0)=1, mu1'(0)=0, together with the
// gauge factor lambda(t) = exp(-int_0^t (c-2d)) and the kernel quadratures.
// Everything is carried by one dense-output integration so values and first
// derivatives are available at any t in [0, T].
class CharacteristicSolution {
 public:
  double T() const { return T_; }
  double tolerance() const { return tol_; }
  const CoefficientSet& coefficients() const { return *coeffs_; }
  std::shared_ptr<const CoefficientSet> coefficients_ptr() const { return coeffs_; }

  double mu0(double t) const { return lin_.eval_component(t, 0); }
  double mu0_dot(double t) const { return lin_.eval_component(t, 1); }
  double mu1(double t) const { return lin_.eval_component(t, 2); }
  double mu1_dot(double t) const { return lin_.eval_component(t, 3); }
  double lambda(double t) const;
  // I(t) = int_0^t [(f - d g/a) mu0 + g mu0'/(2a)] / lambda ds, so that
  // mu0(t) delta0(t) = lambda(t) I(t) stays smooth through caustics.
  double delta0_integral(double t) const { return lin_.eval_component(t, 5); }

  // Zeros of mu0 (resp. mu0') in (0, T], located by bisection.
  const std::vector<double>& caustics() const { return caustics_; }
  const std::vector<double>& turning_points() const { return turning_; }

  // Number of caustics strictly below t.
  int maslov_index(double t) const;
  // Distance guard: true when t is within the caustic tolerance of a zero.
  bool at_caustic(double t) const;
  void require_clear_of_caustics(double t, const char* what) const;

  // Start of the drive integration and end of its validity (first caustic for
  // driven systems, T otherwise).
  double drive_start() const { return t0_; }
  double drive_end() const { return inhom_end_; }

 private:
  friend CharacteristicSolution solve_characteristic(const CoefficientSet&, double, double);
  friend class FundamentalSolution;

  CharacteristicSolution() = default;

  std::shared_ptr<const CoefficientSet> coeffs_;
  double T_ = 0.0;
  double tol_ = 0.0;
  double t0_ = 0.0;          // 1e-6 * T
  double inhom_end_ = 0.0;   // validity end for epsilon0/kappa0
  double caustic_guard_ = 0.0;
  DenseSolution lin_;        // mu0, mu0', mu1, mu1', L = int(c-2d), I
  DenseSolution inhom_;      // epsilon0, kappa0 from t0 (driven systems only)
  std::vector<double> caustics_;
  std::vector<double> turning_;
  // t -> 0+ limits and slopes of the drive coefficients.
  double delta0_limit_ = 0.0, delta0_slope_ = 0.0;
  double epsilon0_limit_ = 0.0, epsilon0_slope_ = 0.0;
  double kappa0_slope_ = 0.0;
};

CharacteristicSolution solve_characteristic(const CoefficientSet& coeffs, double T,
                                            double tol = 1e-10);

// Kernel coefficients of the fundamental solution
//   G = (2 pi i mu0)^{-1/2} exp(i(alpha0 x^2 + beta0 x y + gamma0 y^2
//                                 + delta0 x + epsilon0 y + kappa0)).
class FundamentalSolution {
 public:
  explicit FundamentalSolution(std::shared_ptr<const CharacteristicSolution> sol);

  const CharacteristicSolution& characteristic() const { return *sol_; }
  std::shared_ptr<const CharacteristicSolution> characteristic_ptr() const { return sol_; }
  const CoefficientSet& coefficients() const { return sol_->coefficients(); }

  double alpha0(double t) const;
  double beta0(double t) const;
  double gamma0(double t) const;
  double delta0(double t) const;
  double epsilon0(double t) const;
  double kappa0(double t) const;

  // Smooth caustic-safe products: mu0*gamma0 and its derivative, mu0*delta0.
  double mu0_gamma0(double t) const;
  double mu0_gamma0_dot(double t) const;
  double mu0_delta0(double t) const;

 private:
  void require_time(double t, const char* what) const;
  void require_drive_range(double t, const char* what) const;

  std::shared_ptr<const CharacteristicSolution> sol_;
  double d0_over_2a0_;
};

FundamentalSolution fundamental_solution(const CharacteristicSolution& sol);
FundamentalSolution fundamental_solution(std::shared_ptr<const CharacteristicSolution> sol);

// Leading small-t behavior of the kernel coefficients.
double asymp_alpha0(const CoefficientSet& coeffs, double t);
double asymp_beta0(const CoefficientSet& coeffs, double t);
double asymp_gamma0(const CoefficientSet& coeffs, double t);
double asymp_delta0(const CoefficientSet& coeffs);
double asymp_epsilon0(const CoefficientSet& coeffs);

// Max absolute residual of (alpha0..kappa0) in the kernel system (c0 = 0)
// over the grid, with time derivatives by central differences of step
// cbrt(machine epsilon) * t.
double verify_riccati_residual(const FundamentalSolution& fund, std::span<const double> grid);

// Closed quadrature cross-checks for the drive coefficients; valid while
// mu0' != 0 on (0, t], i.e. below the first turning point.
double epsilon0_quadrature(const FundamentalSolution& fund, double t);
double kappa0_quadrature(const FundamentalSolution& fund, double t);

}  // namespace qho
