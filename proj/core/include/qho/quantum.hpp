#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qho/characteristic.hpp"
#include "qho/superposition.hpp"

namespace qho {

using complexd = std::complex<double>;

// Complex wave samples on a uniform x grid and a strictly increasing t grid,
// stored time-major: values[it * nx + ix].
struct WaveField {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<complexd> values;
  std::string preset_id;
  std::string label;  // "eigenstate n" | "propagated" | "greens-slice"

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
  complexd& at(std::size_t it, std::size_t ix) { return values[it * x.size() + ix]; }
  const complexd& at(std::size_t it, std::size_t ix) const { return values[it * x.size() + ix]; }
  std::span<const complexd> slice(std::size_t it) const {
    return std::span<const complexd>(values).subspan(it * x.size(), x.size());
  }
};

// Validates the grid conventions (n_x >= 16, strictly increasing grids) and
// allocates zeroed values.
WaveField make_wave_field(double x_min, double x_max, std::size_t n_x,
                          std::span<const double> t_grid, std::string preset_id,
                          std::string label);

// One time slice of a wave function on its own x grid.
struct WaveSlice {
  double t = 0.0;
  std::vector<double> x;
  std::vector<complexd> psi;
};

// Physicists' Hermite polynomial H_n by the three-term recurrence
// H_{k+1} = 2x H_k - 2k H_{k-1}; n capped at 200.
double hermite(int n, double x);

// Normalized Hermite function h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)),
// by the recurrence h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1},
// which keeps every intermediate bounded (no factorial overflow at any n).
double hermite_function(int n, double x);

// Exact eigenstate wave function
//   psi_n = e^{i(alpha x^2 + delta x + kappa) + i(2n+1) gamma}
//           / sqrt(2^n n! mu sqrt(pi)) * e^{-(beta x + epsilon)^2/2} H_n(beta x + epsilon)
// for a c0 = 1 kernel state with mu > 0.
complexd eigenstate(int n, const KernelState& state, double x);

// Evolution kernel
//   G = (2 pi i mu0)^{-1/2} exp(i(alpha0 x^2 + beta0 x y + gamma0 y^2
//                                 + delta0 x + epsilon0 y + kappa0))
// with the square root's phase tracked continuously in t from the small-t
// asymptotic: each zero of mu0 crossed contributes a factor e^{-i pi/2}.
complexd greens(const FundamentalSolution& fund, double x, double y, double t);

class GreensKernel {
 public:
  explicit GreensKernel(std::shared_ptr<const FundamentalSolution> fund);

  const FundamentalSolution& fundamental() const { return *fund_; }
  complexd operator()(double x, double y, double t) const { return greens(*fund_, x, y, t); }

 private:
  std::shared_ptr<const FundamentalSolution> fund_;
};

// Small-t closed form of the kernel,
//   (2 pi i 2a(0) t)^{-1/2} exp[i (x-y)^2 / (4 a(0) t)]
//     * exp[-i (a'(0)/(8a(0)^2) (x-y)^2 + c(0)/(4a(0)) (x^2-y^2)
//            - g(0)/(2a(0)) (x-y))],
// the leading prefactor carrying mu0 ~ 2 a(0) t.
complexd greens_asymptotic(const CoefficientSet& coeffs, double x, double y, double t);

// psi(x, t) = int G(x, y, t) psi(y, 0) dy by composite Simpson quadrature over
// the truncated support of the initial slice (its x grid must be uniform and
// its values must decay below 1e-12 of their max at the boundary).  The grid
// starts at 8 points per local kernel oscillation and doubles until two
// refinements agree to 1e-9 in sup norm.
WaveSlice propagate(const FundamentalSolution& fund, const WaveSlice& initial,
                    std::span<const double> x_out, double t);

// Both sides of the Gauss transform of Hermite polynomials:
//   lhs = int e^{-lam^2 (x-y)^2} H_n(a y) dy  (numeric, truncated at |x-y| = 10/lam),
//   rhs = (sqrt(pi)/lam^{n+1}) (lam^2 - a^2)^{n/2} H_n(lam a x / sqrt(lam^2 - a^2)).
// Requires lam > 0 and lam^2 > a^2 (real branch).
std::pair<double, double> gauss_hermite_transform(int n, double lam, double a_scale, double x);

// Max over interior grid points of
//   |i psi_t + a psi_xx - b x^2 psi + i c x psi_x + i d psi + f x psi - i g psi_x|
// normalized by max |psi|; x derivatives fourth order, t derivative second.
double schrodinger_residual(const WaveField& field, const CoefficientSet& coeffs);

// Reconstructs chi(xi, tau) = sqrt(mu) e^{-i(alpha x^2 + delta x + kappa)} psi
// on the common (xi, tau) window with xi = beta x + epsilon, tau = gamma(t),
// and returns the max residual of -i chi_tau + chi_xixi - c0 xi^2 chi
// normalized by max |chi|.  Requires strictly monotone tau.
double autonomous_residual(const WaveField& field, std::span<const KernelState> states, int c0);

// Kernel states along a time grid: c0 = 1 uses ermakov_map, c0 = 0 riccati_map.
std::vector<KernelState> kernel_trajectory(const FundamentalSolution& fund,
                                           const InitialData& init, int c0,
                                           std::span<const double> t_grid);

// Samples eigenstate n on a uniform x grid for every time in t_grid, with the
// kernel states taken from ermakov_map.
WaveField eigenstate_field(const FundamentalSolution& fund, const InitialData& init, int n,
                           double x_min, double x_max, std::size_t n_x,
                           std::span<const double> t_grid);

}  // namespace qho
