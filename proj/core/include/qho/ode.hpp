#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qho {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_max = 0.0;   // 0: no cap
  double h_init = 0.0;  // 0: automatic
  std::size_t max_steps = 4'000'000;
};

// Dense continuous extension of a Dormand-Prince 5(4) integration.  Each
// accepted step stores the quartic interpolation polynomial, so states (and,
// for systems carrying their own derivatives as components, derivatives) can
// be queried at any interior time.
class DenseSolution {
 public:
  DenseSolution() = default;

  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t dimension() const { return dim_; }

  void eval(double t, std::span<double> out) const;
  double eval_component(double t, std::size_t component) const;

  // Accepted-step node times, t_begin .. t_end inclusive.
  const std::vector<double>& nodes() const { return nodes_; }

  // Roots of one component located by node-level sign scan plus bisection on
  // the dense interpolant.  Roots at t <= t_skip are ignored.
  std::vector<double> component_roots(std::size_t component, double t_skip) const;

 private:
  friend DenseSolution integrate_dopri5(const OdeRhs&, std::span<const double>, double, double,
                                        const OdeOptions&);

  std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> cont_;  // 5 * dim_ coefficients per step
};

DenseSolution integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                               const OdeOptions& opt = {});

}  // namespace qho
