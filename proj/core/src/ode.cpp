#include "qho/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qho/errors.hpp"

namespace qho {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                 kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
// y1 - yhat1 (embedded error coefficients).
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
// Dense-output weights for the order-4 continuous extension.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

}  // namespace

std::size_t DenseSolution::locate(double t) const {
  const double pad = 1e-12 * std::max(1.0, std::abs(t_end_));
  if (t < t_begin_ - pad || t > t_end_ + pad)
    throw time_domain_error(t, "dense solution queried outside [" + std::to_string(t_begin_) +
                                   ", " + std::to_string(t_end_) + "]");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
  if (idx > 0) --idx;
  if (idx >= nodes_.size() - 1) idx = nodes_.size() - 2;
  return idx;
}

void DenseSolution::eval(double t, std::span<double> out) const {
  const std::size_t step = locate(t);
  const double h = nodes_[step + 1] - nodes_[step];
  const double theta = (t - nodes_[step]) / h;
  const double theta1 = 1.0 - theta;
  const double* c = cont_.data() + 5 * dim_ * step;
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = c[i] + theta * (c[dim_ + i] +
                             theta1 * (c[2 * dim_ + i] +
                                       theta * (c[3 * dim_ + i] + theta1 * c[4 * dim_ + i])));
  }
}

double DenseSolution::eval_component(double t, std::size_t component) const {
  const std::size_t step = locate(t);
  const double h = nodes_[step + 1] - nodes_[step];
  const double theta = (t - nodes_[step]) / h;
  const double theta1 = 1.0 - theta;
  const double* c = cont_.data() + 5 * dim_ * step;
  const std::size_t i = component;
  return c[i] + theta * (c[dim_ + i] +
                         theta1 * (c[2 * dim_ + i] +
                                   theta * (c[3 * dim_ + i] + theta1 * c[4 * dim_ + i])));
}

std::vector<double> DenseSolution::component_roots(std::size_t component, double t_skip) const {
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    double ta = nodes_[k];
    double tb = nodes_[k + 1];
    if (tb <= t_skip) continue;
    ta = std::max(ta, t_skip);
    double fa = eval_component(ta, component);
    double fb = eval_component(tb, component);
    if (fa == 0.0) {
      if (ta > t_skip) roots.push_back(ta);
      continue;
    }
    if (fa * fb > 0.0) continue;
    // Bisect on the dense interpolant.
    for (int it = 0; it < 200 && tb - ta > 1e-15 * std::max(1.0, std::abs(tb)); ++it) {
      const double tm = 0.5 * (ta + tb);
      const double fm = eval_component(tm, component);
      if (fm == 0.0) {
        ta = tb = tm;
        break;
      }
      if (fa * fm < 0.0) {
        tb = tm;
      } else {
        ta = tm;
        fa = fm;
      }
    }
    roots.push_back(0.5 * (ta + tb));
  }
  // Deduplicate roots that landed on shared step nodes.
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(t_end_));
                          }),
              roots.end());
  return roots;
}

DenseSolution integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                               const OdeOptions& opt) {
  const std::size_t n = y0.size();
  if (t1 <= t0) throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");

  DenseSolution sol;
  sol.dim_ = n;
  sol.t_begin_ = t0;
  sol.t_end_ = t1;
  sol.nodes_.push_back(t0);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> ynew(n), ystage(n), err(n);
  std::vector<std::vector<double>> k(7, std::vector<double>(n));

  rhs(t0, y, k[0]);

  double h = opt.h_init;
  if (h <= 0.0) {
    h = 1e-4 * (t1 - t0);
  }
  if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

  double t = t0;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < t1) {
    if (++steps > opt.max_steps)
      throw integration_error("integrate_dopri5: step budget exhausted at t=" + std::to_string(t));
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < h_floor)
      throw integration_error("integrate_dopri5: step size underflow at t=" + std::to_string(t));
    if (t + h > t1) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) ystage[i] = y[i] + h * kA21 * k[0][i];
    rhs(t + kC2 * h, ystage, k[1]);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + h * (kA31 * k[0][i] + kA32 * k[1][i]);
    rhs(t + kC3 * h, ystage, k[2]);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + h * (kA41 * k[0][i] + kA42 * k[1][i] + kA43 * k[2][i]);
    rhs(t + kC4 * h, ystage, k[3]);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + h * (kA51 * k[0][i] + kA52 * k[1][i] + kA53 * k[2][i] + kA54 * k[3][i]);
    rhs(t + kC5 * h, ystage, k[4]);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + h * (kA61 * k[0][i] + kA62 * k[1][i] + kA63 * k[2][i] + kA64 * k[3][i] +
                              kA65 * k[4][i]);
    rhs(t + h, ystage, k[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (kA71 * k[0][i] + kA73 * k[2][i] + kA74 * k[3][i] + kA75 * k[4][i] +
                            kA76 * k[5][i]);
    rhs(t + h, ynew, k[6]);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (kE1 * k[0][i] + kE3 * k[2][i] + kE4 * k[3][i] + kE5 * k[4][i] + kE6 * k[5][i] +
                    kE7 * k[6][i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double q = err[i] / sc;
      err_norm += q * q;
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(n));

    if (err_norm <= 1.0) {
      // Accept; store the continuous-extension coefficients.
      const std::size_t base = sol.cont_.size();
      sol.cont_.resize(base + 5 * n);
      double* c = sol.cont_.data() + base;
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k[0][i] - ydiff;
        c[i] = y[i];
        c[n + i] = ydiff;
        c[2 * n + i] = bspl;
        c[3 * n + i] = ydiff - h * k[6][i] - bspl;
        c[4 * n + i] = h * (kD1 * k[0][i] + kD3 * k[2][i] + kD4 * k[3][i] + kD5 * k[4][i] +
                            kD6 * k[5][i] + kD7 * k[6][i]);
      }
      t += h;
      sol.nodes_.push_back(t);
      y.swap(ynew);
      k[0].swap(k[6]);  // FSAL

      double fac = 0.9 * std::pow(std::max(err_norm, 1e-12), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h *= fac;
      if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
      last_rejected = false;
    } else {
      const double fac = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
      h *= fac;
      last_rejected = true;
    }
  }

  sol.t_end_ = sol.nodes_.back();
  return sol;
}

}  // namespace qho
