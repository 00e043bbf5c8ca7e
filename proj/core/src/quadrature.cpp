#include "qho/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qho {
namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, fa, b, fb, fm, whole, std::max(tol, 1e-16 * std::abs(whole)),
                         max_depth);
}

namespace {

template <typename T>
T integrate_uniform_impl(std::span<const T> v, double h) {
  const std::size_t n = v.size();
  if (n < 2) throw std::invalid_argument("integrate_uniform: need at least 2 samples");
  if (n == 2) return h * 0.5 * (v[0] + v[1]);
  const std::size_t panels = n - 1;
  T total{};
  std::size_t i = 0;
  std::size_t simpson_panels = panels;
  if (panels % 2 == 1) simpson_panels = panels - 3;  // close the tail with 3/8
  for (; i + 2 <= simpson_panels; i += 2) {
    total += (h / 3.0) * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
  }
  if (panels % 2 == 1) {
    if (simpson_panels + 3 != panels) throw std::logic_error("integrate_uniform: panel bookkeeping");
    const std::size_t j = simpson_panels;
    total += (3.0 * h / 8.0) * (v[j] + 3.0 * v[j + 1] + 3.0 * v[j + 2] + v[j + 3]);
  }
  return total;
}

}  // namespace

double integrate_uniform(std::span<const double> values, double h) {
  return integrate_uniform_impl(values, h);
}

std::complex<double> integrate_uniform(std::span<const std::complex<double>> values, double h) {
  return integrate_uniform_impl(values, h);
}

}  // namespace qho
