#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qho/coefficients.hpp"

namespace qhotest {

// Every coefficient active and smooth, a bounded away from zero.  The frozen
// reference values quoted in the tests for this set come from an independent
// DOP853 integration (rtol 1e-13) of the transport equations themselves, not
// from the characteristic-equation route under test.
inline qho::CoefficientSet mixed_set(double t_end = 1.75) {
  qho::CoefficientSet::Parts p;
  p.a = [](double t) { return 0.5 + 0.1 * std::sin(t); };
  p.b = [](double t) { return 0.4 + 0.05 * std::cos(2.0 * t); };
  p.c = [](double t) { return 0.2 * std::sin(t); };
  p.d = [](double t) { return 0.1 * std::cos(t); };
  p.f = [](double t) { return 0.3 * std::cos(t); };
  p.g = [](double t) { return 0.2 * std::cos(t); };
  p.a_dot = [](double t) { return 0.1 * std::cos(t); };
  p.c_dot = [](double t) { return 0.2 * std::cos(t); };
  p.d_dot = [](double t) { return -0.1 * std::sin(t); };
  p.g_dot = [](double t) { return -0.2 * std::sin(t); };
  return qho::CoefficientSet(std::move(p), t_end, false, "mixed");
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace qhotest
