#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qho/errors.hpp"
#include "qho/ode.hpp"
#include "qho/quadrature.hpp"
#include "test_support.hpp"

using qho::DenseSolution;
using qho::OdeOptions;
using qho::integrate_dopri5;

TEST_CASE("dense output reproduces exp between accepted steps") {
  const std::vector<double> y0{1.0};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  const DenseSolution s = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; }, y0, 0.0, 2.0,
      opt);
  CHECK(s.dimension() == 1);
  CHECK(s.t_begin() == doctest::Approx(0.0));
  CHECK(s.t_end() == doctest::Approx(2.0));
  for (double t : qhotest::linspace(0.0, 2.0, 101))
    CHECK(s.eval_component(t, 0) == doctest::Approx(std::exp(t)).epsilon(1e-10));
}

TEST_CASE("oscillator roots located by the dense interpolant") {
  const std::vector<double> y0{0.0, 1.0};
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  const DenseSolution s = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
      },
      y0, 0.0, 10.0, opt);

  const auto roots = s.component_roots(0, 0.0);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(roots[1] == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-10));
  CHECK(roots[2] == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-10));

  // Derivative carried as a component is dense-queryable too.
  for (double t : qhotest::linspace(0.3, 9.7, 41))
    CHECK(s.eval_component(t, 1) == doctest::Approx(std::cos(t)).epsilon(1e-9));
}

TEST_CASE("queries outside the integration window are refused") {
  const std::vector<double> y0{1.0};
  const DenseSolution s = integrate_dopri5(
      [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; }, y0, 0.0,
      1.0);
  CHECK_THROWS_AS((void)s.eval_component(-0.5, 0), qho::time_domain_error);
  CHECK_THROWS_AS((void)s.eval_component(1.5, 0), qho::time_domain_error);
}

TEST_CASE("step budget exhaustion raises integration_error") {
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  opt.max_steps = 10;
  CHECK_THROWS_AS((void)integrate_dopri5(
                      [](double, std::span<const double> y, std::span<double> dy) {
                        dy[0] = std::cos(40.0 * y[0]) + 2.0;
                      },
                      std::vector<double>{0.0}, 0.0, 50.0, opt),
                  qho::integration_error);
}

TEST_CASE("uniform Simpson weights integrate cubics exactly") {
  // 7 panels: composite pairs plus a trailing 3/8 closure, both exact on t^3.
  const auto grid = qhotest::linspace(-1.0, 2.0, 8);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    v[i] = t * t * t - 2.0 * t + 1.0;
  }
  const double h = grid[1] - grid[0];
  const double exact = (16.0 - 1.0) / 4.0 - (4.0 - 1.0) + 3.0;
  CHECK(qho::integrate_uniform(std::span<const double>(v), h) ==
        doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive Simpson hits tight tolerances") {
  const double v = qho::adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  CHECK(v == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  const double osc =
      qho::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 2.0 * std::numbers::pi,
                            1e-12);
  CHECK(std::abs(osc) < 1e-10);
}
