#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qho/characteristic.hpp"
#include "qho/errors.hpp"
#include "test_support.hpp"

using qho::CharacteristicSolution;
using qho::CoefficientSet;
using qho::FundamentalSolution;
using qho::fundamental_solution;
using qho::make_preset;
using qho::solve_characteristic;

namespace {

CoefficientSet preset(const char* name, double t_end,
                      std::map<std::string, double> params = {}) {
  return make_preset({.name = name, .params = std::move(params), .samples_csv = {}}, t_end);
}

}  // namespace

TEST_CASE("free particle: mu0 = t, mu1 = 1 and the 1/(2t) kernel") {
  const auto sol = solve_characteristic(preset("free", 4.0), 4.0);
  const auto fund = fundamental_solution(sol);
  for (double t : qhotest::linspace(0.05, 3.9, 50)) {
    CHECK(sol.mu0(t) == doctest::Approx(t).epsilon(1e-10));
    CHECK(sol.mu0_dot(t) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.mu1(t) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(sol.mu1_dot(t)) < 1e-10);
    CHECK(sol.lambda(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fund.alpha0(t) == doctest::Approx(1.0 / (2.0 * t)).epsilon(1e-8));
    CHECK(fund.beta0(t) == doctest::Approx(-1.0 / t).epsilon(1e-8));
    CHECK(fund.gamma0(t) == doctest::Approx(1.0 / (2.0 * t)).epsilon(1e-8));
    CHECK(fund.delta0(t) == 0.0);
    CHECK(fund.epsilon0(t) == 0.0);
    CHECK(fund.kappa0(t) == 0.0);
  }
  CHECK(sol.caustics().empty());
  CHECK(sol.turning_points().empty());
}

TEST_CASE("sho: trigonometric standard solutions, caustic and turning ladder") {
  const double omega = 1.3;
  const auto sol = solve_characteristic(preset("sho", 7.0, {{"omega", omega}}), 7.0);
  const auto fund = fundamental_solution(sol);
  for (double t : qhotest::linspace(0.05, 6.9, 50)) {
    CHECK(sol.mu0(t) == doctest::Approx(std::sin(omega * t) / omega).epsilon(1e-9));
    CHECK(sol.mu0_dot(t) == doctest::Approx(std::cos(omega * t)).epsilon(1e-9));
    CHECK(sol.mu1(t) == doctest::Approx(std::cos(omega * t)).epsilon(1e-9));
    CHECK(sol.mu1_dot(t) == doctest::Approx(-omega * std::sin(omega * t)).epsilon(1e-9));
    if (sol.at_caustic(t)) continue;
    const double cot = std::cos(omega * t) / std::sin(omega * t);
    CHECK(fund.alpha0(t) == doctest::Approx(0.5 * omega * cot).epsilon(1e-8));
    CHECK(fund.beta0(t) == doctest::Approx(-omega / std::sin(omega * t)).epsilon(1e-8));
    CHECK(fund.gamma0(t) == doctest::Approx(0.5 * omega * cot).epsilon(1e-8));
  }

  const double pi = std::numbers::pi;
  REQUIRE(sol.caustics().size() == 2);
  CHECK(sol.caustics()[0] == doctest::Approx(pi / omega).epsilon(1e-10));
  CHECK(sol.caustics()[1] == doctest::Approx(2.0 * pi / omega).epsilon(1e-10));
  REQUIRE(sol.turning_points().size() == 3);
  CHECK(sol.turning_points()[0] == doctest::Approx(0.5 * pi / omega).epsilon(1e-10));
  CHECK(sol.maslov_index(1.0) == 0);
  CHECK(sol.maslov_index(3.0) == 1);
  CHECK(sol.maslov_index(5.5) == 2);

  CHECK(sol.at_caustic(pi / omega));
  CHECK_FALSE(sol.at_caustic(1.0));
  CHECK_THROWS_AS((void)fund.alpha0(pi / omega), qho::caustic_error);
  CHECK_THROWS_AS((void)fund.beta0(0.0), qho::caustic_error);
}

TEST_CASE("damped oscillator: critically damped closed forms") {
  // gamma = 2, omega = 1: tau = -2, 4 sigma = 1, so mu'' + 2 mu' + mu = 0.
  const auto sol = solve_characteristic(preset("damped", 3.0), 3.0);
  const auto fund = fundamental_solution(sol);
  for (double t : qhotest::linspace(0.05, 2.95, 50)) {
    CHECK(sol.mu0(t) == doctest::Approx(t * std::exp(-t)).epsilon(1e-9));
    CHECK(sol.mu1(t) == doctest::Approx((1.0 + t) * std::exp(-t)).epsilon(1e-9));
    CHECK(sol.lambda(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fund.alpha0(t) ==
          doctest::Approx((1.0 - t) * std::exp(2.0 * t) / (2.0 * t)).epsilon(1e-8));
    CHECK(fund.beta0(t) == doctest::Approx(-std::exp(t) / t).epsilon(1e-8));
    CHECK(fund.gamma0(t) == doctest::Approx((1.0 + t) / (2.0 * t)).epsilon(1e-8));
  }
  CHECK(sol.caustics().empty());
  REQUIRE(sol.turning_points().size() == 1);
  CHECK(sol.turning_points()[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("driven sho: closed-form drive coefficients") {
  const double F = 0.3;
  const auto sol = solve_characteristic(preset("driven-sho", 3.3, {{"force", F}}), 3.3);
  const auto fund = fundamental_solution(sol);
  for (double t : {0.3, 0.9, 2.0, 2.8}) {
    const double th = std::tan(0.5 * t);
    CHECK(fund.delta0(t) == doctest::Approx(F * th).epsilon(1e-8));
    CHECK(fund.epsilon0(t) == doctest::Approx(F * th).epsilon(1e-7));
    CHECK(fund.kappa0(t) == doctest::Approx(-F * F * (th - 0.5 * t)).epsilon(1e-7));
  }

  // Quadrature route, valid below the first turning point at pi/2.
  for (double t : {0.3, 0.9, 1.2}) {
    CHECK(qho::epsilon0_quadrature(fund, t) ==
          doctest::Approx(fund.epsilon0(t)).epsilon(1e-7));
    CHECK(qho::kappa0_quadrature(fund, t) == doctest::Approx(fund.kappa0(t)).epsilon(1e-7));
  }
  CHECK_THROWS_AS((void)qho::epsilon0_quadrature(fund, 2.0), qho::numeric_error);

  // The drive coefficients have a genuine pole at the first caustic (t = pi).
  CHECK(sol.drive_end() < std::numbers::pi);
  CHECK(sol.drive_end() > std::numbers::pi - 1e-4);
  CHECK_THROWS_AS((void)fund.epsilon0(3.1416), qho::caustic_error);
  // mu0 and friends keep going across it.
  CHECK(sol.mu0(3.1) == doctest::Approx(std::sin(3.1)).epsilon(1e-8));
}

TEST_CASE("mixed set reproduces independently integrated values") {
  const CoefficientSet coeffs = qhotest::mixed_set();
  const auto sol = solve_characteristic(coeffs, 1.75, 1e-11);
  const auto fund = fundamental_solution(sol);

  // t = 0.9
  CHECK(sol.mu0(0.9) == doctest::Approx(0.95339196439327822).epsilon(1e-9));
  CHECK(sol.mu0_dot(0.9) == doctest::Approx(0.87214235998972311).epsilon(1e-9));
  CHECK(sol.mu1(0.9) == doctest::Approx(0.56819158003745185).epsilon(1e-9));
  CHECK(sol.mu1_dot(0.9) == doctest::Approx(-0.90676089358176615).epsilon(1e-9));
  CHECK(sol.lambda(0.9) == doctest::Approx(1.0843572070991356).epsilon(1e-10));
  CHECK(fund.alpha0(0.9) == doctest::Approx(0.34169622526793347).epsilon(1e-8));
  CHECK(fund.beta0(0.9) == doctest::Approx(-1.1373676804473607).epsilon(1e-8));
  CHECK(fund.gamma0(0.9) == doctest::Approx(0.39798425058000086).epsilon(1e-8));
  CHECK(fund.delta0(0.9) == doctest::Approx(0.26822626536330513).epsilon(1e-8));
  CHECK(fund.epsilon0(0.9) == doctest::Approx(-0.026979694425249466).epsilon(5e-7));
  CHECK(fund.kappa0(0.9) == doctest::Approx(0.0085157228152339653).epsilon(5e-7));

  // t = 1.7
  CHECK(sol.mu0(1.7) == doctest::Approx(1.2628404484640248).epsilon(1e-9));
  CHECK(sol.mu0_dot(1.7) == doctest::Approx(-0.13812758981988862).epsilon(1e-8));
  CHECK(sol.mu1(1.7) == doctest::Approx(-0.21421529703683803).epsilon(1e-8));
  CHECK(sol.mu1_dot(1.7) == doctest::Approx(-0.87482202555110711).epsilon(1e-9));
  CHECK(sol.lambda(1.7) == doctest::Approx(0.9729370100457837).epsilon(1e-10));
  CHECK(fund.alpha0(1.7) == doctest::Approx(-0.03488579571867529).epsilon(1e-7));
  CHECK(fund.beta0(1.7) == doctest::Approx(-0.77043541900257739).epsilon(1e-8));
  CHECK(fund.gamma0(1.7) == doctest::Approx(0.015185129959455645).epsilon(1e-7));
  CHECK(fund.delta0(1.7) == doctest::Approx(0.24523122313818144).epsilon(1e-8));
  CHECK(fund.epsilon0(1.7) == doctest::Approx(0.15511514492253131).epsilon(5e-7));
  CHECK(fund.kappa0(1.7) == doctest::Approx(-0.013015390774222828).epsilon(5e-7));

  CHECK(sol.caustics().empty());
}

TEST_CASE("Wronskian identity mu0' mu1 - mu0 mu1' = 2 a lambda^2") {
  const CoefficientSet coeffs = qhotest::mixed_set();
  const auto sol = solve_characteristic(coeffs, 1.75);
  for (double t : qhotest::linspace(0.0, 1.75, 60)) {
    const double w = sol.mu0_dot(t) * sol.mu1(t) - sol.mu0(t) * sol.mu1_dot(t);
    const double lam = sol.lambda(t);
    CHECK(w == doctest::Approx(2.0 * coeffs.a(t) * lam * lam).epsilon(1e-9));
  }
}

TEST_CASE("kernel coefficients satisfy their transport system") {
  const auto grid = qhotest::linspace(0.15, 1.6, 25);
  const auto fund =
      fundamental_solution(solve_characteristic(qhotest::mixed_set(), 1.75));
  CHECK(qho::verify_riccati_residual(fund, grid) < 1e-6);
}

TEST_CASE("small-t asymptotics of the kernel coefficients") {
  const CoefficientSet coeffs = qhotest::mixed_set();
  const auto fund = fundamental_solution(solve_characteristic(coeffs, 1.75));
  for (double t : {1e-2, 1e-3}) {
    const double tol = 5.0 * t;  // next order in the small-t expansion
    CHECK(fund.alpha0(t) / qho::asymp_alpha0(coeffs, t) == doctest::Approx(1.0).epsilon(tol));
    CHECK(fund.beta0(t) / qho::asymp_beta0(coeffs, t) == doctest::Approx(1.0).epsilon(tol));
    CHECK(fund.gamma0(t) / qho::asymp_gamma0(coeffs, t) == doctest::Approx(1.0).epsilon(tol));
  }
  CHECK(fund.delta0(1e-7) == doctest::Approx(qho::asymp_delta0(coeffs)).epsilon(1e-6));
  CHECK(fund.epsilon0(1e-7) == doctest::Approx(qho::asymp_epsilon0(coeffs)).epsilon(1e-6));
  CHECK(qho::asymp_delta0(coeffs) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("time domain and tolerance guards") {
  const CoefficientSet coeffs = qhotest::mixed_set();
  CHECK_THROWS_AS((void)solve_characteristic(coeffs, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)solve_characteristic(coeffs, 2.5), qho::time_domain_error);
  CHECK_THROWS_AS((void)solve_characteristic(coeffs, 1.0, 1e-3), std::invalid_argument);

  const auto fund = fundamental_solution(solve_characteristic(coeffs, 1.75));
  CHECK_THROWS_AS((void)fund.alpha0(-0.5), qho::time_domain_error);
  CHECK_THROWS_AS((void)fund.alpha0(1.9), qho::time_domain_error);
}
