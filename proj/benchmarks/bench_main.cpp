#include <benchmark/benchmark.h>

#include <vector>

#include "qho/characteristic.hpp"
#include "qho/coefficients.hpp"
#include "qho/quantum.hpp"
#include "qho/superposition.hpp"

namespace {

qho::CoefficientSet driven(double t_end) {
  return qho::make_preset(
      {.name = "driven-sho", .params = {{"force", 0.3}}, .samples_csv = {}}, t_end);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

void bm_solve_characteristic(benchmark::State& state) {
  const auto coeffs = driven(3.0);
  for (auto _ : state) {
    auto sol = qho::solve_characteristic(coeffs, 3.0);
    benchmark::DoNotOptimize(sol.mu0(2.9));
  }
}
BENCHMARK(bm_solve_characteristic);

void bm_ermakov_map(benchmark::State& state) {
  const auto coeffs = driven(3.0);
  const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 3.0));
  const qho::InitialData init{1.3, 0.12, 0.9, 0.0, 0.25, -0.2, 0.1};
  double t = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qho::ermakov_map(fund, init, t));
    t = t < 2.8 ? t + 1e-4 : 0.3;
  }
}
BENCHMARK(bm_ermakov_map);

void bm_eigenstate_field(benchmark::State& state) {
  const auto coeffs = driven(3.0);
  const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 3.0));
  const qho::InitialData init{1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  const auto tg = linspace(0.05, 1.0, 16);
  for (auto _ : state) {
    auto field = qho::eigenstate_field(fund, init, 2, -8.0, 8.0, 512, tg);
    benchmark::DoNotOptimize(field.values.back());
  }
}
BENCHMARK(bm_eigenstate_field);

void bm_propagate(benchmark::State& state) {
  const auto coeffs = driven(3.0);
  const auto fund = qho::fundamental_solution(qho::solve_characteristic(coeffs, 3.0));
  qho::KernelState st;
  st.t = 0.0;
  st.mu = 1.0;
  st.alpha = 0.0;
  st.beta = 1.0;
  st.gamma = 0.0;
  st.delta = 0.0;
  st.epsilon = 0.0;
  st.kappa = 0.0;
  st.c0 = 1;
  qho::WaveSlice s0;
  s0.t = 0.0;
  s0.x = linspace(-10.0, 10.0, 801);
  s0.psi.resize(s0.x.size());
  for (std::size_t i = 0; i < s0.x.size(); ++i)
    s0.psi[i] = qho::eigenstate(2, st, s0.x[i]);
  const auto x_out = linspace(-6.0, 6.0, 241);
  for (auto _ : state) {
    auto out = qho::propagate(fund, s0, x_out, 1.1);
    benchmark::DoNotOptimize(out.psi.back());
  }
}
BENCHMARK(bm_propagate);

}  // namespace

BENCHMARK_MAIN();
