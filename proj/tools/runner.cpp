#include "runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qho/characteristic.hpp"
#include "qho/errors.hpp"
#include "qho/observables.hpp"
#include "qho/parallel_for.hpp"
#include "qho/quantum.hpp"
#include "qho/superposition.hpp"
#include "qho/verify.hpp"
#include "qho/wavefield_io.hpp"
#include "run_config.hpp"

namespace qho::cli {
namespace {

using nlohmann::json;

int log_level() {
  static const int lvl = [] {
    const char* e = std::getenv("QHO_LOG");
    if (e == nullptr) return 1;
    const std::string v(e);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
  }();
  return lvl;
}

void info(const std::string& m) {
  if (log_level() >= 1) std::cerr << "[qho] " << m << "\n";
}

void debug(const std::string& m) {
  if (log_level() >= 2) std::cerr << "[qho:debug] " << m << "\n";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

// n_t sample times in (0, t_max]; the first point sits one step in, so the
// kernel-state maps (undefined at t=0) stay applicable.
std::vector<double> time_grid(const RunConfig& cfg) {
  return linspace(cfg.t_max / static_cast<double>(cfg.n_t), cfg.t_max, cfg.n_t);
}

json grid_json(const RunConfig& cfg) {
  return json{{"x_min", cfg.x_min}, {"x_max", cfg.x_max}, {"n_x", cfg.n_x},
              {"t_max", cfg.t_max}, {"n_t", cfg.n_t}};
}

json initial_json(const InitialData& i) {
  return json{{"mu", i.mu}, {"alpha", i.alpha}, {"beta", i.beta},
              {"gamma", i.gamma}, {"delta", i.delta}, {"epsilon", i.epsilon},
              {"kappa", i.kappa}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

int run_impl(const RunOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  set_thread_count(opt.threads);
  std::filesystem::create_directories(cfg.out_dir);
  const CoefficientSet coeffs = make_coefficients(cfg, opt.seed);
  info("preset '" + coeffs.id() + "' on [0, " + format17(cfg.t_max) + "], " +
       (coeffs.homogeneous() ? "homogeneous" : "driven"));

  if (opt.subcommand == "verify") {
    VerifyArtifacts art;
    const auto results = verify_coefficients(coeffs, opt.seed, &art);
    json rep = json::array();
    for (const CheckResult& r : results) {
      rep.push_back(json{{"check_name", r.name},
                         {"measured", r.measured},
                         {"threshold", r.threshold},
                         {"comparison", r.comparison},
                         {"pass", r.pass},
                         {"note", r.note}});
      std::printf("%-26s %s  measured=%-12.5g threshold=%-9.3g\n", r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.measured, r.threshold);
    }
    write_json(cfg.out_dir / "report.json", rep);
    write_text_file(cfg.out_dir / "verify_fundamental.csv", art.fundamental_csv);
    write_text_file(cfg.out_dir / "verify_states.csv", art.states_csv);
    write_text_file(cfg.out_dir / "verify_trajectory.csv", art.trajectory_csv);
    const bool ok = all_passed(results);
    std::printf("%s\n", ok ? "all checks passed" : "verification FAILED");
    return ok ? 0 : 1;
  }

  auto sol_ptr = std::make_shared<const CharacteristicSolution>(
      solve_characteristic(coeffs, cfg.t_max, cfg.solver_tol));
  const CharacteristicSolution& sol = *sol_ptr;
  const FundamentalSolution fund = fundamental_solution(sol_ptr);
  {
    std::string cs;
    for (double c : sol.caustics()) cs += (cs.empty() ? "" : ", ") + format17(c);
    info("caustics: [" + cs + "]");
  }
  const double tp = cfg.time_point > 0.0 ? cfg.time_point : 0.5 * cfg.t_max;

  json meta{{"preset", coeffs.id()},
            {"params", cfg.params},
            {"grid", grid_json(cfg)},
            {"initial", initial_json(cfg.initial)},
            {"solver_tol", cfg.solver_tol},
            {"caustics", sol.caustics()},
            {"turning_points", sol.turning_points()}};

  if (opt.subcommand == "solve-fundamental") {
    // Keep sample times clear of caustics (and of the drive-domain end for
    // driven systems); the kernel coefficients are singular there.
    std::vector<double> kept;
    const double margin = 0.02 * cfg.t_max;
    for (double t : time_grid(cfg)) {
      if (!coeffs.homogeneous() && t > sol.drive_end()) continue;
      bool clear = t > margin;
      for (double c : sol.caustics())
        if (std::abs(t - c) < margin) clear = false;
      if (clear) kept.push_back(t);
    }
    if (kept.empty())
      throw config_error("no caustic-free sample times in (0, t_max]; refine the grid");
    debug("writing " + std::to_string(kept.size()) + " fundamental rows");
    write_text_file(cfg.out_dir / "fundamental.csv", fundamental_csv(fund, kept));
    meta["rows"] = kept.size();
    meta["lambda_at_t_max"] = sol.lambda(cfg.t_max);
    write_json(cfg.out_dir / "fundamental.json", meta);
    return 0;
  }

  if (opt.subcommand == "eigenstate") {
    const auto tg = time_grid(cfg);
    const WaveField field = eigenstate_field(fund, cfg.initial, cfg.eigenstate_n,
                                             cfg.x_min, cfg.x_max, cfg.n_x, tg);
    const auto states = kernel_trajectory(fund, cfg.initial, 1, tg);
    write_text_file(cfg.out_dir / "field.csv", wave_field_csv(field));
    write_text_file(cfg.out_dir / "states.csv", kernel_states_csv(field.t, states));
    meta["eigenstate_n"] = cfg.eigenstate_n;
    write_json(cfg.out_dir / "field.json", meta);
    return 0;
  }

  if (opt.subcommand == "propagate") {
    if (cfg.propagate_input.empty())
      throw config_error("propagate mode needs mode.propagate_input (slice CSV)");
    const WaveSlice input = parse_wave_slice_csv(read_text_file(cfg.propagate_input));
    info("propagating " + std::to_string(input.x.size()) + " samples to t=" +
         format17(tp));
    const auto xg = linspace(cfg.x_min, cfg.x_max, cfg.n_x);
    const WaveSlice out = propagate(fund, input, xg, tp);
    write_text_file(cfg.out_dir / "propagated.csv", wave_slice_csv(out));
    meta["time"] = tp;
    meta["input_samples"] = input.x.size();
    write_json(cfg.out_dir / "propagated.json", meta);
    return 0;
  }

  if (opt.subcommand == "greens") {
    const std::size_t ng = 33;
    const auto xg = linspace(cfg.x_min, cfg.x_max, ng);
    std::string csv = "x,y,re_g,im_g,abs_g\n";
    for (double x : xg)
      for (double y : xg) {
        const complexd gv = greens(fund, x, y, tp);
        csv += format17(x) + ',' + format17(y) + ',' + format17(gv.real()) + ',' +
               format17(gv.imag()) + ',' + format17(std::abs(gv)) + '\n';
      }
    write_text_file(cfg.out_dir / "greens.csv", csv);
    meta["time"] = tp;
    meta["kernel"] = json{{"alpha0", fund.alpha0(tp)},   {"beta0", fund.beta0(tp)},
                          {"gamma0", fund.gamma0(tp)},   {"delta0", fund.delta0(tp)},
                          {"epsilon0", fund.epsilon0(tp)}, {"kappa0", fund.kappa0(tp)},
                          {"mu0", sol.mu0(tp)},
                          {"maslov_index", sol.maslov_index(tp)}};
    write_json(cfg.out_dir / "greens.json", meta);
    return 0;
  }

  if (opt.subcommand == "observables") {
    const auto tg = time_grid(cfg);
    const WaveField field = eigenstate_field(fund, cfg.initial, cfg.eigenstate_n,
                                             cfg.x_min, cfg.x_max, cfg.n_x, tg);
    const auto states = kernel_trajectory(fund, cfg.initial, 1, tg);
    const Trajectory traj = expectation_x(field);
    const ArnoldData arnold = arnold_transform(traj, states);
    write_text_file(cfg.out_dir / "observables.csv",
                    trajectory_csv(traj, arnold.xi_bar, arnold.tau));
    const auto direct = xi_expectation_direct(field, states);
    double xi_gap = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
      xi_gap = std::max(xi_gap, std::abs(direct[i] - arnold.xi_bar[i]));
    meta["eigenstate_n"] = cfg.eigenstate_n;
    meta["ehrenfest_residual"] = ehrenfest_residual(traj, coeffs);
    meta["normal_form_residual"] =
        harmonic_normal_form_residual(arnold.xi_bar, arnold.tau, 1);
    meta["xi_consistency"] = xi_gap;
    write_json(cfg.out_dir / "observables.json", meta);
    return 0;
  }

  throw config_error("unknown subcommand '" + opt.subcommand + "'");
}

}  // namespace

int run(const RunOptions& opt) {
  try {
    return run_impl(opt);
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qho::cli
