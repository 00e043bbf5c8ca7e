#include "run_config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "qho/wavefield_io.hpp"

namespace qho::cli {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw config_error("unknown key '" + it.key() + "' in " + where);
  }
}

double num(const json& obj, const char* key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_number())
    throw config_error(std::string("'") + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::size_t count(const json& obj, const char* key, std::size_t dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_number_unsigned())
    throw config_error(std::string("'") + key + "' must be a nonnegative integer");
  return obj.at(key).get<std::size_t>();
}

std::string str(const json& obj, const char* key, const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj.at(key).is_string())
    throw config_error(std::string("'") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

RunConfig parse_config(const std::string& json_text,
                       const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");
  require_keys(j, "config",
               {"preset", "params", "samples_csv", "initial", "grid", "tolerances",
                "output_dir", "mode"});

  RunConfig cfg;
  cfg.preset = str(j, "preset", cfg.preset);

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw config_error("'params' must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (!it.value().is_number())
        throw config_error("param '" + it.key() + "' must be a number");
      cfg.params[it.key()] = it.value().get<double>();
    }
  }

  if (j.contains("initial")) {
    const json& p = j.at("initial");
    if (!p.is_object()) throw config_error("'initial' must be an object");
    require_keys(p, "initial",
                 {"mu", "alpha", "beta", "gamma", "delta", "epsilon", "kappa"});
    cfg.initial.mu = num(p, "mu", cfg.initial.mu);
    cfg.initial.alpha = num(p, "alpha", cfg.initial.alpha);
    cfg.initial.beta = num(p, "beta", cfg.initial.beta);
    cfg.initial.gamma = num(p, "gamma", cfg.initial.gamma);
    cfg.initial.delta = num(p, "delta", cfg.initial.delta);
    cfg.initial.epsilon = num(p, "epsilon", cfg.initial.epsilon);
    cfg.initial.kappa = num(p, "kappa", cfg.initial.kappa);
  }

  if (j.contains("grid")) {
    const json& p = j.at("grid");
    if (!p.is_object()) throw config_error("'grid' must be an object");
    require_keys(p, "grid", {"x_min", "x_max", "n_x", "t_max", "n_t"});
    cfg.x_min = num(p, "x_min", cfg.x_min);
    cfg.x_max = num(p, "x_max", cfg.x_max);
    cfg.n_x = count(p, "n_x", cfg.n_x);
    cfg.t_max = num(p, "t_max", cfg.t_max);
    cfg.n_t = count(p, "n_t", cfg.n_t);
  }

  if (j.contains("tolerances")) {
    const json& p = j.at("tolerances");
    if (!p.is_object()) throw config_error("'tolerances' must be an object");
    require_keys(p, "tolerances", {"solver", "residual"});
    cfg.solver_tol = num(p, "solver", cfg.solver_tol);
    cfg.residual_tol = num(p, "residual", cfg.residual_tol);
  }

  cfg.out_dir = str(j, "output_dir", cfg.out_dir.string());

  if (j.contains("mode")) {
    const json& p = j.at("mode");
    if (!p.is_object()) throw config_error("'mode' must be an object");
    require_keys(p, "mode", {"eigenstate_n", "time", "propagate_input"});
    const double n = num(p, "eigenstate_n", cfg.eigenstate_n);
    if (n != std::floor(n))
      throw config_error("mode.eigenstate_n must be an integer");
    cfg.eigenstate_n = static_cast<int>(n);
    cfg.time_point = num(p, "time", cfg.time_point);
    cfg.propagate_input = str(p, "propagate_input", cfg.propagate_input);
    if (!cfg.propagate_input.empty())
      cfg.propagate_input = resolve(base_dir, cfg.propagate_input).string();
  }

  if (j.contains("samples_csv")) {
    const std::string ref = str(j, "samples_csv", "");
    try {
      cfg.samples_csv = read_text_file(resolve(base_dir, ref));
    } catch (const std::exception& e) {
      throw config_error(std::string("cannot read samples_csv: ") + e.what());
    }
  }

  // Module-level preconditions, re-validated at load time.
  if (!(cfg.initial.mu > 0.0))
    throw config_error("initial data must satisfy mu(0) > 0");
  if (cfg.initial.beta == 0.0)
    throw config_error(
        "initial data must satisfy beta(0) != 0; both superposition maps are "
        "singular at beta(0) = 0");
  if (!(cfg.x_min < cfg.x_max)) throw config_error("grid needs x_min < x_max");
  if (cfg.n_x < 16 || cfg.n_x > 65536)
    throw config_error("n_x must lie in [16, 65536]");
  if (cfg.n_t < 5 || cfg.n_t > 16384)
    throw config_error("n_t must lie in [5, 16384]");
  if (!(cfg.t_max > 0.0)) throw config_error("t_max must be positive");
  if (!(cfg.solver_tol > 0.0 && cfg.solver_tol <= 1e-4))
    throw config_error("tolerances.solver must lie in (0, 1e-4]");
  if (!(cfg.residual_tol > 0.0))
    throw config_error("tolerances.residual must be positive");
  if (cfg.eigenstate_n < 0 || cfg.eigenstate_n > 200)
    throw config_error("mode.eigenstate_n must lie in [0, 200]");
  if (cfg.time_point < 0.0 || cfg.time_point > cfg.t_max)
    throw config_error("mode.time must lie in [0, t_max]");
  if (cfg.preset == "custom-tabulated" && cfg.samples_csv.empty())
    throw config_error("custom-tabulated preset needs samples_csv");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
  return parse_config(text, path.has_parent_path() ? path.parent_path()
                                                   : std::filesystem::path("."));
}

CoefficientSet make_coefficients(const RunConfig& cfg, std::uint64_t cli_seed) {
  if (cfg.preset == "random-smooth") {
    const auto it = cfg.params.find("seed");
    const std::uint64_t s =
        it != cfg.params.end() ? static_cast<std::uint64_t>(it->second) : cli_seed;
    return random_smooth_coefficients(s, cfg.t_max);
  }
  PresetSpec spec;
  spec.name = cfg.preset;
  spec.params = cfg.params;
  spec.samples_csv = cfg.samples_csv;
  try {
    return make_preset(spec, cfg.t_max);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

}  // namespace qho::cli
