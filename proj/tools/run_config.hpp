#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "qho/coefficients.hpp"
#include "qho/superposition.hpp"

namespace qho::cli {

// Invalid or inconsistent run configuration; mapped to exit status 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string preset = "sho";              // free | sho | driven-sho | damped |
                                           // custom-tabulated | random-smooth
  std::map<std::string, double> params;    // omega, force, gamma, seed ...
  std::string samples_csv;                 // table text (custom-tabulated)
  InitialData initial;
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n_x = 512;
  double t_max = 6.0;
  std::size_t n_t = 64;
  double solver_tol = 1e-10;
  double residual_tol = 1e-3;
  std::filesystem::path out_dir = "out";
  int eigenstate_n = 0;                    // eigenstate/observables modes
  std::string propagate_input;             // slice CSV path (propagate mode)
  double time_point = 0.0;                 // propagate/greens target; 0 -> t_max/2
};

// Parses and validates the JSON schema documented in the README. base_dir
// resolves relative file references (samples_csv, propagate_input).
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

// Builds the coefficient set the config names, on [0, t_max]. cli_seed feeds
// the random-smooth preset when the config does not pin params.seed.
CoefficientSet make_coefficients(const RunConfig& cfg, std::uint64_t cli_seed);

}  // namespace qho::cli
