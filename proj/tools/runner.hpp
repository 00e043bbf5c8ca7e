#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace qho::cli {

struct RunOptions {
  std::string subcommand;  // solve-fundamental | eigenstate | propagate |
                           // greens | observables | verify
  std::filesystem::path config_path;
  std::filesystem::path out_dir;  // empty keeps the config's output_dir
  unsigned threads = 0;           // 0 = hardware concurrency
  std::uint64_t seed = 20260819;  // randomized verification points
};

// Executes one batch run. Exit status: 0 success (verify: all checks pass),
// 1 verification check failure, 2 configuration error, 3 numerical failure
// (caustic hit, degenerate focus, integrator failure).
int run(const RunOptions& opt);

}  // namespace qho::cli
