#include <string>

#include "CLI11.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact wave functions, propagators, and invariants of quadratic "
               "Hamiltonians"};
  app.require_subcommand(1);

  qho::cli::RunOptions opt;
  std::string config;
  std::string out;

  const struct {
    const char* name;
    const char* desc;
  } subs[] = {
      {"solve-fundamental", "tabulate the kernel coefficients alpha0..kappa0"},
      {"eigenstate", "evolve one bound state on the space-time grid"},
      {"propagate", "apply the integral kernel to a stored slice"},
      {"greens", "tabulate the kernel G(x,y,t) at one time"},
      {"observables", "expectation values, classical motion, normal form"},
      {"verify", "run the invariant suite and write a pass/fail report"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    sub->add_option("--config", config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
    sub->add_option("--seed", opt.seed, "seed for randomized verification points");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  opt.subcommand = app.get_subcommands().front()->get_name();
  opt.config_path = config;
  opt.out_dir = out;
  return qho::cli::run(opt);
}
