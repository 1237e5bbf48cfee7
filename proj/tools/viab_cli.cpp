// Command-line front end: one subcommand per pipeline.
//
// Exit codes: 0 success, 2 config/usage error, 3 solver non-convergence,
// 4 numerical abort, 1 anything else (I/O failures and the like).

#include <CLI11.hpp>

#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "viab/config.hpp"
#include "viab/errors.hpp"
#include "viab/pipelines.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kNotConverged = 3, kNumerical = 4 };

struct Options {
  std::string config;
  std::string output;
  int threads = 0;
};

void add_common(CLI::App* cmd, Options& opt, bool config_required) {
  auto* c = cmd->add_option("--config", opt.config, "Run configuration (TOML)");
  if (config_required) c->required();
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

viab::RunConfig load(const Options& opt, std::optional<viab::RunMode> mode) {
  viab::RunConfig config = viab::load_config(opt.config, mode);
  if (!opt.output.empty()) config.output_dir = opt.output;
  return config;
}

int finish(const viab::RunManifest& m, const viab::RunConfig& config) {
  for (const std::string& w : m.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << m.command << ": " << m.status << ", " << m.files.size() + 1 << " files in " << config.output_dir
            << '\n';
  return m.status == "not_converged" ? kNotConverged : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viability kernels and capture basins of the production-inventory model"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  struct Command {
    const char* name;
    const char* help;
    std::optional<viab::RunMode> mode;
  };
  const Command commands[] = {
      {"capture-basin", "Finite-horizon capture basin of the (P, I) system", viab::RunMode::short_term},
      {"viability-kernel", "Viability kernel of the (P, q, I) system", viab::RunMode::long_term},
      {"long-term", "Kernel followed by its capture basin", viab::RunMode::long_term},
      {"trajectory", "Capture basin plus feedback trajectories", std::nullopt},
      {"converge", "Grid-convergence table against a fine reference", viab::RunMode::short_term},
      {"sweep", "Basin area across a demand-parameter sweep", viab::RunMode::short_term},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, opt, true);
    sub->add_option("--output", opt.output, "Run directory (overrides run.output_dir)");
  }
  CLI::App* validate =
      app.add_subcommand("validate-config", "Check a config (file or stdin) and print it fully resolved");
  add_common(validate, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kConfig;
  }

#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

  try {
    if (validate->parsed()) {
      viab::RunConfig config;
      if (opt.config.empty() || opt.config == "-") {
        const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
        config = viab::parse_config(text);
      } else {
        config = viab::load_config(opt.config);
      }
      std::cout << viab::to_toml(config);
      return kOk;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    for (const Command& c : commands) {
      if (name != c.name) continue;
      const viab::RunConfig config = load(opt, c.mode);
      const std::filesystem::path dir = config.output_dir;
      viab::RunManifest m;
      if (name == "capture-basin") m = viab::run_short_term(config, dir);
      else if (name == "viability-kernel") m = viab::run_viability_kernel(config, dir);
      else if (name == "long-term") m = viab::run_long_term(config, dir);
      else if (name == "trajectory") m = viab::run_trajectory(config, dir);
      else if (name == "converge") m = viab::run_convergence(config, dir);
      else m = viab::run_sweep(config, dir);
      return finish(m, config);
    }
    return kConfig;
  } catch (const viab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const viab::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const viab::TrajectoryError& e) {
    std::cerr << "trajectory abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
