#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "slip/commands.hpp"
#include "slip/config.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "run configuration (JSON)")->required();
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "noise seed, overrides the config");
  sub->add_option("--steps", o.steps, "number of gait cycles, overrides the config")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLIP gait simulator with stance-phase output tracking"};
  app.require_subcommand(1);
  Options o;
  using Command = int (*)(const slip::RunConfig&, const std::filesystem::path&, std::ostream&);
  Command command = nullptr;

  const std::pair<const char*, Command> table[] = {
      {"run", slip::cmd_run},
      {"limit-cycle", slip::cmd_limit_cycle},
      {"return-map", slip::cmd_return_map},
      {"robustness", slip::cmd_robustness},
      {"validate", slip::cmd_validate},
  };
  const char* help[] = {
      "simulate n_steps cycles; write trajectory.csv and steps.json",
      "iterate the apex map to its fixed point",
      "finite-difference Jacobian of the apex map at the fixed point",
      "seeded touchdown-noise sweep",
      "run the acceptance property suite",
  };
  for (std::size_t i = 0; i < std::size(table); ++i) {
    CLI::App* sub = app.add_subcommand(table[i].first, help[i]);
    add_common(sub, o);
    const Command fn = table[i].second;
    sub->callback([&command, fn] { command = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? slip::kExitOk : slip::kExitConfig;
  }

  slip::RunConfig cfg;
  try {
    cfg = slip::parse_config(o.config);
    if (o.seed) cfg.setup.noise.seed = *o.seed;
    if (o.steps) cfg.n_steps = *o.steps;
  } catch (const slip::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return slip::kExitConfig;
  }
  return command(cfg, o.out, std::cerr);
}
