// lightwit: evaluate light-based entanglement witnesses for emitter arrays.
//
//   lightwit witness   --config case.json [--out DIR] [--tolerance T]
//   lightwit scan      --config case.json [--out DIR] [--format csv|json]
//   lightwit threshold --config case.json [--out DIR]
//   lightwit verify    [--config case.json] [--seed S] [--out DIR]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lightwit/commands.hpp"
#include "lightwit/config.hpp"

namespace {

struct Args {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::string> format;
};

void add_common(CLI::App* sub, Args& args, bool config_required) {
  auto* c = sub->add_option("--config", args.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  if (config_required) c->required();
  sub->add_option("--out", args.out, "output directory (overrides run.output_dir)");
  sub->add_option("--seed", args.seed, "random seed (overrides run.seed)");
  sub->add_option("--tolerance", args.tolerance, "detection tolerance: W < -tolerance counts as detection");
  sub->add_option("--format", args.format, "scan output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lightwit;

  CLI::App app{"Light-based entanglement witnesses for arrays of multilevel emitters"};
  app.set_version_flag("--version", std::string(commands::kVersion));
  app.require_subcommand(1);

  Args args;
  auto* witness = app.add_subcommand("witness", "evaluate the witness in one direction");
  auto* scan = app.add_subcommand("scan", "sweep the witness over a direction grid");
  auto* threshold = app.add_subcommand("threshold", "find the white-noise threshold in one direction");
  auto* verify = app.add_subcommand("verify", "run the built-in property suites");
  for (auto* sub : {witness, scan, threshold}) add_common(sub, args, true);
  add_common(verify, args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? commands::kOk : commands::kConfigError;
  }

  const commands::Overrides overrides{args.out, args.seed, args.tolerance, args.format};
  try {
    if (verify->parsed()) {
      std::optional<config::ExperimentConfig> cfg;
      if (!args.config.empty()) cfg = commands::apply_overrides(config::load_config(args.config), overrides);
      return commands::cmd_verify(cfg, overrides, std::cout);
    }
    auto cfg = commands::apply_overrides(config::load_config(args.config), overrides);
    config::validate(cfg);
    if (witness->parsed()) return commands::cmd_witness(cfg, std::cout);
    if (scan->parsed()) return commands::cmd_scan(cfg, std::cout);
    if (threshold->parsed()) return commands::cmd_threshold(cfg, std::cout);
  } catch (const config::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return commands::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return commands::kNumericalFailure;
  }
  return commands::kConfigError;
}
