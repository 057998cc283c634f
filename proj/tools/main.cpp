// tabs: command-line front end for trajectory-aware beam design.
//
//   tabs design      --scenario s.yaml [--out dir]
//   tabs fieldmap    --scenario s.yaml [--out dir] [--threads k]
//   tabs reliability --scenario s.yaml [--out dir] [--samples n]
//   tabs compare     --scenario s.yaml [--out dir] [--samples n]
//
// Exit codes: 0 ok, 2 scenario validation failure, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tabs/commands.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct Args {
  std::string scenario;
  std::string out;
  unsigned threads = 1;
  std::size_t samples = 0;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--scenario", a.scenario, "scenario YAML file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "output directory (default: the scenario's 'output')");
  cmd->add_option("--threads", a.threads, "worker threads for grid evaluation, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--samples", a.samples, "trajectory samples for reliability metrics")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-aware near-field beam design"};
  app.require_subcommand(1);
  Args args;
  auto* design = app.add_subcommand("design", "write the aperture phase profile and element phases");
  auto* fieldmap = app.add_subcommand("fieldmap", "evaluate the intensity map on the scenario grid");
  auto* reliability = app.add_subcommand("reliability", "spatial outage reliability per method");
  auto* compare = app.add_subcommand("compare", "trajectory profiles and beam-switching counts");
  for (auto* c : {design, fieldmap, reliability, compare}) add_common(c, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    namespace fs = std::filesystem;
    const fs::path path(args.scenario);
    const auto s = tabs::scenario::load(path);
    tabs::commands::Options opt;
    opt.out_dir = args.out;
    opt.scenario_dir = path.parent_path();
    opt.threads = args.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : args.threads;
    if (args.samples > 0) opt.samples = args.samples;
    const auto ctx = tabs::commands::make_context(s, opt);

    if (design->parsed()) tabs::commands::run_design(ctx, std::cout);
    else if (fieldmap->parsed()) tabs::commands::run_fieldmap(ctx, std::cout);
    else if (reliability->parsed()) tabs::commands::run_reliability(ctx, std::cout);
    else tabs::commands::run_compare(ctx, std::cout);
  } catch (const tabs::InvalidArgument& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const tabs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
