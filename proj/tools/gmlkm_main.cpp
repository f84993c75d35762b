#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace gmlkm::cli;

  CLI::App app{"Trajectory reconstruction from anonymous (velocity, time) sensor hits"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a labelled synthetic scenario");
  generate->add_option("--config", gen.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out_dir, "Output directory")->required();

  AssociateArgs assoc;
  auto* associate = app.add_subcommand("associate", "Associate measurements to targets");
  associate->add_option("--topology", assoc.topology, "Topology document (JSON)")->required()->check(CLI::ExistingFile);
  associate->add_option("--measurements", assoc.measurements, "Measurement table (CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  associate->add_option("--variant", assoc.variant, "Pipeline variant")->capture_default_str();
  associate->add_option("--seed", assoc.seed, "Run seed")->capture_default_str();
  associate->add_option("--out", assoc.out_dir, "Output directory")->required();
  associate->add_option("--sensors-per-block", assoc.sensors_per_block, "Sensors per first-layer block (K)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  associate->add_flag("--strict", assoc.strict, "Fail on conflicting pairings");

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Monte-Carlo accuracy of pipeline variants");
  evaluate->add_option("--config", eval.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--variants", eval.variants, "Comma-separated variants")->required()->delimiter(',');
  evaluate->add_option("--trials", eval.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", eval.seed, "Base seed")->capture_default_str();
  evaluate->add_option("--out", eval.out, "Report file ('-' for stdout)")->required();
  evaluate->add_option("--sensors-per-block", eval.sensors_per_block, "Sensors per first-layer block (K)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--threads", eval.threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* demo = app.add_subcommand("demo", "Print the five-target worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  if (*generate) return cmd_generate(gen, std::cerr);
  if (*associate) return cmd_associate(assoc, std::cerr);
  if (*evaluate) return cmd_evaluate(eval, std::cerr);
  if (*demo) return cmd_demo(std::cout);
  return kUsageError;
}
