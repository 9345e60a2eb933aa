#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "eventb/cli.hpp"

using namespace eventb;

namespace {

void common_options(CLI::App* sub, cli::RunConfig& c) {
  sub->add_option("input", c.input, "Machine, refinement or SLTS dump")->required();
  sub->add_option("--abstract", c.abstraction, "Abstraction of a refinement");
  sub->add_option("--budget", c.budget, "Maximum valuations enumerated per PO")
      ->envname("SLTSGEN_BUDGET")
      ->check(CLI::PositiveNumber);
  sub->add_option("--mode", c.mode, "default or strict")
      ->transform(CLI::CheckedTransformer(std::map<std::string, GenMode>{{"default", GenMode::Default},
                                                                        {"strict", GenMode::Strict}},
                                          CLI::ignore_case));
  sub->add_option("--assume", c.assumptions, "Assumption file")->check(CLI::ExistingFile);
  sub->add_flag("--force", c.force, "Continue when the completeness PO fails");
  sub->add_flag("--keep-all-states", c.keep_all_states, "Keep unreached states");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic labelled transition systems for event-B machines"};
  app.require_subcommand(1);
  cli::RunConfig c;

  auto* gen = app.add_subcommand("gen", "Generate the SLTS of a machine");
  auto* gen_ref = app.add_subcommand("gen-ref", "Generate the projected SLTS of a refinement");
  auto* check = app.add_subcommand("check", "Check security properties");
  auto* pos = app.add_subcommand("pos", "List proof obligations and verdicts");
  auto* oracle = app.add_subcommand("oracle", "Compare traces and paths up to a depth");
  for (auto* sub : {gen, gen_ref, check, pos, oracle}) common_options(sub, c);
  for (auto* sub : {gen, gen_ref}) {
    sub->add_option("-o,--output", c.output, "Write the structured dump here");
    sub->add_option("--dot", c.dot, "Write a DOT diagram here");
    sub->add_flag("--verbose-labels", c.verbose_labels, "Spell provenances in DOT labels");
  }
  check->add_option("--props", c.properties, "Property file")->required()->check(CLI::ExistingFile);
  auto* syn = check->add_flag_callback("--syntactic", [&] { c.methods = cli::CheckMethods::Syntactic; },
                                       "Only use the SLTS");
  auto* sem = check->add_flag_callback("--semantic", [&] { c.methods = cli::CheckMethods::Semantic; },
                                       "Only use the machine");
  syn->excludes(sem);
  oracle->add_option("--depth", c.depth, "Maximum number of events after the initialisation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }
  if (gen->parsed()) c.command = cli::Command::Gen;
  if (gen_ref->parsed()) c.command = cli::Command::GenRef;
  if (check->parsed()) c.command = cli::Command::Check;
  if (pos->parsed()) c.command = cli::Command::Pos;
  if (oracle->parsed()) c.command = cli::Command::Oracle;
  return cli::run(c, std::cout, std::cerr);
}
