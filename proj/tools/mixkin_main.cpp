#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mixkin/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"two-species kinetic gas mixture simulator"};
  app.require_subcommand(1);

  std::string source;
  std::string output_dir;
  bool deterministic = false;
  int dump_every = -1;

  CLI::App* run = app.add_subcommand("run", "run a scenario file or a builtin by name");
  run->add_option("scenario", source, "scenario file path or builtin name")->required();
  CLI::Option* out_opt =
      run->add_option("--output-dir", output_dir, "override the output directory");
  CLI::Option* det_opt = run->add_flag("--deterministic", deterministic,
                                       "bitwise-reproducible reductions");
  CLI::Option* dump_opt = run->add_option("--dump-every", dump_every,
                                          "write a field dump every k-th record");

  CLI::App* list = app.add_subcommand("scenarios", "list the builtin scenarios");
  app.add_subcommand("schema", "print the scenario key reference");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) {
    mixkin::CliOverrides overrides;
    if (*out_opt) overrides.output_dir = output_dir;
    if (*det_opt) overrides.deterministic = deterministic;
    if (*dump_opt) {
      if (dump_every < 0) {
        std::cerr << "--dump-every must be >= 0\n";
        return 2;
      }
      overrides.dump_every = dump_every;
    }
    return mixkin::run_scenario(source, overrides, std::cout);
  }
  if (list->parsed()) {
    for (const std::string& name : mixkin::builtin_scenarios()) {
      std::cout << name << "  -  " << mixkin::builtin_description(name) << "\n";
    }
    return 0;
  }
  std::cout << mixkin::schema_text();
  return 0;
}
