#include <exception>
#include <iostream>
#include <map>

#include "common.hpp"

int main(int argc, char** argv) {
  CLI::App app{"PuzzleBoard calibration patterns: generate, render, detect, benchmark"};
  app.require_subcommand(1, 1);
  pbcli::Shared shared;
  app.add_flag("-v,--verbose", shared.verbosity, "More progress output on stderr (repeatable)");

  std::map<std::string, pbcli::Runner> runners{
      {"generate", pbcli::add_generate(app, shared)}, {"render", pbcli::add_render(app, shared)},
      {"detect", pbcli::add_detect(app, shared)},     {"bench", pbcli::add_bench(app, shared)},
      {"rings", pbcli::add_rings(app, shared)},
  };
  // Lets -v follow the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pbcli::kUsage;
  }

  try {
    return runners.at(app.get_subcommands().front()->get_name())();
  } catch (const pbcli::Failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pbcli::kUsage;
  }
}
