// cfcheck: batch front-end for the counterfactual-worlds checker.
//
// Subcommands: worlds | quantum | lemmas | proof | histories | all
// Exit codes:  0 all checks pass (FLAGs allowed), 1 check failure,
//              2 configuration error, 3 capacity / incomplete search.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfw/commands.hpp"

namespace {

int run(const std::string& command, const std::string& config_path,
        const cfw::RunOptions& opt, bool machine) {
  cfw::Config cfg = config_path.empty() ? cfw::Config::hardy_default()
                                        : cfw::load_config(config_path);

  cfw::Report rep;
  if (command == "worlds")
    rep = cfw::cmd_worlds(cfg, opt);
  else if (command == "quantum")
    rep = cfw::cmd_quantum(cfg, opt);
  else if (command == "lemmas")
    rep = cfw::cmd_lemmas(cfg, opt);
  else if (command == "proof")
    rep = cfw::cmd_proof(cfg, opt);
  else if (command == "histories")
    rep = cfw::cmd_histories(cfg, opt);
  else
    rep = cfw::cmd_all(cfg, opt);

  std::cout << (machine ? rep.render_machine() : rep.render_human());
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counterfactual-worlds checker"};
  app.require_subcommand(1);

  std::string config_path;
  std::string script;
  uint64_t seed = 0;
  double tolerance = -1.0;
  bool machine = false;

  app.add_option("--config", config_path, "configuration file");
  app.add_option("--script", script, "proof script: 'builtin' or a path");
  app.add_option("--seed", seed, "seed for the fuzz checks");
  app.add_option("--tolerance", tolerance, "null-probability tolerance");
  app.add_flag("--machine", machine, "verdict lines only");

  for (const char* name :
       {"worlds", "quantum", "lemmas", "proof", "histories", "all"})
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  cfw::RunOptions opt;
  opt.seed = seed;
  if (tolerance >= 0) opt.null_tolerance = tolerance;
  if (!script.empty()) opt.script = script;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, opt, machine);
  } catch (const cfw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cfw::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const cfw::SearchIncompleteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
