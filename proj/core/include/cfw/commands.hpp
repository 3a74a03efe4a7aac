#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cfw/config.hpp"
#include "cfw/report.hpp"

namespace cfw {

/// Options shared by every subcommand.
struct RunOptions {
  uint64_t seed = 0;
  std::optional<double> null_tolerance;  // overrides the config
  std::optional<std::string> script;     // "builtin" or a path
  uint64_t search_bound = uint64_t{1} << 20;
};

/// The check suites behind the CLI subcommands. Each returns a Report whose
/// machine rendering is deterministic for a fixed config and seed.
Report cmd_worlds(const Config& cfg, const RunOptions& opt);
Report cmd_quantum(const Config& cfg, const RunOptions& opt);
Report cmd_lemmas(const Config& cfg, const RunOptions& opt);
Report cmd_proof(const Config& cfg, const RunOptions& opt);
Report cmd_histories(const Config& cfg, const RunOptions& opt);
Report cmd_all(const Config& cfg, const RunOptions& opt);

}  // namespace cfw
