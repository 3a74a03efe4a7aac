#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cfw/proofcheck.hpp"
#include "cfw/quantum.hpp"
#include "cfw/setup.hpp"

namespace cfw {

/// Parsed configuration. The file is INI-style: [section] headers and
/// key = value entries, '#' comments, decimal numbers only. Unknown
/// sections or keys are rejected with a line/column position.
///
///   [setup]
///   regions = L R
///   measurements.L = L1 L2
///   measurements.R = R1 R2
///   outcomes = + -
///   spacelike = L:R
///   forward_cone =            # extra "A>B" pairs, optional
///
///   [model]
///   mode = preset-optimal     # preset-optimal | solve | explicit
///   state.re = ...            # explicit mode: 4 decimals
///   state.im = ...
///   angle.L.L1 = 0.0          # explicit mode: one per measurement
///   ...
///
///   [tolerances]
///   null = 1e-9
///   numeric = 1e-12
///
///   [script]                  # optional custom proof script
///   line.1 = LOC1c :: L2 & R2 & L2+ => (R1 []-> L2 & R1 & L2+)
struct Config {
  Setup setup = Setup::hardy();
  CausalStructure causal = CausalStructure::all_spacelike(2);

  enum class ModelMode { PresetOptimal, Solve, Explicit };
  ModelMode mode = ModelMode::PresetOptimal;
  CVector state;                       // explicit mode
  std::array<double, 2> left_angles{};   // explicit mode
  std::array<double, 2> right_angles{};  // explicit mode

  double null_tolerance = 1e-9;
  double numeric_tolerance = 1e-12;

  std::optional<ProofScript> script;

  static Config hardy_default();

  /// Builds the quantum model the config describes. Explicit models are
  /// checked structurally only (see build_explicit_model).
  QuantumModel build_model() const;
};

/// Throws ConfigError with line/column on any malformed input.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Loads a bare script file: one "TAGS :: formula" line per proof line,
/// '#' comments and blank lines ignored.
ProofScript load_script(const std::string& path, const Setup& setup);
ProofScript parse_script_lines(const std::vector<std::string>& lines,
                               const Setup& setup);

/// [model] section text for an explicit model equivalent to `model`,
/// printed with enough digits that a reload reproduces the joint table to
/// 1e-12.
std::string serialize_model(const QuantumModel& model);

}  // namespace cfw
