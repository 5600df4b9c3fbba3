// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// Named commands with JSON arguments, shared by the C interface and the
// command-line tool. Each returns named text outputs (CSV, SVG) and whether
// every gated check passed.

#pragma once

#include <string>
#include <vector>

#include "smatch/experiments.hpp"

namespace smatch {

struct CommandResult {
  std::vector<NamedOutput> outputs;  ///< the first one is the primary output
  std::vector<ResultRecord> records;
  bool gated_pass = true;
  std::string summary;               ///< one line for humans
};

/// Commands: match, torus, pwit, ode, hier_exact, hier_mc, cross_validate,
/// coupling, theorem_targets, verify, figures. Unknown commands and bad
/// arguments throw std::invalid_argument (or FormatError for bad JSON).
CommandResult run_command(const std::string& command, const std::string& args_json);

std::vector<std::string> command_names();

}  // namespace smatch
