// SPDX-License-Identifier: Apache-2.0
// Command-line front end: argument and config-file parsing, dispatch to the
// library, JSON/CSV serialization and exit-code mapping.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rsm/hecke.hpp"

namespace rsm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDomain = 2,
  kExitNumeric = 3,
  kExitCoverage = 4,
  kExitSelftestFailed = 5,
};

// Builtin names (delta, 11a, 37a), "curve:a1,a2,a3,a4,a6[:level[:sign]]", or an eigenvalue-table path.
EigenSystem load_form(const std::string& spec, u64 p_max);

// RFC 4180 quoting of one CSV field.
std::string csv_field(const std::string& s);
// Locale-independent shortest round-trip rendering of a double.
std::string format_double(double v);

// Runs one invocation; output goes to --output or `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace rsm
