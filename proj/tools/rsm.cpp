// SPDX-License-Identifier: Apache-2.0
// Entry point of the rsm command-line tool.
#include "rsm/cli.hpp"

int main(int argc, char** argv) { return rsm::run_cli(argc, argv); }
