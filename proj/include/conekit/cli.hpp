#pragma once

namespace conekit {

// Entry point for the command-line tool.  Returns the process exit
// code: 0 success (or "true" for checks), 1 "false" check outcome,
// 2 usage or I/O error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace conekit
