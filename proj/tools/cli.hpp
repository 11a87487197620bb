#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ilab::cli {

/// Runs one subcommand. Exit codes: 0 success, 2 usage or configuration error,
/// 3 numerical failure (a diagnostic.txt is written to the output directory).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace ilab::cli
