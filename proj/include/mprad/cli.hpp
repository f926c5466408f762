#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mprad::cli {

/// Runs the `mprad` command line (args exclude the program name). Returns the
/// process exit code: 0 on success, 2 for usage errors, 1 for everything
/// else. Failures print exactly one line to `err`:
///   mprad: error[<code>]: <message>
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace mprad::cli
