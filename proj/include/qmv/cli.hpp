// Command-line front end: build / class / check / oracle subcommands.
// Exposed as a library function so tests can drive it in-process.

#ifndef QMV_CLI_HPP
#define QMV_CLI_HPP

#include <string>
#include <vector>

namespace qmv::cli {

// Exit codes: 0 success, 1 check failure, 2 usage or parse error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::string& out, std::string& err);

}  // namespace qmv::cli

#endif
