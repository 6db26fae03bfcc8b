#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlve {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitDomain = 2, kExitNumerical = 3, kExitConfig = 4 };

// Runs the command line driver; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace qlve
