#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qric {

inline constexpr const char* kVersion = "qric 0.1.0";

/// Exit codes: 0 every check passed, 1 a check failed, 2 bad configuration,
/// 3 size guard, 4 I/O failure.
/// `args` excludes the program name. JSON goes to `out` (or the --out file);
/// the human summary and error messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qric
