#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace medcap::cli {

enum class ExitStatus : int {
  Success = 0,
  Failure = 1,  // unreadable file, parse or validation error
  Usage = 2,
};

/// Runs one `medcap` invocation. `args` excludes the program name. Reports
/// and help go to `out` (unless --out names a file), diagnostics to `err`.
ExitStatus run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace medcap::cli
