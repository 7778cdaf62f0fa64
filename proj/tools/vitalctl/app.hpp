#pragma once

#include <iosfwd>

namespace vital::cli {

/// Entry point behind vitalctl. Errors print {"error": {...}} to `err`;
/// the return value is the process exit code (0 ok, 1 runtime, 2 usage).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vital::cli
