#pragma once

#include <ostream>

namespace stefan::cli {

// Exit codes of the stefan tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNoRoot = 3;
inline constexpr int kExitUnsupported = 4;
inline constexpr int kExitAudit = 5;

// Runs `stefan classify|solve|verify|export <problem> [flags]`. Data go to
// files and `out`; the first line written to `err` on failure has the form
// "error[kind]: message".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stefan::cli
