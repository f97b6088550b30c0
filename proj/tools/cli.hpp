#pragma once

#include <iosfwd>

namespace wz::cli {

/// 0 proven or verified, 1 refuted or invalid certificate, 2 not found
/// within budget, 3 input error.
enum class ExitStatus { ok = 0, refuted = 1, not_found = 2, input_error = 3 };

/// wzcert entry point. Diagnostics go to `err`, everything else to `out`.
/// Reads TELESCOPE_MAX_UNKNOWNS as the default ansatz cap when set.
ExitStatus run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wz::cli
