#pragma once

namespace chemoflux {

/// Full command-line driver behind the chemoflux binary.
/// Subcommands: run <config>, study reg|sweep|mesh <config>, check <config>;
/// --override key=value is repeatable on all of them.
/// Exit codes: 0 pass/complete, 1 invariant failure, 2 config error,
/// 3 solver failure.
int cli_main(int argc, const char* const* argv);

} // namespace chemoflux
