#pragma once

#include <iosfwd>
#include <string>

#include "updcheck/analysis/impact.hpp"
#include "updcheck/error.hpp"

namespace updcheck::cli {

enum class Format { Text, Json };

/// Human report: verdict banner, then one block per impacted function with
/// its call stack and the changed fragments. JSON is report_json().
std::string render_report(const analysis::UpdateReport& r, Format format);

/// 65 bad input, 66 unknown package/version/registry, 67 resolution,
/// 68 red baseline, 70 anything else.
int exit_code_for(ErrorKind kind);
constexpr int kUsageError = 64;

/// Parses argv and runs one subcommand, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace updcheck::cli
