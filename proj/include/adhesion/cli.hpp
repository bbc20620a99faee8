#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "adhesion/calibrate.hpp"
#include "adhesion/scenario.hpp"

namespace adhesion::cli {

enum ExitCode : int {
  kSuccess = 0,
  kComparisonFailed = 1,
  kInputError = 2,
  kSolverFailure = 3,
};

/// Runs the command line `args` (args[0] is the program name). Output goes
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// 17 significant digits, '.' decimal separator whatever the locale.
std::string format_number(double value);

/// Series as CSV with header `t,x,m,v` and `\n` line endings.
void write_csv(std::ostream& os, const SolutionSeries& series);
void write_json(std::ostream& os, const SolutionSeries& series);

struct SampleFile {
  SampleAxis axis;
  std::vector<MassSample> samples;
};

/// Parses a `t,m` or `x,m` CSV. Errors name the offending line.
SampleFile parse_sample_csv(std::istream& is);

}  // namespace adhesion::cli
