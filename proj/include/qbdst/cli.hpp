#pragma once

#include <iosfwd>

namespace qbdst::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kAuditBreach = 2,
  kOracleGuard = 3,
};

// Entry point shared by the qbdst executable and the tests.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qbdst::cli
