#pragma once

// Command-line front end: point, sweep, oracle-stationary, oracle-wavepacket
// and verify. Exit codes: 0 success, 1 usage error, 2 computation error,
// 3 verification failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace wqed {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;
inline constexpr int kExitVerification = 3;

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same as above with argv[0] supplied internally; used by the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wqed
