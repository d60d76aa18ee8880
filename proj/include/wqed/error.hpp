#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wqed {

enum class ErrorCode {
  InvalidParams,
  InvalidPoint,
  DegenerateBandEdge,
  PoleAtThisEnergy,
  RequiresControlPhotons,
  DegenerateDressing,
  NoInBandSolution,
  SingularSystem,
  BandEdge,
  BoundaryContamination,
  InvalidRunSpec,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// sweeps can store it as row data and the CLI can print a stable name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wqed
