#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adiabatic {

enum class Errc {
  non_hermitian,
  bad_subset,
  dim_mismatch,
  out_of_range,
  empty_trace,
  gap_too_small,
  step_too_coarse,
  wrong_size,
  invalid_argument,
};

inline constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::non_hermitian: return "NonHermitian";
    case Errc::bad_subset: return "BadSubset";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::gap_too_small: return "GapTooSmall";
    case Errc::step_too_coarse: return "StepTooCoarse";
    case Errc::wrong_size: return "WrongSize";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

  /// Errors that signal a violated numerical contract rather than bad input.
  [[nodiscard]] bool is_numerical() const noexcept {
    return code_ == Errc::step_too_coarse || code_ == Errc::gap_too_small;
  }

 private:
  Errc code_;
};

}  // namespace adiabatic
