#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bonacci {

enum class ErrorCode {
    invalid_parameter,
    precision_too_low,
    context_mismatch,
    not_integral,
    domain_error,
    budget_error,
    construction_error,
    structure_error,
    alphabet_mismatch,
    parse_error,
    empty_plot,
    spec_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace bonacci
