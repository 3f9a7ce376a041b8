#include "bonacci/error.hpp"

namespace bonacci {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_parameter:
        return "invalid-parameter";
    case ErrorCode::precision_too_low:
        return "precision-too-low";
    case ErrorCode::context_mismatch:
        return "context-mismatch";
    case ErrorCode::not_integral:
        return "not-integral";
    case ErrorCode::domain_error:
        return "domain-error";
    case ErrorCode::budget_error:
        return "budget-error";
    case ErrorCode::construction_error:
        return "construction-error";
    case ErrorCode::structure_error:
        return "structure-error";
    case ErrorCode::alphabet_mismatch:
        return "alphabet-mismatch";
    case ErrorCode::parse_error:
        return "parse-error";
    case ErrorCode::empty_plot:
        return "empty-plot";
    case ErrorCode::spec_error:
        return "spec-error";
    }
    return "unknown";
}

} // namespace bonacci
