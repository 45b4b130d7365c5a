#include "semaug/errors.hpp"

namespace semaug {

int exit_code_for(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::Io:             return 1;
        case ErrorCategory::Usage:          return 2;
        case ErrorCategory::Config:         return 3;
        case ErrorCategory::Validation:     return 4;
        case ErrorCategory::Parse:          return 4;
        case ErrorCategory::Consistency:    return 4;
        case ErrorCategory::DegenerateMask: return 4;
        case ErrorCategory::Backend:        return 5;
        case ErrorCategory::Numeric:        return 6;
    }
    return 1;
}

}  // namespace semaug
