#pragma once

#include <stdexcept>
#include <string>

namespace isoprofile {

// Failure categories; the CLI maps each onto a process exit status.
enum class ErrorKind {
    InvalidInput,       // malformed document, bad polygon, bad parameter
    Degenerate,         // empty inner set, empty mask, no sign change
    HypothesisFailure,  // inner parallel set disconnected (neck present)
    BudgetExceeded,     // grid larger than the configured cell budget
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid_input";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::HypothesisFailure: return "hypothesis_failure";
        case ErrorKind::BudgetExceeded: return "budget_exceeded";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace isoprofile
