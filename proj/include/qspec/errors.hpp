#pragma once

#include <stdexcept>
#include <string>

namespace qspec {

// Invalid input for an operation (rational where an irrational is needed, bad shape...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A configured size budget (bits, |a|, enumeration box) was exceeded.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric procedure could not reach a decision.
struct NumericInconclusive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qspec
