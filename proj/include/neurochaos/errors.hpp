#pragma once

#include <stdexcept>
#include <string>

namespace nl {

// Bad user input: missing files, malformed CSV, inconsistent schema or flags.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure: non-finite values, invalid models, solver breakdown.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace nl
