#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpp {

/// Argument outside the mathematical domain of an operation (index out of
/// range, mismatched dimensions, probability outside [0,1], ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Request exceeds the desk-scale limits of the library (qubit count,
/// enumeration budget).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A structural invariant does not hold: completeness of a measurement
/// collection, orthonormality of a basis, undeclared variables, ...
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in program text. Lines and columns count from 1.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::vector<std::string> expected, std::string found);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
    std::string found_;
};

}  // namespace qpp
