#pragma once

#include <stdexcept>
#include <string>

namespace aacs {

/// Failure categories. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
    validation = 1,
    range = 1,
    numerical = 2,
    verification = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

/// Malformed documents, invalid spectra, nonpositive scales.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Arguments outside the domain of an operation (J >= J*, n beyond an explicit list).
class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

/// Truncation targets that cannot be certified, quadrature that does not converge.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

}  // namespace aacs
