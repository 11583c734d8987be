#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace spmesl {

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Input failed a precondition: bad shapes, out-of-domain arguments,
// malformed configuration. The CLI maps these to exit code 2.
class ValidationError : public Error
{
public:
    using Error::Error;
};

class DimensionError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

class ConstantColumn : public ValidationError
{
public:
    explicit ConstantColumn(std::size_t column)
        : ValidationError("column " + std::to_string(column) + " has zero variance"),
          column_(column)
    {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class NoBracket : public Error
{
public:
    using Error::Error;
};

// Iteration limit exhausted. The CLI maps these to exit code 3.
class NonConvergence : public Error
{
public:
    NonConvergence(const std::string& what, std::size_t limit)
        : Error(what), limit_(limit)
    {}
    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

class PDFailure : public Error
{
public:
    using Error::Error;
};

class RetryExhausted : public Error
{
public:
    using Error::Error;
};

class IOError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

} // namespace spmesl
