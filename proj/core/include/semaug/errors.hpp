#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semaug {

// Error categories map to CLI exit codes, see exit_code_for().
enum class ErrorCategory {
    Io,
    Usage,
    Config,
    Validation,
    Parse,
    Consistency,
    DegenerateMask,
    Backend,
    Numeric,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& m) : Error(ErrorCategory::Io, m) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error(ErrorCategory::Config, m) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& m) : Error(ErrorCategory::Validation, m) {}
};

// Carries the byte offset reported by the JSON parser.
class ParseError : public Error {
public:
    ParseError(const std::string& m, std::size_t byte_offset)
        : Error(ErrorCategory::Parse, m), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& m) : Error(ErrorCategory::Consistency, m) {}
};

// Object mask covers the whole latent or nothing; the plan must be skipped.
class DegenerateMaskError : public Error {
public:
    explicit DegenerateMaskError(const std::string& m)
        : Error(ErrorCategory::DegenerateMask, m) {}
};

class BackendError : public Error {
public:
    explicit BackendError(const std::string& m) : Error(ErrorCategory::Backend, m) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& m) : Error(ErrorCategory::Numeric, m) {}
};

int exit_code_for(ErrorCategory category) noexcept;

}  // namespace semaug
