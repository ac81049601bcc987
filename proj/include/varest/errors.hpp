#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varest {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed inputs: files, indices, sizes, configuration. CLI exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

/// Numeric failures: degenerate moments, vanishing denominators, domain
/// violations. CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public InputError {
public:
    using InputError::InputError;
};

/// Sample index out of range or duplicated.
class BadIndex : public InputError {
public:
    using InputError::InputError;
};

/// Fewer than two sampled units.
class TooSmall : public InputError {
public:
    using InputError::InputError;
};

/// Sample or population size outside the operation's admissible range.
class InvalidSize : public InputError {
public:
    using InputError::InputError;
};

/// Odd or sub-quadratic order requested for a central moment ratio.
class InvalidOrder : public InputError {
public:
    using InputError::InputError;
};

/// Subset space exceeds the enumeration limit.
class TooLarge : public InputError {
public:
    using InputError::InputError;
};

/// File could not be parsed. Carries a 1-based line number when known.
class ParseError : public InputError {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : InputError(line ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Header or column layout does not match the expected schema.
class SchemaError : public InputError {
public:
    using InputError::InputError;
};

/// Required key absent from a parameter file.
class MissingKey : public InputError {
public:
    explicit MissingKey(const std::string& key)
        : InputError("missing key '" + key + "'"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Command invoked with an input mode it does not support.
class ModeError : public InputError {
public:
    using InputError::InputError;
};

class DegenerateVariate : public NumericError {
public:
    using NumericError::NumericError;
};

class ZeroDenominator : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateRegression : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace varest
