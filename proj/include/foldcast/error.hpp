#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

namespace foldcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sequence is shorter than an operation requires.
class LengthError : public Error {
public:
    LengthError(const std::string& what, std::size_t minimum = 0)
        : Error(what), minimum_(minimum) {}

    std::size_t minimum() const noexcept { return minimum_; }

private:
    std::size_t minimum_;
};

/// Input data is malformed: non-finite values, bad CSV content, zero denominators.
class DataError : public Error {
public:
    using Error::Error;
};

/// Incompatible or unsupported configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Division by zero (or similar) inside a recursion step.
class NumericDomainError : public Error {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    explicit NumericDomainError(const std::string& what, std::size_t step = npos)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Objective evaluated to a non-finite value.
class EvaluationError : public Error {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    explicit EvaluationError(const std::string& what, std::size_t index = npos)
        : Error(what), index_(index) {}

    /// Offending parameter index, or npos when it cannot be determined.
    std::size_t parameter_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Optimizer detected unbounded descent.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A batch element failed. The original exception is nested.
class BatchError : public Error {
public:
    BatchError(std::size_t index, const std::string& what)
        : Error("batch element " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Walks a chain of nested exceptions and returns the innermost one.
inline std::exception_ptr innermost_exception(std::exception_ptr ptr) {
    for (;;) {
        try {
            std::rethrow_exception(ptr);
        } catch (const std::nested_exception& nested) {
            if (!nested.nested_ptr()) {
                return ptr;
            }
            ptr = nested.nested_ptr();
        } catch (...) {
            return ptr;
        }
    }
}

}  // namespace foldcast
