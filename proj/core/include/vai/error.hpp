#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vai {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed PNG/JPEG stream. `offset()` is the byte position where decoding stopped.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on an input value does not hold.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Pool statistics make the index formula undefined (a mean at or above 1).
class DegeneratePoolError : public Error {
public:
    DegeneratePoolError(const std::string& what, std::string metric)
        : Error(what), metric_(std::move(metric)) {}

    const std::string& metric() const noexcept { return metric_; }

private:
    std::string metric_;
};

/// All raw scores are equal, so min-max scaling has no range.
class DegenerateScalingError : public Error {
public:
    using Error::Error;
};

/// A row of an input CSV is malformed. `line()` is 1-based and counts the header.
class ManifestError : public Error {
public:
    ManifestError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

}  // namespace vai
