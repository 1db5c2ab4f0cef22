#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsreg {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public Error {
public:
    using Error::Error;
};

class NotSymmetricError : public Error {
public:
    using Error::Error;
};

class LagOutOfRangeError : public Error {
public:
    using Error::Error;
};

class NoPositiveEigenvalueError : public Error {
public:
    using Error::Error;
};

class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

class BlockTooSmallError : public Error {
public:
    using Error::Error;
};

class InvalidLevelError : public Error {
public:
    using Error::Error;
};

class RankDeficientContrastError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or precondition violation not covered by a more
/// specific class.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Formula text could not be parsed; carries the byte offset of the
/// first offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownColumnError : public Error {
public:
    using Error::Error;
};

class FileNotFoundError : public Error {
public:
    using Error::Error;
};

class EmptyAfterFilteringError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration rejected; carries a JSON pointer to the
/// offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string pointer)
        : Error(what + " (at " + pointer + ")"), pointer_(std::move(pointer)) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace tsreg
