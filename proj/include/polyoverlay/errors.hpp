#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyoverlay {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands of incompatible dimension (matrix shapes, simplex/embedding sizes).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A complex or morphism violates a structural precondition of an operation.
class InvalidComplex : public Error {
public:
    using Error::Error;
};

/// Integer coefficient arithmetic left the 64-bit range.
class CoefficientOverflow : public Error {
public:
    using Error::Error;
};

/// Raised when an intersection falls outside the general-position regime the
/// active-set enumeration can resolve (singular restricted systems, inconsistent
/// cell dimensions).
class DegenerateIntersection : public Error {
public:
    using Error::Error;
};

/// A query point lies on (or within tolerance of) a simplex facet.
class BoundaryPoint : public Error {
public:
    using Error::Error;
};

/// Two distinct merged vertices fall within the merge tolerance of a third.
class AmbiguousMerge : public Error {
public:
    using Error::Error;
};

/// Syntax or reference error in a complex file.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace polyoverlay
