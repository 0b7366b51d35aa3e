#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetcl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownSymbolError : public ParseError {
public:
    UnknownSymbolError(const std::string& name, std::size_t position)
        : ParseError("unknown symbol '" + name + "'", position), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Malformed case file; wraps expression parse errors with the offending line.
class CaseFileError : public Error {
public:
    CaseFileError(const std::string& message, int line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Raised by numeric evaluation: division by zero, ln of a nonpositive value, etc.
class DomainError : public Error {
public:
    using Error::Error;
};

// Randomized zero testing could not find enough valid sample points.
class IndeterminateError : public Error {
public:
    using Error::Error;
};

class OrderCapExceeded : public Error {
public:
    using Error::Error;
};

class NonPolynomialError : public Error {
public:
    using Error::Error;
};

class MissingModelError : public Error {
public:
    using Error::Error;
};

}  // namespace jetcl
