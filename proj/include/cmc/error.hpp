#pragma once

#include <stdexcept>
#include <string>

namespace cmc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class FormulaError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

// Raised when an automaton or an enumeration grows past its configured cap.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what, std::string subformula = {})
        : Error(what), subformula_(std::move(subformula)) {}

    const std::string& subformula() const noexcept { return subformula_; }

private:
    std::string subformula_;
};

}  // namespace cmc
