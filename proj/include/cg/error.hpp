#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A set or index does not fit the dimensions of its owning context/lattice.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Line and column are 1-based; column 0 means "whole line".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error("line " + std::to_string(line) +
                (column != 0 ? ", column " + std::to_string(column) : std::string{}) + ": " +
                what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Invalid user-supplied parameters (index specs, study specs, flags).
class SpecError : public Error {
public:
    using Error::Error;
};

/// Operation called on an object that cannot support it, e.g. exact stability
/// on a lattice mined with a support threshold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class BudgetError : public Error {
public:
    BudgetError(const std::string& what, std::size_t budget) : Error(what), budget_(budget) {}
    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t budget_;
};

/// An internal consistency check failed.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace cg
