#pragma once

#include <stdexcept>
#include <string>

namespace obstructa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched truncation parameters between operands.
struct ConfigError : Error {
    using Error::Error;
};

// Input outside the operation's domain (e.g. energy below the floor).
struct DomainError : Error {
    using Error::Error;
};

// Division by the zero scalar.
struct DivisionError : Error {
    using Error::Error;
};

// Leading part is not a single monomial, so no inverse exists in the
// truncated ring (the (1+e) situation).
struct NotMonomialInvertibleError : Error {
    using Error::Error;
};

// Geometric series of a valuation-zero, non-nilpotent element.
struct DivergenceError : Error {
    using Error::Error;
};

// Window enumeration exceeded the configured cell cap.
struct ResourceError : Error {
    std::size_t count;
    ResourceError(const std::string& msg, std::size_t n) : Error(msg), count(n) {}
};

// Computation refused because the window's defect ledger is dirty.
struct RefusalError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line = 0, column = 0;
    ParseError(const std::string& msg, int l, int c) : Error(msg), line(l), column(c) {}
};

}  // namespace obstructa
