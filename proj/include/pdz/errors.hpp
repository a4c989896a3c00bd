#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Size/shape mismatches, invalid parameters, non-finite data.
class DomainError : public Error {
public:
    using Error::Error;
};

// Box or dense-matrix caps exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A symbol vanishes (or nearly so) somewhere it has to be inverted.
// witness is a human readable description of the offending (k, x).
class SingularSymbolError : public DomainError {
public:
    SingularSymbolError(const std::string& what, std::string witness)
        : DomainError(what), witness(std::move(witness)) {}
    std::string witness;
};

class NotEllipticError : public DomainError {
public:
    NotEllipticError(const std::string& what, std::string witness)
        : DomainError(what), witness(std::move(witness)) {}
    std::string witness;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history(std::move(history)) {}
    std::vector<double> history;
};

}  // namespace pdz
