#pragma once

#include <stdexcept>
#include <string>

namespace radlab {

/// Parameters outside the regime an operation is defined for.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed (step underflow, no bracket, budget exhausted).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radlab
