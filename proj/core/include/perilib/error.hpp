#pragma once

#include <stdexcept>
#include <string>

namespace perilib {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical guard tripped: radicand near zero, branch point, collision.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Iterative procedure did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Lie series contraction lost during a normal-form step.
class ContractionError : public Error {
public:
    ContractionError(const std::string& what, double factor, int step)
        : Error(what), factor_(factor), step_(step) {}
    double factor() const noexcept { return factor_; }
    int step() const noexcept { return step_; }

private:
    double factor_;
    int step_;
};

}  // namespace perilib
