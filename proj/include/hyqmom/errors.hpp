#pragma once

#include <stdexcept>
#include <string>

namespace hyqmom {

// Non-finite input to a conversion.
class InvalidStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A moment vector or primitive state left the realizable set.
// `functional` names the offending quantity ("rho", "p", "k").
class RealizabilityError : public std::runtime_error {
public:
    RealizabilityError(const std::string& functional, double value, const std::string& where = "");
    const std::string& functional() const { return functional_; }
    double value() const { return value_; }

private:
    std::string functional_;
    double value_;
};

// Zero denominator in a rational functional.
class DegenerateStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request outside what the implementation supports (e.g. basis order > 4).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense solve refused because the system is too close to singular.
class IllConditionedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Step refused (CFL violation and the like).
class StepRejectedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hyqmom
