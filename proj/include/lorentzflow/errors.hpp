#pragma once

#include <stdexcept>
#include <string>

namespace lorentzflow {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// An input matrix fails the det == 1 check required for composition.
class DetViolation : public Error {
public:
    using Error::Error;
};

// A matrix handed to decompose() is not unimodular within tolerance.
class NotUnimodular : public Error {
public:
    using Error::Error;
};

// Inputs are degenerate for the requested operation (e.g. both rapidities zero,
// so the resultant direction is undefined).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A flow evaluation hit the beta ~ 0 singularity of dtheta/dxi off the axis.
class NearSingularBeta : public Error {
public:
    using Error::Error;
};

// The integrator's local error estimate exceeded tolerance, or a step left the
// physical region by more than roundoff.  Retry with a smaller step.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

// A speed argument is not inside (-1, 1).
class SpeedOutOfRange : public Error {
public:
    using Error::Error;
};

// A matrix claimed to be a Lorentz transformation has time-time entry < 1.
class NotOrthochronous : public Error {
public:
    using Error::Error;
};

} // namespace lorentzflow
