#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Re(omega) <= 0 handed to an observable conversion.
class NonphysicalFrequency : public Error {
public:
    using Error::Error;
};

/// Evaluation at a coefficient pole (omega = 0, r = 0, ...).
class SingularInput : public Error {
public:
    using Error::Error;
};

/// Iterative solver gave up. Carries the iterate history for diagnostics.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, std::vector<std::complex<double>> trace)
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<std::complex<double>>& trace() const noexcept { return trace_; }

private:
    std::vector<std::complex<double>> trace_;
};

class DegenerateExponent : public Error {
public:
    using Error::Error;
};

class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

/// Right-hand side evaluated too close to r = 0 or to the zero of lambda.
class NearSingularity : public Error {
public:
    using Error::Error;
};

/// Step size underflow while integrating along a contour.
class ContourViolation : public Error {
public:
    using Error::Error;
};

class InvalidSeed : public Error {
public:
    using Error::Error;
};

}  // namespace pps
