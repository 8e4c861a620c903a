#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace capstone {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or degenerate input (validation failures, violated preconditions).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Outcome of an improper norm integral.
struct ConvergenceVerdict {
    enum class Status { finite, divergent, undecided };

    Status status = Status::undecided;
    double value = 0.0;     // finite: integral value
    double error = 0.0;     // finite: error estimate
    double exponent = 0.0;  // fitted (or exact) radial growth exponent of the integrand
    bool near_critical = false;
    std::vector<double> shell_masses;
    std::string note;

    bool finite() const { return status == Status::finite; }
    bool divergent() const { return status == Status::divergent; }
    bool decided() const { return status != Status::undecided; }
};

std::string to_string(ConvergenceVerdict::Status status);

}  // namespace capstone
