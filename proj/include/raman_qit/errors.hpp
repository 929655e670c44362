#pragma once

#include <stdexcept>
#include <string>

namespace raman_qit {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition or invariant violated by caller-supplied values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Coherent-state tail beyond n_max exceeds the configured tolerance.
class TruncationTooSmall : public Error {
public:
    TruncationTooSmall(double tail_mass, int n_max)
        : Error("truncation too small: tail mass " + std::to_string(tail_mass) +
                " beyond n_max = " + std::to_string(n_max)),
          tail_mass_(tail_mass), n_max_(n_max) {}

    double tail_mass() const noexcept { return tail_mass_; }
    int n_max() const noexcept { return n_max_; }

private:
    double tail_mass_;
    int n_max_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonHermitianInput : public Error {
public:
    using Error::Error;
};

// Selected measurement branch has (numerically) zero weight.
class ZeroProbabilityBranch : public Error {
public:
    using Error::Error;
};

} // namespace raman_qit
