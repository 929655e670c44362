// hilbert.hpp — truncated single-mode Fock space: state vectors, ladder
// operators, coherent states and inner products.
#pragma once

#include "raman_qit/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <tuple>

namespace raman_qit {

using Complex = std::complex<double>;

// Square complex matrix indexed by photon number (or by a composite index
// when acting on atom ⊗ field).
using DenseOperator = Eigen::MatrixXcd;

struct TruncationConfig {
    int n_max = 1;
    double tail_tolerance = 1e-10;

    TruncationConfig() = default;
    explicit TruncationConfig(int n_max_, double tail_tolerance_ = 1e-10)
        : n_max(n_max_), tail_tolerance(tail_tolerance_) {
        validate();
    }

    int dimension() const noexcept { return n_max + 1; }

    void validate() const {
        if (n_max < 1) {
            throw InvalidArgument("TruncationConfig: n_max must be >= 1, got " +
                                  std::to_string(n_max));
        }
        if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
            throw InvalidArgument("TruncationConfig: tail_tolerance must lie in (0, 1)");
        }
    }
};

// Smallest cutoff satisfying n_max >= |alpha|^2 + 10|alpha| + 20.
inline int auto_n_max(Complex alpha) {
    const double r = std::abs(alpha);
    return static_cast<int>(std::ceil(r * r + 10.0 * r + 20.0));
}

inline TruncationConfig auto_truncation(Complex alpha, double tail_tolerance = 1e-10) {
    return TruncationConfig(auto_n_max(alpha), tail_tolerance);
}

// Amplitude vector over |0>, ..., |n_max>. Not necessarily normalized:
// projections and gate outputs may carry any norm until normalized().
class FockVector {
public:
    FockVector() = default;
    explicit FockVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2) {
            throw InvalidArgument("FockVector: need at least two photon-number levels");
        }
    }

    static FockVector zero(int n_max) {
        return FockVector(Eigen::VectorXcd::Zero(n_max + 1));
    }
    static FockVector basis(int n, int n_max) {
        if (n < 0 || n > n_max) {
            throw InvalidArgument("FockVector::basis: photon number out of range");
        }
        FockVector v = zero(n_max);
        v.amps_(n) = 1.0;
        return v;
    }

    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    Eigen::Index dimension() const noexcept { return amps_.size(); }
    int n_max() const noexcept { return static_cast<int>(amps_.size()) - 1; }
    Complex operator[](Eigen::Index n) const { return amps_(n); }

    double squared_norm() const { return amps_.squaredNorm(); }
    double norm() const { return amps_.norm(); }

    FockVector normalized() const {
        const double nrm = norm();
        if (nrm == 0.0) {
            throw InvalidArgument("FockVector: cannot normalize the zero vector");
        }
        return FockVector(amps_ / nrm);
    }

    friend FockVector operator+(const FockVector& a, const FockVector& b) {
        check_same(a, b);
        return FockVector(a.amps_ + b.amps_);
    }
    friend FockVector operator-(const FockVector& a, const FockVector& b) {
        check_same(a, b);
        return FockVector(a.amps_ - b.amps_);
    }
    friend FockVector operator*(Complex s, const FockVector& v) {
        return FockVector(s * v.amps_);
    }

private:
    static void check_same(const FockVector& a, const FockVector& b) {
        if (a.dimension() != b.dimension()) {
            throw DimensionMismatch("FockVector: dimension mismatch");
        }
    }

    Eigen::VectorXcd amps_;
};

// <a|b>, conjugate-linear in a.
inline Complex inner_product(const FockVector& a, const FockVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionMismatch("inner_product: dimensions " + std::to_string(a.dimension()) +
                                " and " + std::to_string(b.dimension()));
    }
    return a.amplitudes().dot(b.amplitudes());
}

inline FockVector apply_operator(const DenseOperator& op, const FockVector& v) {
    if (op.cols() != v.dimension() || op.rows() != v.dimension()) {
        throw DimensionMismatch("apply_operator: operator does not act on this Fock space");
    }
    return FockVector(op * v.amplitudes());
}

// Truncated |alpha>. Uses amp_{n+1} = amp_n * alpha / sqrt(n+1) from
// amp_0 = exp(-|alpha|^2 / 2); throws when the discarded Poisson tail
// exceeds cfg.tail_tolerance.
inline FockVector coherent_amplitudes(Complex alpha, const TruncationConfig& cfg) {
    cfg.validate();
    Eigen::VectorXcd amps(cfg.dimension());
    amps(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < cfg.n_max; ++n) {
        amps(n + 1) = amps(n) * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    const double tail = 1.0 - amps.squaredNorm();
    if (tail > cfg.tail_tolerance) {
        throw TruncationTooSmall(tail, cfg.n_max);
    }
    return FockVector(std::move(amps));
}

inline Complex expectation(const DenseOperator& op, const FockVector& v) {
    return inner_product(v, apply_operator(op, v));
}

struct LadderOperators {
    DenseOperator annihilation;
    DenseOperator creation;
    DenseOperator number;
};

// a|n> = sqrt(n)|n-1>; a^dagger|n_max> = 0. Truncation shows up in the
// commutator: [a, a^dagger] has -n_max at (n_max, n_max) instead of 1.
inline LadderOperators ladder_operators(const TruncationConfig& cfg) {
    cfg.validate();
    const int dim = cfg.dimension();
    LadderOperators ops;
    ops.annihilation = DenseOperator::Zero(dim, dim);
    ops.number = DenseOperator::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        ops.annihilation(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    for (int n = 0; n < dim; ++n) {
        ops.number(n, n) = static_cast<double>(n);
    }
    ops.creation = ops.annihilation.adjoint();
    return ops;
}

} // namespace raman_qit
