// atomfield.hpp — atom ⊗ field states, effective degenerate-Raman and full
// Lambda-model Hamiltonians, analytic and numeric time evolution.
//
// Composite index convention: level * field_dim + n, with levels ordered
// g = 0, e = 1, f = 2. Frequencies are in rad/s with hbar = 1.
#pragma once

#include "raman_qit/errors.hpp"
#include "raman_qit/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace raman_qit {

enum class Level { g = 0, e = 1, f = 2 };

inline const char* to_string(Level level) noexcept {
    switch (level) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::f: return "f";
    }
    return "?";
}

// Mode frequency omega, degenerate lower-level frequency omega0, upper-level
// frequency omega_f, lower<->upper coupling lambda_c and detuning delta,
// tied together by omega_f - omega0 = delta + omega.
class PhysicalParams {
public:
    static PhysicalParams from_detuning(double lambda_c, double delta, double omega = 0.0,
                                        double omega0 = 0.0) {
        return PhysicalParams(omega, omega0, omega0 + (delta + omega), lambda_c, delta);
    }

    static PhysicalParams from_levels(double lambda_c, double omega, double omega0,
                                      double omega_f) {
        return PhysicalParams(omega, omega0, omega_f, lambda_c, (omega_f - omega0) - omega);
    }

    double omega() const noexcept { return omega_; }
    double omega0() const noexcept { return omega0_; }
    double omega_f() const noexcept { return omega_f_; }
    double lambda_c() const noexcept { return lambda_; }
    double delta() const noexcept { return delta_; }

    // Effective atom-field coupling after eliminating |f>.
    double beta() const noexcept { return -lambda_ * lambda_ / delta_; }

    // t* = pi / (2|beta|); exp(-2i beta t*) = -1 for either sign of beta.
    double protocol_time() const {
        const double b = beta();
        if (b == 0.0) {
            throw InvalidArgument("protocol_time: beta = 0 (no atom-field coupling)");
        }
        return std::numbers::pi / (2.0 * std::abs(b));
    }

private:
    PhysicalParams(double omega, double omega0, double omega_f, double lambda_c, double delta)
        : omega_(omega), omega0_(omega0), omega_f_(omega_f), lambda_(lambda_c), delta_(delta) {
        for (double v : {omega, omega0, omega_f, lambda_c, delta}) {
            if (!std::isfinite(v)) {
                throw InvalidArgument("PhysicalParams: non-finite value");
            }
        }
        if (delta == 0.0) {
            throw InvalidArgument("PhysicalParams: detuning must be nonzero");
        }
        // Resonance condition up to the rounding of one addition.
        const double lhs = omega_f - omega0;
        const double rhs = delta + omega;
        const double scale = std::max({std::abs(omega_f), std::abs(omega0), std::abs(delta),
                                       std::abs(omega), 1.0});
        if (std::abs(lhs - rhs) > 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            throw InvalidArgument("PhysicalParams: omega_f - omega0 != delta + omega");
        }
    }

    double omega_;
    double omega0_;
    double omega_f_;
    double lambda_;
    double delta_;
};

inline constexpr double kAtomNormTolerance = 1e-12;
inline constexpr double kJointNormTolerance = 1e-10;

// c_g|g> + c_e|e> of the degenerate lower doublet.
class AtomQubit {
public:
    AtomQubit(Complex c_g, Complex c_e) : c_g_(c_g), c_e_(c_e) {
        const double n2 = std::norm(c_g) + std::norm(c_e);
        if (!(std::abs(n2 - 1.0) <= kAtomNormTolerance)) {
            throw InvalidArgument("AtomQubit: |c_g|^2 + |c_e|^2 = " + std::to_string(n2) +
                                  ", expected 1");
        }
    }

    static AtomQubit ground() { return {1.0, 0.0}; }
    static AtomQubit excited() { return {0.0, 1.0}; }

    static AtomQubit from_polar(double mag_g, double phase_g, double mag_e, double phase_e) {
        return {std::polar(mag_g, phase_g), std::polar(mag_e, phase_e)};
    }

    Complex c_g() const noexcept { return c_g_; }
    Complex c_e() const noexcept { return c_e_; }
    Complex c_plus() const noexcept { return 0.5 * (c_e_ + c_g_); }
    Complex c_minus() const noexcept { return 0.5 * (c_e_ - c_g_); }

    AtomQubit with_global_phase(double phase) const {
        const Complex u = std::polar(1.0, phase);
        return {u * c_g_, u * c_e_};
    }

private:
    Complex c_g_;
    Complex c_e_;
};

struct ThreeLevelAtom {
    Complex c_g;
    Complex c_e;
    Complex c_f;

    static ThreeLevelAtom from(const AtomQubit& q) { return {q.c_g(), q.c_e(), 0.0}; }
};

// Atom ⊗ field amplitudes as an atom_dim x field_dim matrix (row = level).
class JointState {
public:
    // Flag derived from the actual norm.
    explicit JointState(Eigen::MatrixXcd amplitudes)
        : amps_(std::move(amplitudes)) {
        check_shape();
        normalized_ = std::abs(amps_.squaredNorm() - 1.0) <= kJointNormTolerance;
    }

    JointState(Eigen::MatrixXcd amplitudes, bool normalized)
        : amps_(std::move(amplitudes)), normalized_(normalized) {
        check_shape();
        if (normalized_ && std::abs(amps_.squaredNorm() - 1.0) > kJointNormTolerance) {
            throw InvalidArgument("JointState: flagged normalized but squared norm is " +
                                  std::to_string(amps_.squaredNorm()));
        }
    }

    static JointState product(const AtomQubit& atom, const FockVector& field) {
        Eigen::MatrixXcd m(2, field.dimension());
        m.row(0) = atom.c_g() * field.amplitudes().transpose();
        m.row(1) = atom.c_e() * field.amplitudes().transpose();
        return JointState(std::move(m));
    }

    static JointState product(const ThreeLevelAtom& atom, const FockVector& field) {
        Eigen::MatrixXcd m(3, field.dimension());
        m.row(0) = atom.c_g * field.amplitudes().transpose();
        m.row(1) = atom.c_e * field.amplitudes().transpose();
        m.row(2) = atom.c_f * field.amplitudes().transpose();
        return JointState(std::move(m));
    }

    int atom_dim() const noexcept { return static_cast<int>(amps_.rows()); }
    Eigen::Index field_dim() const noexcept { return amps_.cols(); }
    Eigen::Index dimension() const noexcept { return amps_.size(); }
    const Eigen::MatrixXcd& amplitudes() const noexcept { return amps_; }
    bool is_normalized() const noexcept { return normalized_; }
    double squared_norm() const { return amps_.squaredNorm(); }

    FockVector field_component(Level level) const {
        return FockVector(amps_.row(row_of(level)).transpose());
    }

    double population(Level level) const { return amps_.row(row_of(level)).squaredNorm(); }

    // Flattened as level * field_dim + n.
    Eigen::VectorXcd flatten() const {
        Eigen::VectorXcd v(amps_.size());
        for (Eigen::Index a = 0; a < amps_.rows(); ++a) {
            v.segment(a * field_dim(), field_dim()) = amps_.row(a).transpose();
        }
        return v;
    }

    static JointState unflatten(const Eigen::VectorXcd& v, int atom_dim) {
        if (atom_dim <= 0 || v.size() % atom_dim != 0) {
            throw DimensionMismatch("JointState::unflatten: size not divisible by atom_dim");
        }
        const Eigen::Index nf = v.size() / atom_dim;
        Eigen::MatrixXcd m(atom_dim, nf);
        for (int a = 0; a < atom_dim; ++a) {
            m.row(a) = v.segment(a * nf, nf).transpose();
        }
        return JointState(std::move(m));
    }

    // Adds an empty |f> row to a two-level state.
    JointState embed_three_level() const {
        if (atom_dim() != 2) {
            throw DimensionMismatch("embed_three_level: state already has atom_dim = " +
                                    std::to_string(atom_dim()));
        }
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, field_dim());
        m.topRows(2) = amps_;
        return JointState(std::move(m), normalized_);
    }

    double max_abs_difference(const JointState& other) const {
        if (other.amps_.rows() != amps_.rows() || other.amps_.cols() != amps_.cols()) {
            throw DimensionMismatch("JointState: shape mismatch");
        }
        return (amps_ - other.amps_).cwiseAbs().maxCoeff();
    }

private:
    void check_shape() const {
        if (amps_.rows() != 2 && amps_.rows() != 3) {
            throw DimensionMismatch("JointState: atom_dim must be 2 or 3");
        }
        if (amps_.cols() < 2) {
            throw DimensionMismatch("JointState: field_dim must be >= 2");
        }
    }

    int row_of(Level level) const {
        const int r = static_cast<int>(level);
        if (r >= atom_dim()) {
            throw DimensionMismatch(std::string("JointState: no level ") + to_string(level) +
                                    " in a two-level state");
        }
        return r;
    }

    Eigen::MatrixXcd amps_;
    bool normalized_ = false;
};

// Kronecker product atom_op ⊗ field_op in the level-major composite index.
inline DenseOperator atom_field_kron(const Eigen::MatrixXcd& atom_op,
                                     const DenseOperator& field_op) {
    const Eigen::Index na = atom_op.rows();
    const Eigen::Index nf = field_op.rows();
    DenseOperator out = DenseOperator::Zero(na * nf, na * nf);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < na; ++j) {
            if (atom_op(i, j) != Complex{0.0, 0.0}) {
                out.block(i * nf, j * nf, nf, nf) = atom_op(i, j) * field_op;
            }
        }
    }
    return out;
}

// Stark term plus Raman exchange, both with strength beta:
// H = beta n (|g><g| + |e><e|) + beta n (|e><g| + |g><e|).
// Block at photon number n is beta n [[1, 1], [1, 1]], eigenvalues {0, 2 n beta}.
inline DenseOperator build_effective_hamiltonian(const PhysicalParams& p,
                                                 const TruncationConfig& cfg) {
    const auto ops = ladder_operators(cfg);
    Eigen::Matrix2cd atom;
    atom << 1.0, 1.0,
            1.0, 1.0;
    return atom_field_kron(p.beta() * atom, ops.number);
}

// Rotating-frame Lambda model with both lower levels at zero energy and |f>
// at delta: H = delta |f><f| + lambda (a |f><g| + a |f><e| + h.c.).
// Conserves photon number + |f> occupation.
inline DenseOperator build_full_hamiltonian(const PhysicalParams& p,
                                            const TruncationConfig& cfg) {
    const auto ops = ladder_operators(cfg);
    const Eigen::Index nf = cfg.dimension();
    Eigen::Matrix3cd f_proj = Eigen::Matrix3cd::Zero();
    f_proj(2, 2) = 1.0;
    Eigen::Matrix3cd f_from_lower = Eigen::Matrix3cd::Zero();
    f_from_lower(2, 0) = 1.0;  // |f><g|
    f_from_lower(2, 1) = 1.0;  // |f><e|

    DenseOperator absorb = atom_field_kron(f_from_lower, ops.annihilation);
    DenseOperator h = p.delta() * atom_field_kron(f_proj, DenseOperator::Identity(nf, nf));
    h += p.lambda_c() * (absorb + absorb.adjoint());
    return h;
}

// Entrywise anti-Hermitian residual max |H - H^dagger|.
inline double hermiticity_defect(const DenseOperator& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

// exp(-iHt) through a single Hermitian eigendecomposition, reusable across
// many times.
class Propagator {
public:
    explicit Propagator(const DenseOperator& h) {
        if (h.rows() != h.cols() || h.rows() == 0) {
            throw DimensionMismatch("Propagator: Hamiltonian must be square and non-empty");
        }
        const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
        if (hermiticity_defect(h) > 1e-12 * scale) {
            throw NonHermitianInput("Propagator: max |H - H^dagger| = " +
                                    std::to_string(hermiticity_defect(h)));
        }
        Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h);
        if (solver.info() != Eigen::Success) {
            throw Error("Propagator: eigendecomposition failed");
        }
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    Eigen::Index dimension() const noexcept { return vectors_.rows(); }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const {
        if (psi.size() != dimension()) {
            throw DimensionMismatch("Propagator: state dimension " + std::to_string(psi.size()) +
                                    " vs Hamiltonian dimension " + std::to_string(dimension()));
        }
        Eigen::VectorXcd coeffs = vectors_.adjoint() * psi;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            coeffs(k) *= std::polar(1.0, -energies_(k) * t);
        }
        return vectors_ * coeffs;
    }

    JointState evolve(const JointState& state, double t) const {
        JointState out = JointState::unflatten(apply(state.flatten(), t), state.atom_dim());
        return JointState(out.amplitudes(), state.is_normalized());
    }

    DenseOperator unitary(double t) const {
        Eigen::VectorXcd phases(energies_.size());
        for (Eigen::Index k = 0; k < phases.size(); ++k) {
            phases(k) = std::polar(1.0, -energies_(k) * t);
        }
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

inline JointState evolve_numeric(const JointState& initial, const DenseOperator& h, double t) {
    if (h.rows() != initial.dimension()) {
        throw DimensionMismatch("evolve_numeric: Hamiltonian dimension " +
                                std::to_string(h.rows()) + " vs state dimension " +
                                std::to_string(initial.dimension()));
    }
    return Propagator(h).evolve(initial, t);
}

// Closed-form evolution under the effective Hamiltonian:
//   g-row: c+ |e^{-2i beta t} alpha> - c- |alpha>
//   e-row: c+ |e^{-2i beta t} alpha> + c- |alpha>
inline JointState evolve_analytic(const AtomQubit& atom, Complex alpha, const PhysicalParams& p,
                                  double t, const TruncationConfig& cfg) {
    const Complex rotated = alpha * std::polar(1.0, -2.0 * p.beta() * t);
    const FockVector moved = coherent_amplitudes(rotated, cfg);
    const FockVector still = coherent_amplitudes(alpha, cfg);
    const Complex cp = atom.c_plus();
    const Complex cm = atom.c_minus();
    Eigen::MatrixXcd m(2, cfg.dimension());
    m.row(0) = (cp * moved.amplitudes() - cm * still.amplitudes()).transpose();
    m.row(1) = (cp * moved.amplitudes() + cm * still.amplitudes()).transpose();
    return JointState(std::move(m));
}

// samples points t_k = t_max * k / (samples - 1), k = 0..samples-1.
inline std::vector<double> uniform_time_grid(double t_max, int samples) {
    if (samples < 2) {
        throw InvalidArgument("uniform_time_grid: samples must be >= 2");
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw InvalidArgument("uniform_time_grid: t_max must be finite and >= 0");
    }
    std::vector<double> grid(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        grid[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / (samples - 1);
    }
    return grid;
}

// Largest |f> population of |g> ⊗ |alpha> under the full Hamiltonian over a
// uniform grid on [0, t_max].
inline double f_population_ceiling(Complex alpha, const PhysicalParams& p, double t_max,
                                   int samples, const TruncationConfig& cfg) {
    const auto grid = uniform_time_grid(t_max, samples);
    const Propagator prop(build_full_hamiltonian(p, cfg));
    const JointState init =
        JointState::product(ThreeLevelAtom::from(AtomQubit::ground()), coherent_amplitudes(alpha, cfg));
    double ceiling = 0.0;
    for (double t : grid) {
        ceiling = std::max(ceiling, prop.evolve(init, t).population(Level::f));
    }
    return ceiling;
}

inline double f_population_ceiling(Complex alpha, const PhysicalParams& p, double t_max,
                                   int samples) {
    return f_population_ceiling(alpha, p, t_max, samples, auto_truncation(alpha));
}

} // namespace raman_qit
