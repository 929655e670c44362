// protocol.hpp — atom-to-field qubit transfer: regime check, evolution to
// t*, atomic measurement, Hadamard/NOT on the {|-alpha>, |alpha>} code and
// fidelity scoring.
#pragma once

#include "raman_qit/atomfield.hpp"
#include "raman_qit/errors.hpp"
#include "raman_qit/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace raman_qit {

inline constexpr double kDefaultMargin = 10.0;
inline constexpr double kZeroBranchNorm = 1e-14;

// Validity of the effective model:
//   detuning_ratio = delta^2 / (2 |2 lambda alpha|^2)        must be >= margin
//   time_ratio     = t / (3 |delta|^3 / (4 |lambda alpha|^4)) must be <= 1/margin
struct RegimeReport {
    double detuning_ratio = 0.0;
    double time_bound = 0.0;
    double time_ratio = 0.0;
    double margin = kDefaultMargin;
    bool satisfied = false;

    bool detuning_ok() const noexcept { return detuning_ratio >= margin; }
    bool time_ok() const noexcept { return time_ratio <= 1.0 / margin; }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        if (!detuning_ok()) {
            os << "detuning condition Delta^2 >> 2|2 lambda alpha|^2 fails (detuning_ratio = "
               << detuning_ratio << " < margin = " << margin << ")";
        }
        if (!time_ok()) {
            if (!detuning_ok()) os << "; ";
            os << "time condition t << 3 Delta^3 / (4 |lambda alpha|^4) fails (time_ratio = "
               << time_ratio << " > 1/margin = " << 1.0 / margin << ")";
        }
        if (satisfied) os << "regime satisfied";
        return os.str();
    }
};

class RegimeViolation : public Error {
public:
    explicit RegimeViolation(const RegimeReport& report)
        : Error("regime violation: " + report.describe()), report_(report) {}

    const RegimeReport& report() const noexcept { return report_; }

private:
    RegimeReport report_;
};

inline RegimeReport check_regime(const PhysicalParams& p, Complex alpha, double t,
                                 double margin = kDefaultMargin) {
    if (!(margin >= 1.0)) {
        throw InvalidArgument("check_regime: margin must be >= 1");
    }
    const double la2 = p.lambda_c() * p.lambda_c() * std::norm(alpha);  // |lambda alpha|^2
    const double d = p.delta();
    constexpr double inf = std::numeric_limits<double>::infinity();

    RegimeReport r;
    r.margin = margin;
    r.detuning_ratio = la2 == 0.0 ? inf : (d * d) / (2.0 * 4.0 * la2);
    r.time_bound = la2 == 0.0 ? inf : 3.0 * std::abs(d * d * d) / (4.0 * la2 * la2);
    r.time_ratio = t / r.time_bound;
    r.satisfied = r.detuning_ok() && r.time_ok();
    return r;
}

struct MeasurementOutcome {
    Level level = Level::g;
    double probability = 0.0;
    FockVector collapsed_field;  // normalized
};

// Projects a normalized two-level joint state onto |level><level| ⊗ I.
inline MeasurementOutcome project_atom(const JointState& state, Level level) {
    if (state.atom_dim() != 2) {
        throw DimensionMismatch("project_atom: expects a two-level joint state");
    }
    if (!state.is_normalized()) {
        throw InvalidArgument("project_atom: state is not normalized");
    }
    if (level == Level::f) {
        throw InvalidArgument("project_atom: only g or e can be measured");
    }
    const FockVector row = state.field_component(level);
    const double nrm = row.norm();
    if (nrm < kZeroBranchNorm) {
        throw ZeroProbabilityBranch(std::string("project_atom: branch ") + to_string(level) +
                                    " has zero weight");
    }
    return {level, nrm * nrm, FockVector(row.amplitudes() / nrm)};
}

// Orthonormal code basis: zero_state spans |-alpha>, one_state is |alpha>
// Gram-Schmidt-orthogonalized against it. The raw truncated coherent states
// are kept alongside for targets and diagnostics.
struct CatBasis {
    Complex alpha;
    FockVector minus_alpha;  // raw |-alpha>
    FockVector plus_alpha;   // raw |alpha>
    FockVector zero_state;
    FockVector one_state;

    static CatBasis build(Complex alpha, const TruncationConfig& cfg) {
        FockVector minus = coherent_amplitudes(-alpha, cfg);
        FockVector plus = coherent_amplitudes(alpha, cfg);
        FockVector zero = minus.normalized();
        FockVector rest = plus - inner_product(zero, plus) * zero;
        if (rest.norm() < kZeroBranchNorm) {
            throw InvalidArgument("CatBasis: |alpha> and |-alpha> are linearly dependent");
        }
        // Second pass keeps the pair orthogonal to machine precision.
        rest = rest - inner_product(zero, rest) * zero;
        return {alpha, std::move(minus), std::move(plus), std::move(zero), rest.normalized()};
    }

    Eigen::Index dimension() const noexcept { return zero_state.dimension(); }

    // Columns: zero_state, one_state.
    Eigen::MatrixXcd frame() const {
        Eigen::MatrixXcd q(dimension(), 2);
        q.col(0) = zero_state.amplitudes();
        q.col(1) = one_state.amplitudes();
        return q;
    }

    // Components of v along (zero_state, one_state).
    Eigen::Vector2cd coordinates(const FockVector& v) const {
        return frame().adjoint() * v.amplitudes();
    }
};

// Lifts a 2x2 matrix on the code span to the full Fock space, acting as the
// identity on the orthogonal complement.
inline DenseOperator lift_to_span(const CatBasis& basis, const Eigen::Matrix2cd& gate) {
    const Eigen::MatrixXcd q = basis.frame();
    const Eigen::Index dim = basis.dimension();
    return DenseOperator::Identity(dim, dim) - q * q.adjoint() + q * gate * q.adjoint();
}

// (1/sqrt 2)(|0><0| - |1><1| + |1><0| + |0><1|) with |0> -> |-alpha>,
// |1> -> |alpha>.
inline DenseOperator hadamard_alpha(const CatBasis& basis) {
    Eigen::Matrix2cd h;
    h << 1.0, 1.0,
         1.0, -1.0;
    return lift_to_span(basis, h / std::sqrt(2.0));
}

inline DenseOperator not_alpha(const CatBasis& basis) {
    Eigen::Matrix2cd x;
    x << 0.0, 1.0,
         1.0, 0.0;
    return lift_to_span(basis, x);
}

// |<a|b>|^2 / (|a|^2 |b|^2).
inline double fidelity(const FockVector& a, const FockVector& b) {
    const double f = std::norm(inner_product(a, b)) / (a.squared_norm() * b.squared_norm());
    return std::clamp(f, 0.0, 1.0);
}

// Picks the measured level: a fixed branch, or a draw from the Born
// probabilities with a seeded mt19937_64.
struct OutcomeRule {
    enum class Kind { fixed_g, fixed_e, sampled };

    Kind kind = Kind::fixed_e;
    std::uint64_t seed = 0;

    static OutcomeRule fixed(Level level) {
        if (level == Level::f) {
            throw InvalidArgument("OutcomeRule: only g or e can be fixed");
        }
        return {level == Level::g ? Kind::fixed_g : Kind::fixed_e, 0};
    }
    static OutcomeRule sampled(std::uint64_t seed) { return {Kind::sampled, seed}; }

    // u in [0, 1) from the top 53 bits of the first draw; g when u < P(g).
    Level choose(double prob_g) const {
        switch (kind) {
        case Kind::fixed_g: return Level::g;
        case Kind::fixed_e: return Level::e;
        case Kind::sampled: break;
        }
        std::mt19937_64 engine(seed);
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        return u < prob_g ? Level::g : Level::e;
    }
};

struct ProtocolResult {
    MeasurementOutcome outcome;
    FockVector final_field;   // normalized, after the Hadamard
    FockVector target_field;  // normalized ideal transfer target
    double fidelity = 0.0;
    RegimeReport regime;
    double interaction_time = 0.0;
    int n_max = 0;
    std::optional<std::uint64_t> seed;
};

// Normalized c_e|-alpha> + c_g|alpha> after outcome e, c_g|-alpha> + c_e|alpha>
// after outcome g.
inline FockVector transfer_target(const AtomQubit& atom, const CatBasis& basis, Level outcome) {
    const Complex on_minus = outcome == Level::e ? atom.c_e() : atom.c_g();
    const Complex on_plus = outcome == Level::e ? atom.c_g() : atom.c_e();
    return (on_minus * basis.minus_alpha + on_plus * basis.plus_alpha).normalized();
}

// Interaction for t* (or interaction_time, when given), measurement per
// rule, then the same Hadamard for either outcome.
inline ProtocolResult run_protocol(const AtomQubit& atom, Complex alpha, const PhysicalParams& p,
                                   const TruncationConfig& cfg, double margin,
                                   const OutcomeRule& rule,
                                   std::optional<double> interaction_time = std::nullopt) {
    const double t = interaction_time ? *interaction_time : p.protocol_time();
    const RegimeReport regime = check_regime(p, alpha, t, margin);
    if (!regime.satisfied) {
        throw RegimeViolation(regime);
    }

    const JointState state = evolve_analytic(atom, alpha, p, t, cfg);
    if (!state.is_normalized()) {
        throw InvalidArgument("run_protocol: evolved state not normalized; "
                              "tail_tolerance too loose for the 1e-10 norm budget");
    }
    const double prob_g = state.population(Level::g);
    const Level level = rule.choose(prob_g);
    MeasurementOutcome outcome = project_atom(state, level);

    const CatBasis basis = CatBasis::build(alpha, cfg);
    FockVector final_field = apply_operator(hadamard_alpha(basis), outcome.collapsed_field).normalized();
    FockVector target = transfer_target(atom, basis, level);
    const double fid = fidelity(target, final_field);

    ProtocolResult result{std::move(outcome), std::move(final_field), std::move(target), fid,
                          regime, t, cfg.n_max, std::nullopt};
    if (rule.kind == OutcomeRule::Kind::sampled) {
        result.seed = rule.seed;
    }
    return result;
}

} // namespace raman_qit
