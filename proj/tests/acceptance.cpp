// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "raman_qit/cli/commands.hpp"
#include "raman_qit/cli/config.hpp"
#include "raman_qit/raman_qit.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace raman_qit;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

AtomQubit random_atom(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Complex a(g(rng), g(rng)), b(g(rng), g(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

Outcome overlap_law() {
    Outcome o;
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const TruncationConfig cfg = auto_truncation(a);
        const Complex ov = inner_product(coherent_amplitudes(a, cfg), coherent_amplitudes(-a, cfg));
        worst = std::max(worst, std::abs(ov - std::exp(-2.0 * a * a)));
    }
    o.require(worst < 1e-8, "max |<a|-a> - e^{-2|a|^2}| = " + num(worst));
    o.detail = o.detail.empty() ? "max error " + num(worst) : o.detail;
    return o;
}

Outcome analytic_oracle() {
    Outcome o;
    std::mt19937_64 rng(20111001);
    std::uniform_real_distribution<double> mag(0.0, 2.0), ph(-kPi, kPi), beta_d(-0.1, -0.01), unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const AtomQubit atom = random_atom(rng);
        const Complex alpha = std::polar(mag(rng), ph(rng));
        const double beta = beta_d(rng);
        const auto p = PhysicalParams::from_detuning(1.0, -1.0 / beta);
        const double t = unit(rng) * 2.0 * kPi / std::abs(p.beta());
        const TruncationConfig cfg = auto_truncation(alpha);
        const JointState init = JointState::product(atom, coherent_amplitudes(alpha, cfg));
        const JointState numeric = evolve_numeric(init, build_effective_hamiltonian(p, cfg), t);
        worst = std::max(worst, numeric.max_abs_difference(evolve_analytic(atom, alpha, p, t, cfg)));
    }
    o.require(worst < 1e-8, "max amplitude difference " + num(worst));
    if (o.pass) o.detail = "max amplitude difference " + num(worst);
    return o;
}

Outcome measurement_closed_form() {
    Outcome o;
    const auto p = PhysicalParams::from_detuning(1.0, 100.0);
    double worst_p = 0.0, worst_sum = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        const JointState s = evolve_analytic(AtomQubit::ground(), a, p, p.protocol_time(), auto_truncation(a));
        const double pe = project_atom(s, Level::e).probability;
        const double pg = project_atom(s, Level::g).probability;
        worst_p = std::max(worst_p, std::abs(pe - 0.5 * (1.0 - std::exp(-2.0 * a * a))));
        worst_sum = std::max(worst_sum, std::abs(pe + pg - 1.0));
    }
    o.require(worst_p < 1e-8, "P(e) error " + num(worst_p));
    o.require(worst_sum < 1e-10, "P(g)+P(e)-1 = " + num(worst_sum));
    if (o.pass) o.detail = "P(e) error " + num(worst_p) + ", completeness " + num(worst_sum);
    return o;
}

Outcome gate_algebra() {
    Outcome o;
    const Complex alpha = 2.0;
    const CatBasis b = CatBasis::build(alpha, auto_truncation(alpha));
    const Eigen::MatrixXcd q = b.frame();
    double worst = 0.0;
    for (const DenseOperator& u : {hadamard_alpha(b), not_alpha(b)}) {
        const Eigen::Matrix2cd unitarity = q.adjoint() * u.adjoint() * u * q;
        const Eigen::Matrix2cd involution = q.adjoint() * u * u * q;
        worst = std::max(worst, (unitarity - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        worst = std::max(worst, (involution - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    }
    o.require(worst < 1e-12, "unitarity/involution defect " + num(worst));

    const FockVector out = apply_operator(hadamard_alpha(b), b.plus_alpha);
    const FockVector target = (b.minus_alpha - b.plus_alpha).normalized();
    const double action_err = (out - target).norm();
    const double bound = 2.0 * std::exp(-2.0 * std::norm(alpha));
    o.require(action_err < bound, "|A|a> - target| = " + num(action_err) + " >= " + num(bound));
    if (o.pass) o.detail = "defect " + num(worst) + ", action error " + num(action_err) + " < " + num(bound);
    return o;
}

Outcome end_to_end() {
    Outcome o;
    const auto p = PhysicalParams::from_detuning(1.0, 100.0);
    std::mt19937_64 rng(42);
    std::vector<AtomQubit> atoms;
    for (int i = 0; i < 20; ++i) atoms.push_back(random_atom(rng));
    double min2 = 1.0, min3 = 1.0;
    for (const auto& atom : atoms) {
        for (Level l : {Level::g, Level::e}) {
            min2 = std::min(min2, run_protocol(atom, 2.0, p, auto_truncation(2.0), kDefaultMargin,
                                               OutcomeRule::fixed(l)).fidelity);
            min3 = std::min(min3, run_protocol(atom, 3.0, p, auto_truncation(3.0), kDefaultMargin,
                                               OutcomeRule::fixed(l)).fidelity);
        }
    }
    o.require(min2 >= 0.99, "min fidelity at alpha=2: " + num(min2));
    o.require(min3 >= 0.9999, "min fidelity at alpha=3: " + num(min3));
    if (o.pass) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "min fidelity %.8f (alpha=2), %.10f (alpha=3)", min2, min3);
        o.detail = buf;
    }
    return o;
}

Outcome elimination_validity() {
    Outcome o;
    cli::RunConfig c = cli::parse_config("cg = 1, 0\nce = 0, 0\nalpha = 1, 0\nlambda = 1\ndelta = 100\n");
    auto worst = [](const std::vector<cli::ValidationSample>& rows, double cli::ValidationSample::*field) {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, r.*field);
        return m;
    };
    const double t_deep = c.params().protocol_time();
    const auto deep = cli::validation_samples(c, t_deep, 50);
    const double disc_deep = worst(deep, &cli::ValidationSample::max_pop_discrepancy);
    const double f_deep = worst(deep, &cli::ValidationSample::pop_f_full);
    o.require(disc_deep < 5e-2, "discrepancy at Delta=100: " + num(disc_deep));
    o.require(f_deep < 1.6e-3, "pop_f at Delta=100: " + num(f_deep));

    c.delta = 2.0;
    const auto broken = cli::validation_samples(c, c.params().protocol_time(), 50);
    const double disc_broken = worst(broken, &cli::ValidationSample::max_pop_discrepancy);
    o.require(disc_broken > 0.1, "discrepancy at Delta=2: " + num(disc_broken));
    if (o.pass) {
        o.detail = "Delta=100: discrepancy " + num(disc_deep) + ", pop_f " + num(f_deep) +
                   "; Delta=2: discrepancy " + num(disc_broken);
    }
    return o;
}

Outcome regime_arithmetic() {
    Outcome o;
    const RegimeReport r = check_regime(PhysicalParams::from_detuning(1.0, 20.0), 1.0, 100.0, kDefaultMargin);
    o.require(r.detuning_ratio == 50.0, "detuning_ratio = " + num(r.detuning_ratio));
    o.require(r.time_bound == 6000.0, "time bound = " + num(r.time_bound));
    o.require(r.time_ratio == 100.0 / 6000.0, "time_ratio = " + num(r.time_ratio));
    if (o.pass) o.detail = "detuning_ratio 50, time bound 6000";
    return o;
}

Outcome cli_determinism() {
    Outcome o;
    cli::RunConfig c = cli::parse_config(
        "cg = 0.6, 0.3\nce = 0.8, -1.1\nalpha = 2, 0.5\nlambda = 1\ndelta = 100\noutcome = sampled\nseed = 1234\n");
    std::ostringstream a, b, err;
    const int ea = cli::cmd_run(c, a, err);
    const int eb = cli::cmd_run(cli::parse_config(cli::serialize_config(c)), b, err);
    o.require(ea == 0 && eb == 0, "run failed: " + err.str());
    o.require(a.str() == b.str(), "run output differs between identical invocations");

    const cli::SweepSpec spec{cli::SweepParam::alpha_abs, 0.5, 3.0, 24, c};
    const std::string one = cli::sweep_csv(spec, 1);
    const std::string four = cli::sweep_csv(spec, 4);
    o.require(one == four, "sweep output differs between 1 and 4 threads");
    o.require(one == cli::sweep_csv(spec, 1), "sweep output not reproducible");
    if (o.pass) o.detail = "run and 24-point sweep byte-identical";
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> check;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "overlap law <a|-a> = exp(-2|a|^2)", 0.1, overlap_law},
        {2, "analytic vs numeric evolution", 10.0, analytic_oracle},
        {3, "measurement closed form", 1.0, measurement_closed_form},
        {4, "cat-basis gate algebra", 1.0, gate_algebra},
        {5, "end-to-end transfer fidelity", 5.0, end_to_end},
        {6, "adiabatic-elimination validity", 30.0, elimination_validity},
        {7, "regime checker arithmetic", 0.1, regime_arithmetic},
        {8, "CLI determinism", 5.0, cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += " (over time budget " + num(c.budget_seconds) + " s)";
        }
        failures += !o.pass;
        std::printf("[%s] %d. %s: %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
