// commands.hpp — run / sweep / validate front ends producing CSV.
#pragma once

#include "raman_qit/atomfield.hpp"
#include "raman_qit/cli/config.hpp"
#include "raman_qit/errors.hpp"
#include "raman_qit/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace raman_qit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitRegimeViolation = 2;

inline constexpr const char* kRegimeFail = "REGIME_FAIL";
inline constexpr const char* kZeroBranch = "ZERO_BRANCH";

inline const std::vector<std::string>& run_columns() {
    static const std::vector<std::string> cols = {
        "alpha_re", "alpha_im", "delta",          "lambda",     "beta",  "t_star", "outcome",
        "probability", "fidelity", "detuning_ratio", "time_ratio", "n_max", "seed"};
    return cols;
}

inline const std::vector<std::string>& validate_columns() {
    static const std::vector<std::string> cols = {"time",       "pop_g_eff",  "pop_e_eff",
                                                  "pop_g_full", "pop_e_full", "pop_f_full",
                                                  "max_pop_discrepancy"};
    return cols;
}

inline std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

// One evaluated protocol point. probability/fidelity are absent for
// REGIME_FAIL and ZERO_BRANCH rows.
struct RunRow {
    Complex alpha;
    double delta = 0.0;
    double lambda_c = 0.0;
    double beta = 0.0;
    double t_star = 0.0;
    std::string outcome;
    std::optional<double> probability;
    std::optional<double> fidelity;
    RegimeReport regime;
    int n_max = 0;
    std::uint64_t seed = 0;

    bool ok() const { return probability.has_value(); }

    std::vector<std::string> fields() const {
        auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
        return {format_double(alpha.real()), format_double(alpha.imag()), format_double(delta),
                format_double(lambda_c),     format_double(beta),         format_double(t_star),
                outcome,                     opt(probability),            opt(fidelity),
                format_double(regime.detuning_ratio), format_double(regime.time_ratio),
                std::to_string(n_max),       std::to_string(seed)};
    }
};

// Evaluates one configuration. Regime violations become REGIME_FAIL rows;
// other library errors propagate.
inline RunRow evaluate_point(const RunConfig& cfg, std::optional<double> interaction_time = {}) {
    const AtomQubit atom = cfg.atom();
    const PhysicalParams p = cfg.params();
    const TruncationConfig trunc = cfg.truncation();

    RunRow row;
    row.alpha = cfg.alpha;
    row.delta = p.delta();
    row.lambda_c = p.lambda_c();
    row.beta = p.beta();
    row.t_star = p.protocol_time();
    row.n_max = trunc.n_max;
    row.seed = cfg.seed;
    try {
        const ProtocolResult r =
            run_protocol(atom, cfg.alpha, p, trunc, cfg.margin, cfg.rule(), interaction_time);
        row.outcome = to_string(r.outcome.level);
        row.probability = r.outcome.probability;
        row.fidelity = r.fidelity;
        row.regime = r.regime;
    } catch (const RegimeViolation& v) {
        row.outcome = kRegimeFail;
        row.regime = v.report();
    } catch (const ZeroProbabilityBranch&) {
        row.outcome = kZeroBranch;
        row.regime = check_regime(p, cfg.alpha, interaction_time.value_or(row.t_star), cfg.margin);
    }
    return row;
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        const RunRow row = evaluate_point(cfg);
        if (row.outcome == kRegimeFail) {
            err << "error: regime violation: " << row.regime.describe() << "\n";
            return kExitRegimeViolation;
        }
        if (row.outcome == kZeroBranch) {
            err << "error: the fixed measurement branch has zero probability\n";
            return kExitInputError;
        }
        out << join_csv(run_columns()) << join_csv(row.fields());
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// RAMAN_QIT_THREADS: 0 or unset means automatic.
inline unsigned threads_from_env() {
    const char* v = std::getenv("RAMAN_QIT_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        return parse_integer<unsigned>(v, "RAMAN_QIT_THREADS");
    } catch (const ConfigError&) {
        return 0;
    }
}

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Writes to a sibling temp file, then renames over `path`.
inline void write_file_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw ConfigError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename output into '" + path + "': " + ec.message());
    }
}

// Per-point configuration of a sweep, plus the interaction time override
// for time sweeps.
struct SweepPoint {
    double value = 0.0;
    RunConfig config;
    std::optional<double> interaction_time;
};

inline std::vector<SweepPoint> expand_sweep(const SweepSpec& spec) {
    std::vector<SweepPoint> points;
    for (double v : spec.values()) {
        SweepPoint pt{v, spec.base, std::nullopt};
        switch (spec.param) {
        case SweepParam::alpha_abs:
            if (v < 0.0) throw ConfigError("alpha_abs sweep values must be >= 0");
            pt.config.alpha = std::polar(v, std::arg(spec.base.alpha));
            break;
        case SweepParam::delta:
            pt.config.delta = v;
            break;
        case SweepParam::time:
            if (v < 0.0) throw ConfigError("time sweep values must be >= 0");
            pt.interaction_time = v;
            break;
        }
        pt.config.validate();
        points.push_back(std::move(pt));
    }
    return points;
}

// Sweep table as CSV text: swept value first, then the run columns.
inline std::string sweep_csv(const SweepSpec& spec, unsigned threads) {
    const std::vector<SweepPoint> points = expand_sweep(spec);
    std::vector<std::string> lines(points.size());
    std::vector<std::exception_ptr> failures(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        try {
            std::vector<std::string> f = evaluate_point(points[i].config, points[i].interaction_time).fields();
            f.insert(f.begin(), format_double(points[i].value));
            lines[i] = join_csv(f);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (failures[i]) {
            try {
                std::rethrow_exception(failures[i]);
            } catch (const Error& e) {
                throw ConfigError(std::string("sweep point ") + sweep_param_name(spec.param) + " = " +
                                  format_double(points[i].value) + ": " + e.what());
            }
        }
    }
    std::vector<std::string> header = run_columns();
    header.insert(header.begin(), sweep_param_name(spec.param));
    std::string csv = join_csv(header);
    for (const auto& l : lines) csv += l;
    return csv;
}

inline int cmd_sweep(const SweepSpec& spec, const std::string& out_path, unsigned threads,
                     std::ostream& err) {
    try {
        spec.validate();
        if (out_path.empty()) {
            throw ConfigError("sweep requires an output path");
        }
        write_file_atomically(out_path, sweep_csv(spec, threads));
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

struct ValidationSample {
    double time = 0.0;
    double pop_g_eff = 0.0;
    double pop_e_eff = 0.0;
    double pop_g_full = 0.0;
    double pop_e_full = 0.0;
    double pop_f_full = 0.0;
    double max_pop_discrepancy = 0.0;  // max over g, e of |eff - full|

    std::vector<std::string> fields() const {
        return {format_double(time),       format_double(pop_g_eff),  format_double(pop_e_eff),
                format_double(pop_g_full), format_double(pop_e_full), format_double(pop_f_full),
                format_double(max_pop_discrepancy)};
    }
};

// Evolves atom ⊗ |alpha> under the effective and the full Hamiltonian on a
// shared uniform grid and compares level populations.
inline std::vector<ValidationSample> validation_samples(const RunConfig& cfg, double t_max,
                                                        int samples) {
    cfg.validate();
    const auto grid = uniform_time_grid(t_max, samples);
    const PhysicalParams p = cfg.params();
    const TruncationConfig trunc = cfg.truncation();
    const JointState init = JointState::product(cfg.atom(), coherent_amplitudes(cfg.alpha, trunc));
    const JointState init_full = init.embed_three_level();
    const Propagator eff(build_effective_hamiltonian(p, trunc));
    const Propagator full(build_full_hamiltonian(p, trunc));

    std::vector<ValidationSample> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const JointState a = eff.evolve(init, t);
        const JointState b = full.evolve(init_full, t);
        ValidationSample s;
        s.time = t;
        s.pop_g_eff = a.population(Level::g);
        s.pop_e_eff = a.population(Level::e);
        s.pop_g_full = b.population(Level::g);
        s.pop_e_full = b.population(Level::e);
        s.pop_f_full = b.population(Level::f);
        s.max_pop_discrepancy =
            std::max(std::abs(s.pop_g_eff - s.pop_g_full), std::abs(s.pop_e_eff - s.pop_e_full));
        out.push_back(s);
    }
    return out;
}

inline std::string validation_csv(const std::vector<ValidationSample>& rows) {
    std::string csv = join_csv(validate_columns());
    for (const auto& r : rows) csv += join_csv(r.fields());
    return csv;
}

inline int cmd_validate(const RunConfig& cfg, double t_max, int samples, const std::string& out_path,
                        std::ostream& err) {
    try {
        if (out_path.empty()) {
            throw ConfigError("validate requires an output path");
        }
        write_file_atomically(out_path, validation_csv(validation_samples(cfg, t_max, samples)));
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace raman_qit::cli
