// config.hpp — run configuration and sweep specification for the batch CLI.
//
// Config files are flat `key = value` text with `#` comments. Complex values
// and atom amplitudes are written as two comma-separated reals:
//
//   cg      = 1, 0            # |c_g|, arg c_g
//   ce      = 0, 0            # |c_e|, arg c_e
//   alpha   = 2, 0            # Re, Im
//   lambda  = 1
//   delta   = 100
//   omega   = 0
//   n_max   = auto            # or an integer cutoff
//   tail_tolerance = 1e-10
//   margin  = 10
//   outcome = e               # g | e | sampled
//   seed    = 0
//   output  = result.csv
#pragma once

#include "raman_qit/atomfield.hpp"
#include "raman_qit/errors.hpp"
#include "raman_qit/hilbert.hpp"
#include "raman_qit/protocol.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace raman_qit::cli {

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::string_view what) {
    const std::string_view s = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() ||
        !std::isfinite(value)) {
        throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

template <class Int>
Int parse_integer(std::string_view text, std::string_view what) {
    const std::string_view s = trim(text);
    Int value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

inline std::pair<double, double> parse_pair(std::string_view text, std::string_view what) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
        throw ConfigError(std::string(what) + " expects two comma-separated reals, got '" +
                          std::string(trim(text)) + "'");
    }
    return {parse_double(text.substr(0, comma), what), parse_double(text.substr(comma + 1), what)};
}

struct RunConfig {
    double cg_mag = 1.0;
    double cg_phase = 0.0;
    double ce_mag = 0.0;
    double ce_phase = 0.0;
    Complex alpha{2.0, 0.0};
    double lambda_c = 1.0;
    double delta = 100.0;
    double omega = 0.0;
    std::optional<int> n_max;  // empty = auto-size from alpha
    double tail_tolerance = 1e-10;
    double margin = kDefaultMargin;
    OutcomeRule::Kind outcome = OutcomeRule::Kind::fixed_e;
    std::uint64_t seed = 0;
    std::string output;

    AtomQubit atom() const {
        const double n2 = cg_mag * cg_mag + ce_mag * ce_mag;
        if (cg_mag < 0.0 || ce_mag < 0.0) {
            throw ConfigError("atom amplitude magnitudes must be >= 0");
        }
        if (!(std::abs(n2 - 1.0) <= kAtomNormTolerance)) {
            throw ConfigError("atom amplitudes not normalized: |c_g|^2 + |c_e|^2 = " +
                              format_double(n2) + " (expected 1)");
        }
        return AtomQubit::from_polar(cg_mag, cg_phase, ce_mag, ce_phase);
    }

    PhysicalParams params() const { return PhysicalParams::from_detuning(lambda_c, delta, omega); }

    TruncationConfig truncation() const {
        return n_max ? TruncationConfig(*n_max, tail_tolerance)
                     : auto_truncation(alpha, tail_tolerance);
    }

    OutcomeRule rule() const {
        switch (outcome) {
        case OutcomeRule::Kind::fixed_g: return OutcomeRule::fixed(Level::g);
        case OutcomeRule::Kind::fixed_e: return OutcomeRule::fixed(Level::e);
        case OutcomeRule::Kind::sampled: break;
        }
        return OutcomeRule::sampled(seed);
    }

    // Semantic checks beyond syntax; throws ConfigError.
    void validate() const {
        (void)atom();
        try {
            (void)params();
            (void)coherent_amplitudes(alpha, truncation());
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (!(margin >= 1.0)) {
            throw ConfigError("margin must be >= 1");
        }
    }

    bool operator==(const RunConfig&) const = default;
};

inline const char* outcome_name(OutcomeRule::Kind kind) {
    switch (kind) {
    case OutcomeRule::Kind::fixed_g: return "g";
    case OutcomeRule::Kind::fixed_e: return "e";
    case OutcomeRule::Kind::sampled: return "sampled";
    }
    return "?";
}

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "cg = " << format_double(c.cg_mag) << ", " << format_double(c.cg_phase) << "\n"
       << "ce = " << format_double(c.ce_mag) << ", " << format_double(c.ce_phase) << "\n"
       << "alpha = " << format_double(c.alpha.real()) << ", " << format_double(c.alpha.imag())
       << "\n"
       << "lambda = " << format_double(c.lambda_c) << "\n"
       << "delta = " << format_double(c.delta) << "\n"
       << "omega = " << format_double(c.omega) << "\n"
       << "n_max = " << (c.n_max ? std::to_string(*c.n_max) : std::string("auto")) << "\n"
       << "tail_tolerance = " << format_double(c.tail_tolerance) << "\n"
       << "margin = " << format_double(c.margin) << "\n"
       << "outcome = " << outcome_name(c.outcome) << "\n"
       << "seed = " << c.seed << "\n";
    if (!c.output.empty()) {
        os << "output = " << c.output << "\n";
    }
    return os.str();
}

// Parses config text; unknown or repeated keys are errors. cg, ce, alpha,
// lambda and delta are required, everything else has a default.
inline RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::map<std::string, std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!seen.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }

        if (key == "cg") {
            std::tie(c.cg_mag, c.cg_phase) = parse_pair(value, key);
        } else if (key == "ce") {
            std::tie(c.ce_mag, c.ce_phase) = parse_pair(value, key);
        } else if (key == "alpha") {
            const auto [re, im] = parse_pair(value, key);
            c.alpha = {re, im};
        } else if (key == "lambda") {
            c.lambda_c = parse_double(value, key);
        } else if (key == "delta") {
            c.delta = parse_double(value, key);
        } else if (key == "omega") {
            c.omega = parse_double(value, key);
        } else if (key == "n_max") {
            if (value == "auto") {
                c.n_max.reset();
            } else {
                c.n_max = parse_integer<int>(value, key);
            }
        } else if (key == "tail_tolerance") {
            c.tail_tolerance = parse_double(value, key);
        } else if (key == "margin") {
            c.margin = parse_double(value, key);
        } else if (key == "outcome") {
            if (value == "g") {
                c.outcome = OutcomeRule::Kind::fixed_g;
            } else if (value == "e") {
                c.outcome = OutcomeRule::Kind::fixed_e;
            } else if (value == "sampled") {
                c.outcome = OutcomeRule::Kind::sampled;
            } else {
                throw ConfigError("outcome must be g, e or sampled, got '" + value + "'");
            }
        } else if (key == "seed") {
            c.seed = parse_integer<std::uint64_t>(value, key);
        } else if (key == "output") {
            c.output = value;
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    for (const char* required : {"cg", "ce", "alpha", "lambda", "delta"}) {
        if (!seen.contains(required)) {
            throw ConfigError(std::string("missing required key '") + required + "'");
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

enum class SweepParam { alpha_abs, delta, time };

inline const char* sweep_param_name(SweepParam p) {
    switch (p) {
    case SweepParam::alpha_abs: return "alpha_abs";
    case SweepParam::delta: return "delta";
    case SweepParam::time: return "time";
    }
    return "?";
}

inline SweepParam parse_sweep_param(std::string_view name) {
    if (name == "alpha_abs") return SweepParam::alpha_abs;
    if (name == "delta") return SweepParam::delta;
    if (name == "time") return SweepParam::time;
    throw ConfigError("sweep parameter must be alpha_abs, delta or time, got '" +
                      std::string(name) + "'");
}

struct SweepSpec {
    SweepParam param = SweepParam::alpha_abs;
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    RunConfig base;

    void validate() const {
        if (steps < 2) {
            throw ConfigError("sweep steps must be >= 2, got " + std::to_string(steps));
        }
        if (!(start < stop)) {
            throw ConfigError("sweep requires start < stop");
        }
    }

    // value_k = start + (stop - start) * k / (steps - 1); the last point is stop.
    std::vector<double> values() const {
        validate();
        std::vector<double> v(static_cast<std::size_t>(steps));
        for (int k = 0; k < steps; ++k) {
            v[static_cast<std::size_t>(k)] =
                k == steps - 1 ? stop : start + (stop - start) * static_cast<double>(k) / (steps - 1);
        }
        return v;
    }
};

} // namespace raman_qit::cli
