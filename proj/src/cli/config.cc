#include "qdeconv/cli/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qdeconv/errors.h"

namespace qdeconv::cli {

using nlohmann::json;

namespace {

// Converts a byte offset into a 1-based line/column pair.
ParseError located_error(std::string_view text, std::size_t byte, const std::string &msg) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return ParseError(msg, line, col);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // nlohmann reports the offset one past the offending byte.
        throw located_error(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
}

[[noreturn]] void config_error(const std::string &msg) {
    throw ConfigError(msg);
}

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.count(key)) {
            config_error(where + ": unknown key '" + key + "'");
        }
    }
}

double get_real(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.contains(key)) {
        config_error(where + ": missing '" + key + "'");
    }
    const json &v = obj.at(key);
    if (!v.is_number()) {
        config_error(where + ": '" + key + "' must be a number");
    }
    return v.get<double>();
}

double get_real_or(const json &obj, const std::string &key, double fallback, const std::string &where) {
    return obj.contains(key) ? get_real(obj, key, where) : fallback;
}

std::int64_t get_int(const json &obj, const std::string &key, const std::string &where) {
    if (!obj.contains(key)) {
        config_error(where + ": missing '" + key + "'");
    }
    const json &v = obj.at(key);
    if (!v.is_number_integer()) {
        config_error(where + ": '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::uint64_t get_count(const json &obj, const std::string &key, std::uint64_t fallback, const std::string &where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const std::int64_t v = get_int(obj, key, where);
    if (v < 0) {
        config_error(where + ": '" + key + "' must be non-negative");
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<double> get_reals(const json &obj, const std::string &key, const std::string &where) {
    std::vector<double> out;
    if (!obj.contains(key)) {
        return out;
    }
    const json &v = obj.at(key);
    if (!v.is_array()) {
        config_error(where + ": '" + key + "' must be an array of numbers");
    }
    for (const auto &x : v) {
        if (!x.is_number()) {
            config_error(where + ": '" + key + "' must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

ChannelSpec channel_from_json(const json &obj) {
    const std::string where = "channel";
    if (!obj.is_object()) {
        config_error("channel config must be a JSON object");
    }
    if (!obj.contains("family") || !obj.at("family").is_string()) {
        config_error(where + ": missing string 'family'");
    }
    const std::string name = obj.at("family").get<std::string>();
    const auto family = family_from_name(name);
    if (!family) {
        config_error(where + ": unknown family '" + name + "'");
    }
    ChannelSpec spec;
    spec.family = *family;
    const std::int64_t n = get_int(obj, "n", where);
    if (n < 1) {
        config_error(where + ": 'n' must be at least 1");
    }
    if (n > kMaxDenseQubits) {
        throw ResourceCapExceeded("channels support at most " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    spec.num_qubits = static_cast<int>(n);
    switch (spec.family) {
        case ChannelFamily::kIdentity:
            reject_unknown(obj, {"family", "n"}, where);
            break;
        case ChannelFamily::kBitFlip:
        case ChannelFamily::kDephasing:
            reject_unknown(obj, {"family", "n", "p", "mu"}, where);
            spec.strength = get_real(obj, "p", where);
            spec.mu = get_real_or(obj, "mu", 0.0, where);
            break;
        case ChannelFamily::kDepolarizing:
            reject_unknown(obj, {"family", "n", "q", "mu"}, where);
            spec.strength = get_real(obj, "q", where);
            spec.mu = get_real_or(obj, "mu", 0.0, where);
            break;
        case ChannelFamily::kAmpDampCorr:
            reject_unknown(obj, {"family", "n", "eta", "mu"}, where);
            spec.strength = get_real(obj, "eta", where);
            spec.mu = get_real_or(obj, "mu", 0.0, where);
            break;
        case ChannelFamily::kPauliCustom: {
            reject_unknown(obj, {"family", "n", "p_vec", "beta", "mu"}, where);
            if (obj.contains("p_vec") == obj.contains("beta")) {
                config_error(where + ": pauli_custom needs exactly one of 'p_vec' and 'beta'");
            }
            if (obj.contains("p_vec")) {
                const auto p = get_reals(obj, "p_vec", where);
                if (p.size() != 4) {
                    config_error(where + ": 'p_vec' must have 4 entries");
                }
                spec.p_vec = PauliVector{p[0], p[1], p[2], p[3]};
                spec.mu = get_real_or(obj, "mu", 0.0, where);
            } else {
                if (obj.contains("mu")) {
                    config_error(where + ": 'mu' does not apply to explicit 'beta' weights");
                }
                spec.beta = get_reals(obj, "beta", where);
            }
            break;
        }
    }
    return spec;
}

Operator matrix_from_json(const json &obj) {
    if (!obj.is_object() || !obj.contains("real")) {
        config_error("matrix must be an object with 'real' and optional 'imag' arrays");
    }
    reject_unknown(obj, {"real", "imag"}, "matrix");
    auto rows_of = [](const json &a, const char *name) {
        std::vector<std::vector<double>> rows;
        if (!a.is_array()) {
            config_error(std::string("matrix: '") + name + "' must be an array of rows");
        }
        for (const auto &row : a) {
            if (!row.is_array()) {
                config_error(std::string("matrix: '") + name + "' must be an array of rows");
            }
            std::vector<double> r;
            for (const auto &x : row) {
                if (!x.is_number()) {
                    config_error(std::string("matrix: '") + name + "' entries must be numbers");
                }
                r.push_back(x.get<double>());
            }
            rows.push_back(std::move(r));
        }
        return rows;
    };
    const auto re = rows_of(obj.at("real"), "real");
    const auto im = obj.contains("imag") ? rows_of(obj.at("imag"), "imag") : decltype(re){};
    const std::size_t d = re.size();
    if (d == 0) {
        config_error("matrix: empty");
    }
    if (!im.empty() && im.size() != d) {
        config_error("matrix: 'real' and 'imag' shapes differ");
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (re[i].size() != d || (!im.empty() && im[i].size() != d)) {
            config_error("matrix: must be square");
        }
        for (std::size_t j = 0; j < d; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                complex_t(re[i][j], im.empty() ? 0.0 : im[i][j]);
        }
    }
    return Operator(std::move(m));
}

}  // namespace

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ChannelSpec parse_channel_config(std::string_view json_text) {
    return channel_from_json(parse_json(json_text));
}

Operator parse_matrix(std::string_view json_text) {
    return matrix_from_json(parse_json(json_text));
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    const json obj = parse_json(json_text);
    const std::string where = "experiment";
    if (!obj.is_object()) {
        config_error("experiment config must be a JSON object");
    }
    reject_unknown(obj,
                   {"n", "channel", "initial_state", "observable", "m_max", "shots", "seed", "mu_grid", "param_grid",
                    "sampling"},
                   where);
    ExperimentConfig cfg;
    const std::int64_t n = get_int(obj, "n", where);
    if (n < 1) {
        config_error(where + ": 'n' must be at least 1");
    }
    if (n > kMaxDenseQubits) {
        throw ResourceCapExceeded("experiments support at most " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    cfg.num_qubits = static_cast<int>(n);
    if (!obj.contains("channel")) {
        config_error(where + ": missing 'channel'");
    }
    cfg.channel = channel_from_json(obj.at("channel"));
    if (cfg.channel.num_qubits != cfg.num_qubits) {
        config_error(where + ": channel 'n' differs from experiment 'n'");
    }
    if (obj.contains("initial_state")) {
        const json &s = obj.at("initial_state");
        cfg.initial_state = s.is_string() ? preset_state(cfg.num_qubits, s.get<std::string>()) : matrix_from_json(s);
        if (cfg.initial_state->num_qubits() != cfg.num_qubits) {
            config_error(where + ": initial_state dimension differs from 2^n");
        }
    }
    if (obj.contains("observable")) {
        const json &o = obj.at("observable");
        if (!o.is_object() || o.empty()) {
            config_error(where + ": 'observable' must be a non-empty object of label: coefficient");
        }
        Observable::Terms terms;
        for (const auto &[label, c] : o.items()) {
            if (!c.is_number()) {
                config_error(where + ": observable coefficient for '" + label + "' must be a number");
            }
            PauliIndex idx = PauliIndex::from_label(label);
            if (idx.num_qubits() != cfg.num_qubits) {
                config_error(where + ": observable label '" + label + "' has the wrong length");
            }
            terms[idx] = c.get<double>();
        }
        cfg.observable = Observable(cfg.num_qubits, terms, 0.0);
    }
    if (obj.contains("m_max")) {
        const std::int64_t m = get_int(obj, "m_max", where);
        if (m < 0) {
            config_error(where + ": 'm_max' must be non-negative");
        }
        cfg.m_max = static_cast<int>(m);
    }
    cfg.shots = get_count(obj, "shots", 0, where);
    cfg.seed = get_count(obj, "seed", 0, where);
    cfg.mu_grid = get_reals(obj, "mu_grid", where);
    cfg.param_grid = get_reals(obj, "param_grid", where);
    if (obj.contains("sampling")) {
        const json &s = obj.at("sampling");
        if (s == "marginal") {
            cfg.sampling = SamplingMode::kMarginal;
        } else if (s == "full_outcome") {
            cfg.sampling = SamplingMode::kFullOutcome;
        } else {
            config_error(where + ": 'sampling' must be \"marginal\" or \"full_outcome\"");
        }
    }
    return cfg;
}

}  // namespace qdeconv::cli
