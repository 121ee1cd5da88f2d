#include "qdeconv/cli/commands.h"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdeconv/characterization.h"
#include "qdeconv/cli/config.h"
#include "qdeconv/deconvolution.h"
#include "qdeconv/format.h"
#include "qdeconv/observable_io.h"
#include "qdeconv/simulator.h"

namespace qdeconv::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kNonInvertibleChannel:
        case ErrorCode::kSingularPtm:
        case ErrorCode::kNonUnitalChannel:
        case ErrorCode::kProbabilityOutOfRange:
            return kExitMath;
        case ErrorCode::kResourceCap:
            return kExitResourceCap;
        case ErrorCode::kInvalidArgument:
        case ErrorCode::kDimensionMismatch:
        case ErrorCode::kParse:
        case ErrorCode::kNonHermitianInput:
        case ErrorCode::kNotTracePreserving:
        case ErrorCode::kInvalidProbability:
        case ErrorCode::kInvalidCorrelation:
        case ErrorCode::kMissingMeasurement:
        case ErrorCode::kIdentityProbe:
        case ErrorCode::kInvalidConfig:
            return kExitInput;
    }
    return kExitInternal;
}

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    bool diagonal_only = false;
    std::string entries = "full";
    std::string observable;
    std::string measurements;
    std::string characterization;
    int repetitions = 1;
    int n = 0;
    std::string k;
    std::string matrix;
};

void emit(const std::string &content, const Options &opt, std::ostream &out) {
    if (opt.out.empty() || opt.out == "-") {
        out << content;
        return;
    }
    std::filesystem::path path(opt.out);
    if (path.is_relative()) {
        if (const char *dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
            path = std::filesystem::path(dir) / path;
        }
    }
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot write '" + path.string() + "'");
    }
    f << content;
}

void require(const std::string &value, const char *flag) {
    if (value.empty()) {
        throw ConfigError(std::string("missing required flag ") + flag);
    }
}

PauliIndex parse_pauli_ref(const std::string &text, int n) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        std::uint64_t flat = 0;
        try {
            flat = std::stoull(text);
        } catch (const std::exception &) {
            throw ConfigError("Pauli index '" + text + "' is out of range");
        }
        if (flat >= basis_size(n)) {
            throw ConfigError("Pauli index " + text + " exceeds 4^n - 1");
        }
        return PauliIndex(n, flat);
    }
    PauliIndex idx = PauliIndex::from_label(text);
    if (idx.num_qubits() != n) {
        throw DimensionMismatch("Pauli label '" + text + "' does not have " + std::to_string(n) + " letters");
    }
    return idx;
}

std::vector<PauliIndex> parse_pauli_list(const std::string &text, int n) {
    std::vector<PauliIndex> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        std::string item = text.substr(start, comma - start);
        if (item.empty()) {
            throw ConfigError("empty entry in Pauli list '" + text + "'");
        }
        out.push_back(parse_pauli_ref(item, n));
        start = comma + 1;
    }
    return out;
}

// --------------------------------------------------------------------------
// ptm

int cmd_ptm(const Options &opt, std::ostream &out, std::ostream &) {
    require(opt.config, "--config");
    const ChannelSpec spec = parse_channel_config(read_file(opt.config));
    const Channel ch = build_channel(spec);
    const int n = spec.num_qubits;
    const auto labels = all_paulis(n);
    std::string text;
    if (opt.diagonal_only) {
        std::vector<double> diag;
        if (const PauliDiagonalChannel *d = ch.pauli_diagonal()) {
            for (const auto &k : labels) {
                diag.push_back(d->eigenvalue(k));
            }
        } else {
            const Ptm &p = ch.ptm();
            for (const auto &k : labels) {
                diag.push_back(p.entry(k.flat(), k.flat()));
            }
        }
        if (opt.format == "json") {
            json j = {{"n", n}, {"diagonal", json::object()}};
            for (std::size_t i = 0; i < labels.size(); ++i) {
                j["diagonal"][labels[i].label()] = diag[i];
            }
            text = j.dump(2) + "\n";
        } else {
            text = "k,lambda\n";
            for (std::size_t i = 0; i < labels.size(); ++i) {
                text += labels[i].label() + ',' + format_double(diag[i]) + '\n';
            }
        }
    } else {
        const Ptm &p = ch.ptm();
        if (opt.format == "json") {
            json j = {{"n", n}, {"labels", json::array()}, {"matrix", json::array()}};
            for (const auto &k : labels) {
                j["labels"].push_back(k.label());
            }
            for (const auto &r : labels) {
                json row = json::array();
                for (const auto &c : labels) {
                    row.push_back(p.entry(r.flat(), c.flat()));
                }
                j["matrix"].push_back(std::move(row));
            }
            text = j.dump(2) + "\n";
        } else {
            text = "j";
            for (const auto &k : labels) {
                text += ',' + k.label();
            }
            text += '\n';
            for (const auto &r : labels) {
                text += r.label();
                for (const auto &c : labels) {
                    text += ',' + format_double(p.entry(r.flat(), c.flat()));
                }
                text += '\n';
            }
        }
    }
    emit(text, opt, out);
    return kExitOk;
}

// --------------------------------------------------------------------------
// deconvolve

DeconvolutionPlan plan_from_report(const Observable &obs, const CharacterizedPtm &report, int m) {
    if (report.mode() == CharacterizedPtm::Mode::kFull) {
        const Ptm full = report.to_ptm();
        if (!full.is_diagonal()) {
            return plan_general(obs, ptm_power(full, m));
        }
    }
    std::map<PauliIndex, double> lambdas = report.diagonal();
    for (auto &[k, v] : lambdas) {
        v = std::pow(v, m);
    }
    return plan_from_lambdas(obs, lambdas);
}

int cmd_deconvolve(const Options &opt, std::ostream &out, std::ostream &err) {
    require(opt.observable, "--observable");
    require(opt.measurements, "--measurements");
    if (opt.config.empty() == opt.characterization.empty()) {
        throw ConfigError("deconvolve needs exactly one of --config and --characterization");
    }
    if (opt.repetitions < 0) {
        throw ConfigError("--repetitions must be non-negative");
    }
    const Observable obs = parse_observable(read_file(opt.observable));
    const MeasurementTable table = parse_measurements(read_file(opt.measurements));
    for (const auto &[k, meas] : table) {
        if (k.num_qubits() != obs.num_qubits()) {
            throw DimensionMismatch("measurement " + k.label() + " does not match the observable's qubit count");
        }
    }
    std::optional<DeconvolutionPlan> plan;
    if (!opt.config.empty()) {
        const ChannelSpec spec = parse_channel_config(read_file(opt.config));
        if (spec.num_qubits != obs.num_qubits()) {
            throw DimensionMismatch("channel and observable qubit counts differ");
        }
        plan.emplace(plan_for_channel(obs, build_channel(spec), opt.repetitions));
    } else {
        const CharacterizedPtm report = parse_characterization_report(read_file(opt.characterization));
        if (report.num_qubits() != obs.num_qubits()) {
            throw DimensionMismatch("characterization and observable qubit counts differ");
        }
        plan.emplace(plan_from_report(obs, report, opt.repetitions));
    }
    if (plan->warning()) {
        err << "warning: " << *plan->warning() << '\n';
    }
    const DeconvolvedValue v = deconvolve(*plan, table);
    const char *path = plan->path() == DeconvolutionPlan::Path::kDiagonal ? "diagonal" : "general";
    std::string text;
    if (opt.format == "json") {
        json j = {{"value", v.value},
                  {"std_error", v.std_error},
                  {"entries_consulted", plan->entries_consulted()},
                  {"path", path},
                  {"condition_number", plan->condition_number()}};
        text = j.dump(2) + "\n";
    } else {
        text = "value,std_error,entries_consulted,path,condition_number\n" + format_double(v.value) + ',' +
               format_double(v.std_error) + ',' + std::to_string(plan->entries_consulted()) + ',' + path + ',' +
               format_double(plan->condition_number()) + '\n';
    }
    emit(text, opt, out);
    return kExitOk;
}

// --------------------------------------------------------------------------
// characterize

int cmd_characterize(const Options &opt, std::ostream &out, std::ostream &) {
    require(opt.config, "--config");
    const ChannelSpec spec = parse_channel_config(read_file(opt.config));
    const int n = spec.num_qubits;
    const ChannelOracle oracle = as_oracle(build_channel(spec));
    const std::uint64_t shots = opt.shots.value_or(0);
    const std::uint64_t seed = opt.seed.value_or(0);

    std::optional<CharacterizedPtm> result;
    if (!opt.observable.empty()) {
        const Observable obs = parse_observable(read_file(opt.observable));
        if (obs.num_qubits() != n) {
            throw DimensionMismatch("channel and observable qubit counts differ");
        }
        result.emplace(characterize_for_observable(oracle, obs, shots, seed));
    } else if (opt.entries == "full" && !opt.diagonal_only) {
        result.emplace(estimate_full_ptm(oracle, n, shots, seed));
    } else {
        std::vector<PauliIndex> ks;
        if (opt.entries == "full") {
            const auto all = all_paulis(n);
            ks.assign(all.begin() + 1, all.end());
        } else {
            ks = parse_pauli_list(opt.entries, n);
        }
        result.emplace(estimate_diagonal_entries(oracle, n, ks, shots, seed));
    }

    std::string text;
    if (opt.format == "json") {
        json j = {{"n", n},
                  {"mode", result->mode() == CharacterizedPtm::Mode::kFull ? "full" : "diagonal"},
                  {"probe_count", result->probe_count()},
                  {"entries", json::array()}};
        for (const auto &[key, e] : result->entries()) {
            j["entries"].push_back({{"j", key.first.label()},
                                    {"k", key.second.label()},
                                    {"estimate", e.value},
                                    {"std_error", e.std_error},
                                    {"shots", e.shots},
                                    {"seed", e.seed}});
        }
        text = j.dump(2) + "\n";
    } else {
        text = format_characterization_report(*result);
    }
    emit(text, opt, out);
    return kExitOk;
}

// --------------------------------------------------------------------------
// experiment

int cmd_experiment(const Options &opt, std::ostream &out, std::ostream &) {
    require(opt.config, "--config");
    ExperimentConfig cfg = parse_experiment_config(read_file(opt.config));
    if (opt.shots) {
        cfg.shots = *opt.shots;
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    const auto rows = run_experiment(cfg);
    std::string text;
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto &row : rows) {
            const auto &r = row.record;
            arr.push_back({{"mu", row.mu},
                           {"q", row.q},
                           {"m", r.m},
                           {"k", row.k ? row.k->label() : std::string("*")},
                           {"shots", r.shots},
                           {"seed", r.seed},
                           {"noisy", r.value},
                           {"noisy_stderr", r.std_error},
                           {"deconvolved", r.deconvolved ? json(*r.deconvolved) : json(nullptr)},
                           {"deconvolved_stderr",
                            row.deconvolved_stderr ? json(*row.deconvolved_stderr) : json(nullptr)}});
        }
        text = arr.dump(2) + "\n";
    } else {
        text = format_experiment_csv(rows);
    }
    emit(text, opt, out);
    return kExitOk;
}

// --------------------------------------------------------------------------
// check-positivity

int cmd_check_positivity(const Options &opt, std::ostream &out, std::ostream &) {
    struct Row {
        std::string name;
        std::vector<double> s;
        bool pass;
    };
    std::vector<Row> rows;
    std::size_t d = 0;
    if (!opt.matrix.empty()) {
        if (opt.n != 0 || !opt.k.empty()) {
            throw ConfigError("--matrix cannot be combined with --n or --k");
        }
        const Operator rho = parse_matrix(read_file(opt.matrix));
        d = rho.dim();
        auto s = positivity_coefficients(rho);
        const bool pass = is_positive_semidefinite(s);
        rows.push_back({"matrix", std::move(s), pass});
    } else {
        if (opt.n < 1) {
            throw ConfigError("check-positivity needs --n >= 1 (or --matrix)");
        }
        if (opt.n > kMaxDenseQubits) {
            throw ResourceCapExceeded("check-positivity supports at most " + std::to_string(kMaxDenseQubits) +
                                      " qubits");
        }
        require(opt.k, "--k");
        std::vector<PauliIndex> ks;
        if (opt.k == "all") {
            if (opt.n > 4) {
                throw ResourceCapExceeded("--k all supports at most 4 qubits");
            }
            const auto all = all_paulis(opt.n);
            ks.assign(all.begin() + 1, all.end());
        } else {
            ks = parse_pauli_list(opt.k, opt.n);
        }
        d = hilbert_dim(opt.n);
        for (const auto &k : ks) {
            auto s = positivity_coefficients(probe_state(k).op);
            const bool pass = is_positive_semidefinite(s);
            rows.push_back({k.label(), std::move(s), pass});
        }
    }

    bool all_pass = true;
    std::string text;
    if (opt.format == "json") {
        json arr = json::array();
        for (const auto &r : rows) {
            arr.push_back({{"state", r.name}, {"S", r.s}, {"result", r.pass ? "PASS" : "FAIL"}});
            all_pass = all_pass && r.pass;
        }
        text = arr.dump(2) + "\n";
    } else {
        text = "state";
        for (std::size_t m = 0; m <= d; ++m) {
            text += ",S_" + std::to_string(m);
        }
        text += ",result\n";
        for (const auto &r : rows) {
            text += r.name;
            for (double s : r.s) {
                text += ',' + format_double(s);
            }
            text += r.pass ? ",PASS\n" : ",FAIL\n";
            all_pass = all_pass && r.pass;
        }
    }
    emit(text, opt, out);
    return all_pass ? kExitOk : kExitMath;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Noise deconvolution for multiqubit quantum channels", "qdeconv"};
    app.require_subcommand(1);
    Options opt;

    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", opt.out, "Output file (relative to $" + std::string(kOutputDirEnv) + " if set)");
    };

    auto *ptm = app.add_subcommand("ptm", "Pauli transfer matrix of a channel");
    ptm->add_option("--config", opt.config, "Channel config (JSON)");
    ptm->add_flag("--diagonal-only", opt.diagonal_only, "Emit only the diagonal entries");
    add_format(ptm);

    auto *dec = app.add_subcommand("deconvolve", "Recover a noiseless expectation value");
    dec->add_option("--observable", opt.observable, "Observable file");
    dec->add_option("--measurements", opt.measurements, "Noisy measurement file");
    dec->add_option("--config", opt.config, "Channel config (JSON)");
    dec->add_option("--characterization", opt.characterization, "Characterization report (CSV)");
    dec->add_option("--repetitions", opt.repetitions, "Number of noise applications");
    add_format(dec);

    auto *chr = app.add_subcommand("characterize", "Estimate transfer-matrix entries from probe states");
    chr->add_option("--config", opt.config, "Channel config (JSON)");
    chr->add_option("--entries", opt.entries, "'full' or a comma-separated list of Pauli labels or indices");
    chr->add_flag("--diagonal-only", opt.diagonal_only, "With --entries full, estimate only the diagonal");
    chr->add_option("--observable", opt.observable, "Estimate exactly the entries this observable needs");
    chr->add_option("--shots", opt.shots, "Shots per entry (0 = exact)");
    chr->add_option("--seed", opt.seed, "Base seed");
    add_format(chr);

    auto *exp = app.add_subcommand("experiment", "Run a repeated-noise deconvolution experiment");
    exp->add_option("--config", opt.config, "Experiment config (JSON)");
    exp->add_option("--shots", opt.shots, "Override the config's shots");
    exp->add_option("--seed", opt.seed, "Override the config's seed");
    add_format(exp);

    auto *pos = app.add_subcommand("check-positivity", "Characteristic-polynomial positivity test");
    pos->add_option("--n", opt.n, "Number of qubits");
    pos->add_option("--k", opt.k, "'all' or a comma-separated list of Pauli labels or indices");
    pos->add_option("--matrix", opt.matrix, "Density matrix file (JSON)");
    add_format(pos);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (ptm->parsed()) {
            return cmd_ptm(opt, out, err);
        }
        if (dec->parsed()) {
            return cmd_deconvolve(opt, out, err);
        }
        if (chr->parsed()) {
            return cmd_characterize(opt, out, err);
        }
        if (exp->parsed()) {
            return cmd_experiment(opt, out, err);
        }
        return cmd_check_positivity(opt, out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace qdeconv::cli
