#include "qdeconv/characterization.h"

#include <cmath>
#include <set>

#include "parallel.h"
#include "qdeconv/errors.h"
#include "qdeconv/format.h"
#include "qdeconv/measurement.h"

namespace qdeconv {

namespace {

Operator maximally_mixed(int n) {
    const auto d = static_cast<double>(hilbert_dim(n));
    return Operator(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) / d);
}

Operator apply_oracle(const ChannelOracle &ch, const Operator &rho) {
    Operator out = ch(rho);
    if (out.num_qubits() != rho.num_qubits()) {
        throw DimensionMismatch("channel oracle changed the qubit count");
    }
    return out;
}

void require_unital_on(const Operator &image_of_mixed, std::span<const PauliIndex> ks) {
    for (const auto &k : ks) {
        const double residual = std::abs(pauli_trace(k, image_of_mixed.matrix()));
        if (residual > kUnitalityTol) {
            throw NonUnitalChannel("Tr[" + k.label() + " Phi(1/d)] = " + format_double(residual) +
                                   "; characterization needs a unital channel");
        }
    }
}

EntryEstimate measure(const Operator &state, const PauliIndex &j, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        return {expectation_exact(state, j), 0.0, 0, seed};
    }
    const ExpectationRecord rec = expectation_sampled(state, j, shots, seed);
    return {rec.value, rec.std_error, shots, seed};
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace

ChannelOracle as_oracle(const Channel &ch) {
    return [ch](const Operator &rho) { return ch.apply(rho); };
}

ProbeState probe_state(const PauliIndex &k) {
    if (k.is_identity()) {
        throw IdentityProbe("no probe for the identity component: Gamma_00 = 1 by trace preservation");
    }
    const auto d = static_cast<double>(hilbert_dim(k.num_qubits()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    m += pauli_element(k).matrix();
    m /= d;
    return {k, Operator(std::move(m))};
}

EntryEstimate estimate_diagonal_entry(const ChannelOracle &ch, int num_qubits, const PauliIndex &k,
                                      std::uint64_t shots, std::uint64_t seed) {
    if (k.num_qubits() != num_qubits) {
        throw DimensionMismatch("estimate_diagonal_entry: Pauli index has the wrong qubit count");
    }
    const ProbeState probe = probe_state(k);
    const PauliIndex ks[] = {k};
    require_unital_on(apply_oracle(ch, maximally_mixed(num_qubits)), ks);
    const Operator out = apply_oracle(ch, probe.op);
    return measure(out, k, shots, derive_seed(seed, {k.flat(), k.flat()}));
}

// --------------------------------------------------------------------------
// CharacterizedPtm

CharacterizedPtm::CharacterizedPtm(int num_qubits, Mode mode) : num_qubits_(num_qubits), mode_(mode) {
}

void CharacterizedPtm::set(const PauliIndex &j, const PauliIndex &k, const EntryEstimate &e) {
    if (j.num_qubits() != num_qubits_ || k.num_qubits() != num_qubits_) {
        throw DimensionMismatch("characterized entry has the wrong qubit count");
    }
    if (mode_ == Mode::kDiagonalOnly && j != k) {
        throw InvalidArgument("diagonal-only characterization cannot store off-diagonal entries");
    }
    entries_[{j, k}] = e;
}

std::size_t CharacterizedPtm::probe_count() const {
    std::set<std::uint64_t> columns;
    for (const auto &[key, e] : entries_) {
        if (!key.second.is_identity() && !key.first.is_identity()) {
            columns.insert(key.second.flat());
        }
    }
    return columns.size();
}

std::map<PauliIndex, double> CharacterizedPtm::diagonal() const {
    std::map<PauliIndex, double> out;
    for (const auto &[key, e] : entries_) {
        if (key.first == key.second) {
            out.emplace(key.first, e.value);
        }
    }
    return out;
}

Ptm CharacterizedPtm::to_ptm() const {
    if (mode_ != Mode::kFull) {
        throw InvalidArgument("only a full characterization can be turned into a transfer matrix");
    }
    const std::size_t size = basis_size(num_qubits_);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::uint64_t j = 0; j < size; ++j) {
        for (std::uint64_t k = 0; k < size; ++k) {
            auto it = entries_.find({PauliIndex(num_qubits_, j), PauliIndex(num_qubits_, k)});
            if (it == entries_.end()) {
                throw InvalidArgument("full characterization is missing an entry");
            }
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = it->second.value;
        }
    }
    return Ptm(num_qubits_, std::move(m));
}

// --------------------------------------------------------------------------
// Estimation drivers

CharacterizedPtm estimate_diagonal_entries(const ChannelOracle &ch, int num_qubits, std::span<const PauliIndex> ks,
                                           std::uint64_t shots, std::uint64_t seed) {
    for (const auto &k : ks) {
        if (k.num_qubits() != num_qubits) {
            throw DimensionMismatch("requested entry has the wrong qubit count");
        }
        if (k.is_identity()) {
            throw IdentityProbe("no probe for the identity component: Gamma_00 = 1 by trace preservation");
        }
    }
    require_unital_on(apply_oracle(ch, maximally_mixed(num_qubits)), ks);

    std::vector<EntryEstimate> results(ks.size());
    detail::parallel_for(ks.size(), [&](std::size_t i) {
        const PauliIndex &k = ks[i];
        const Operator out = apply_oracle(ch, probe_state(k).op);
        results[i] = measure(out, k, shots, derive_seed(seed, {k.flat(), k.flat()}));
    });
    CharacterizedPtm ptm(num_qubits, CharacterizedPtm::Mode::kDiagonalOnly);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        ptm.set(ks[i], ks[i], results[i]);
    }
    return ptm;
}

CharacterizedPtm characterize_for_observable(const ChannelOracle &ch, const Observable &obs, std::uint64_t shots,
                                             std::uint64_t seed) {
    std::vector<PauliIndex> ks;
    for (const auto &[idx, c] : obs.terms()) {
        if (!idx.is_identity()) {
            ks.push_back(idx);
        }
    }
    return estimate_diagonal_entries(ch, obs.num_qubits(), ks, shots, seed);
}

CharacterizedPtm estimate_full_ptm(const ChannelOracle &ch, int num_qubits, std::uint64_t shots, std::uint64_t seed) {
    if (num_qubits > kMaxFullPtmQubits) {
        throw ResourceCapExceeded("full characterization supports at most " + std::to_string(kMaxFullPtmQubits) +
                                  " qubits");
    }
    const std::size_t size = basis_size(num_qubits);
    std::vector<PauliIndex> nonzero;
    for (std::uint64_t k = 1; k < size; ++k) {
        nonzero.emplace_back(num_qubits, k);
    }
    require_unital_on(apply_oracle(ch, maximally_mixed(num_qubits)), nonzero);

    // One probe per column k; every row j is read off the same output state.
    std::vector<std::vector<EntryEstimate>> columns(nonzero.size());
    detail::parallel_for(nonzero.size(), [&](std::size_t c) {
        const PauliIndex &k = nonzero[c];
        const Operator out = apply_oracle(ch, probe_state(k).op);
        auto &col = columns[c];
        col.reserve(nonzero.size());
        for (const auto &j : nonzero) {
            col.push_back(measure(out, j, shots, derive_seed(seed, {j.flat(), k.flat()})));
        }
    });

    CharacterizedPtm ptm(num_qubits, CharacterizedPtm::Mode::kFull);
    const PauliIndex id = PauliIndex::identity(num_qubits);
    ptm.set(id, id, {1.0, 0.0, 0, seed});
    for (const auto &k : nonzero) {
        ptm.set(id, k, {0.0, 0.0, 0, seed});
        ptm.set(k, id, {0.0, 0.0, 0, seed});
    }
    for (std::size_t c = 0; c < nonzero.size(); ++c) {
        for (std::size_t r = 0; r < nonzero.size(); ++r) {
            ptm.set(nonzero[r], nonzero[c], columns[c][r]);
        }
    }
    return ptm;
}

DeconvolutionPlan plan_from_characterization(const Observable &obs, const CharacterizedPtm &ptm) {
    if (obs.num_qubits() != ptm.num_qubits()) {
        throw DimensionMismatch("observable and characterization qubit counts differ");
    }
    if (ptm.mode() == CharacterizedPtm::Mode::kFull) {
        const Ptm full = ptm.to_ptm();
        if (!full.is_diagonal()) {
            return plan_general(obs, full);
        }
    }
    return plan_from_lambdas(obs, ptm.diagonal());
}

// --------------------------------------------------------------------------
// Positivity

std::vector<double> positivity_coefficients(const Operator &rho) {
    const std::size_t d = rho.dim();
    std::vector<double> power_traces(d + 1, 0.0);
    Eigen::MatrixXcd power = rho.matrix();
    for (std::size_t j = 1; j <= d; ++j) {
        power_traces[j] = power.trace().real();
        if (j < d) {
            power = power * rho.matrix();
        }
    }
    std::vector<double> s(d + 1, 0.0);
    s[0] = 1.0;
    for (std::size_t m = 1; m <= d; ++m) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= m; ++j) {
            const double term = power_traces[j] * s[m - j];
            acc += (j % 2 == 1) ? term : -term;
        }
        s[m] = acc / static_cast<double>(m);
    }
    return s;
}

bool is_positive_semidefinite(std::span<const double> coefficients, double tol) {
    for (double s : coefficients) {
        if (s < -tol) {
            return false;
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// Report I/O

std::string format_characterization_report(const CharacterizedPtm &ptm) {
    std::string out = "j,k,estimate,std_error,shots,seed\n";
    for (const auto &[key, e] : ptm.entries()) {
        out += key.first.label() + ',' + key.second.label() + ',' + format_double(e.value) + ',' +
               format_double(e.std_error) + ',' + std::to_string(e.shots) + ',' + std::to_string(e.seed) + '\n';
    }
    return out;
}

CharacterizedPtm parse_characterization_report(std::string_view text) {
    std::vector<std::pair<CharacterizedPtm::Key, EntryEstimate>> rows;
    int n = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        pos = eol + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != "j,k,estimate,std_error,shots,seed") {
                throw ParseError("expected header j,k,estimate,std_error,shots,seed", line_no, 1);
            }
            header_seen = true;
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != 6) {
            throw ParseError("expected 6 comma-separated fields", line_no, 0);
        }
        auto label = [&](std::string_view f, std::size_t field) {
            try {
                return PauliIndex::from_label(f);
            } catch (const Error &e) {
                throw ParseError(e.what(), line_no, field);
            }
        };
        PauliIndex j = label(fields[0], 1);
        PauliIndex k = label(fields[1], 2);
        if (n == 0) {
            n = j.num_qubits();
        }
        if (j.num_qubits() != n || k.num_qubits() != n) {
            throw ParseError("inconsistent Pauli string length", line_no, 1);
        }
        auto value = parse_double(fields[2]);
        auto err = parse_double(fields[3]);
        if (!value || !err) {
            throw ParseError("malformed estimate or std_error", line_no, value ? 4 : 3);
        }
        std::uint64_t shots = 0;
        std::uint64_t seed = 0;
        try {
            shots = std::stoull(std::string(fields[4]));
            seed = std::stoull(std::string(fields[5]));
        } catch (const std::exception &) {
            throw ParseError("malformed shots or seed", line_no, 5);
        }
        rows.push_back({{j, k}, {*value, *err, shots, seed}});
    }
    if (rows.empty()) {
        throw ParseError("characterization report has no entries", line_no, 0);
    }
    bool all_diagonal = true;
    for (const auto &[key, e] : rows) {
        all_diagonal = all_diagonal && key.first == key.second;
    }
    const bool full = rows.size() == basis_size(n) * basis_size(n);
    if (!full && !all_diagonal) {
        throw ParseError("report is neither diagonal-only nor a complete transfer matrix", line_no, 0);
    }
    CharacterizedPtm ptm(n, full ? CharacterizedPtm::Mode::kFull : CharacterizedPtm::Mode::kDiagonalOnly);
    for (const auto &[key, e] : rows) {
        if (ptm.entries().count(key) != 0) {
            throw ParseError("duplicate entry " + key.first.label() + "," + key.second.label(), line_no, 0);
        }
        ptm.set(key.first, key.second, e);
    }
    if (full && ptm.entries().size() != rows.size()) {
        throw ParseError("report has duplicate entries", line_no, 0);
    }
    return ptm;
}

}  // namespace qdeconv
