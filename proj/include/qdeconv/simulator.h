#ifndef QDECONV_SIMULATOR_H
#define QDECONV_SIMULATOR_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdeconv/channels.h"
#include "qdeconv/measurement.h"
#include "qdeconv/pauli.h"

namespace qdeconv {

/// N^m(rho), applying the same channel independently m times.
Operator evolve(const Operator &rho, const Channel &ch, int m);

/// Named initial states: "zero" (|0..0>), "plus" (|+..+>), "maximally_mixed".
Operator preset_state(int num_qubits, const std::string &name);

/// Throws InvalidArgument unless rho is Hermitian, unit trace and PSD.
void validate_density_matrix(const Operator &rho);

struct ExperimentConfig {
    int num_qubits = 3;
    std::optional<Operator> initial_state;  // |0..0> when empty
    ChannelSpec channel;
    int m_max = 40;
    std::uint64_t shots = 0;  // 0 = exact expectations
    std::uint64_t seed = 0;
    std::optional<Observable> observable;  // Z..Z when empty
    /// Values substituted for channel.mu; {channel.mu} when empty.
    std::vector<double> mu_grid;
    /// Values substituted for channel.strength; {channel.strength} when empty.
    std::vector<double> param_grid;
    SamplingMode sampling = SamplingMode::kMarginal;
};

/// One CSV row. `k` is empty for the aggregate row of the whole observable.
struct ExperimentRow {
    double mu = 0.0;
    double q = 0.0;
    std::optional<PauliIndex> k;
    ExpectationRecord record;
    std::optional<double> deconvolved_stderr;
};

/// Rows ordered by (mu, q, m, k) with the aggregate row last within each m.
/// Per-Pauli rows are emitted for every non-identity measurement the plan
/// needs; their deconvolved column is set on the diagonal path only. The
/// aggregate row (k = "*") is added unless the observable is a single Pauli
/// string with unit coefficient on the diagonal path.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig &cfg);

/// CSV with header mu,q,m,k,shots,seed,noisy,noisy_stderr,deconvolved,deconvolved_stderr.
std::string format_experiment_csv(const std::vector<ExperimentRow> &rows);

}  // namespace qdeconv

#endif
