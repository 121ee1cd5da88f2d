#include "qdeconv/simulator.h"

#include <cmath>
#include <set>

#include "parallel.h"
#include "qdeconv/characterization.h"
#include "qdeconv/deconvolution.h"
#include "qdeconv/errors.h"
#include "qdeconv/format.h"
#include "qdeconv/observable_io.h"

namespace qdeconv {

Operator evolve(const Operator &rho, const Channel &ch, int m) {
    if (m < 0) {
        throw InvalidArgument("evolve: repetition count must be non-negative");
    }
    Operator out = rho;
    for (int i = 0; i < m; ++i) {
        out = ch.apply(out);
    }
    return out;
}

Operator preset_state(int num_qubits, const std::string &name) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(num_qubits));
    if (name == "zero") {
        return Operator::basis_projector(num_qubits, 0);
    }
    if (name == "plus") {
        return Operator(Eigen::MatrixXcd::Constant(d, d, complex_t(1.0 / static_cast<double>(d), 0.0)));
    }
    if (name == "maximally_mixed") {
        return Operator(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
    }
    throw InvalidArgument("unknown initial state preset '" + name + "'");
}

void validate_density_matrix(const Operator &rho) {
    if (!rho.is_hermitian()) {
        throw InvalidArgument("initial state is not Hermitian");
    }
    const complex_t tr = rho.trace();
    if (std::abs(tr - complex_t(1.0, 0.0)) > 1e-9) {
        throw InvalidArgument("initial state trace is " + format_double(tr.real()) + ", expected 1");
    }
    const auto s = positivity_coefficients(rho);
    if (!is_positive_semidefinite(s)) {
        throw InvalidArgument("initial state is not positive semidefinite");
    }
}

namespace {

struct GridPoint {
    double mu;
    double q;
    Channel channel;
};

struct Task {
    std::size_t grid;
    int m;
};

bool needs_aggregate(const DeconvolutionPlan &plan) {
    const auto &terms = plan.observable().terms();
    return plan.path() != DeconvolutionPlan::Path::kDiagonal || terms.size() != 1 ||
           terms.begin()->first.is_identity() || terms.begin()->second != 1.0;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig &cfg) {
    const int n = cfg.num_qubits;
    if (cfg.channel.num_qubits != n) {
        throw DimensionMismatch("channel and experiment qubit counts differ");
    }
    if (cfg.m_max < 0) {
        throw InvalidArgument("m_max must be non-negative");
    }
    const Operator rho0 = cfg.initial_state ? *cfg.initial_state : preset_state(n, "zero");
    if (rho0.num_qubits() != n) {
        throw DimensionMismatch("initial state and experiment qubit counts differ");
    }
    validate_density_matrix(rho0);
    Observable obs = cfg.observable ? *cfg.observable
                                    : Observable::single(PauliIndex(n, basis_size(n) - 1), 1.0);
    if (obs.num_qubits() != n) {
        throw DimensionMismatch("observable and experiment qubit counts differ");
    }

    const std::vector<double> mus = cfg.mu_grid.empty() ? std::vector<double>{cfg.channel.mu} : cfg.mu_grid;
    const std::vector<double> qs =
        cfg.param_grid.empty() ? std::vector<double>{cfg.channel.strength} : cfg.param_grid;
    std::vector<GridPoint> grid;
    for (double mu : mus) {
        for (double q : qs) {
            ChannelSpec spec = cfg.channel;
            spec.mu = mu;
            spec.strength = q;
            grid.push_back({mu, q, build_channel(spec)});
        }
    }

    // States depend on the previous step, so evolution is sequential in m.
    std::vector<std::vector<Operator>> states(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t g) {
        auto &seq = states[g];
        seq.reserve(static_cast<std::size_t>(cfg.m_max) + 1);
        seq.push_back(rho0);
        for (int m = 1; m <= cfg.m_max; ++m) {
            seq.push_back(grid[g].channel.apply(seq.back()));
        }
    });

    std::vector<Task> tasks;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (int m = 0; m <= cfg.m_max; ++m) {
            tasks.push_back({g, m});
        }
    }
    std::vector<std::vector<ExperimentRow>> slots(tasks.size());
    detail::parallel_for(tasks.size(), [&](std::size_t t) {
        const GridPoint &gp = grid[tasks[t].grid];
        const int m = tasks[t].m;
        const Operator &rho = states[tasks[t].grid][static_cast<std::size_t>(m)];
        const DeconvolutionPlan plan = plan_for_channel(obs, gp.channel, m);

        MeasurementTable table;
        auto &rows = slots[t];
        std::set<PauliIndex> needed;
        for (const PauliIndex &k : plan.required_measurements()) {
            needed.insert(k);
        }
        for (const auto &[k, c] : obs.terms()) {
            needed.insert(k);
        }
        needed.erase(PauliIndex::identity(n));
        for (const PauliIndex &k : needed) {
            const std::uint64_t seed = derive_seed(cfg.seed, {tasks[t].grid, static_cast<std::uint64_t>(m), k.flat()});
            ExpectationRecord rec;
            if (cfg.shots == 0) {
                rec.value = expectation_exact(rho, k);
                rec.seed = seed;
            } else {
                rec = expectation_sampled(rho, k, cfg.shots, seed, cfg.sampling);
            }
            rec.m = m;
            table[k] = {rec.value, rec.std_error};
            ExperimentRow row{gp.mu, gp.q, k, rec, std::nullopt};
            if (plan.path() == DeconvolutionPlan::Path::kDiagonal) {
                const double f = plan.factors().at(k);
                row.record.deconvolved = f * rec.value;
                row.deconvolved_stderr = std::abs(f) * rec.std_error;
            }
            rows.push_back(row);
        }
        if (needs_aggregate(plan)) {
            ExpectationRecord agg;
            agg.m = m;
            agg.shots = cfg.shots;
            agg.seed = derive_seed(cfg.seed, {tasks[t].grid, static_cast<std::uint64_t>(m)});
            double noisy = 0.0;
            double var = 0.0;
            for (const auto &[idx, c] : obs.terms()) {
                if (idx.is_identity()) {
                    noisy += c;
                    continue;
                }
                const Measurement &meas = table.at(idx);
                noisy += c * meas.value;
                var += c * c * meas.std_error * meas.std_error;
            }
            agg.value = noisy;
            agg.std_error = std::sqrt(var);
            const DeconvolvedValue dv = deconvolve(plan, table);
            agg.deconvolved = dv.value;
            rows.push_back({gp.mu, gp.q, std::nullopt, agg, dv.std_error});
        }
    });

    std::vector<ExperimentRow> out;
    for (auto &slot : slots) {
        for (auto &row : slot) {
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::string format_experiment_csv(const std::vector<ExperimentRow> &rows) {
    std::string out = "mu,q,m,k,shots,seed,noisy,noisy_stderr,deconvolved,deconvolved_stderr\n";
    for (const auto &row : rows) {
        const auto &r = row.record;
        out += format_double(row.mu) + ',' + format_double(row.q) + ',' + std::to_string(r.m) + ',' +
               (row.k ? row.k->label() : std::string("*")) + ',' + std::to_string(r.shots) + ',' +
               std::to_string(r.seed) + ',' + format_double(r.value) + ',' + format_double(r.std_error) + ',' +
               (r.deconvolved ? format_double(*r.deconvolved) : std::string()) + ',' +
               (row.deconvolved_stderr ? format_double(*row.deconvolved_stderr) : std::string()) + '\n';
    }
    return out;
}

}  // namespace qdeconv
