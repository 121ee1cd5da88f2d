#include "qdeconv/deconvolution.h"

#include <cmath>
#include <limits>

#include "qdeconv/errors.h"
#include "qdeconv/format.h"

namespace qdeconv {

namespace {

// Weights below this fraction of the largest one are rounding residue of
// the inversion and do not require a measurement.
constexpr double kWeightPruneRel = 1e-13;

std::map<PauliIndex, double> weights_from_vector(int n, const Eigen::VectorXd &w) {
    std::map<PauliIndex, double> out;
    const double scale = w.size() > 0 ? w.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w(j) != 0.0 && std::abs(w(j)) > kWeightPruneRel * scale) {
            out.emplace(PauliIndex(n, static_cast<std::uint64_t>(j)), w(j));
        }
    }
    return out;
}

Eigen::VectorXd dense_coefficients(const Observable &obs) {
    Eigen::VectorXd o = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(obs.num_qubits())));
    for (const auto &[idx, c] : obs.terms()) {
        o(static_cast<Eigen::Index>(idx.flat())) = c;
    }
    return o;
}

struct Inversion {
    Eigen::MatrixXd inverse;
    double condition = 1.0;
};

Inversion invert_checked(const Eigen::MatrixXd &m, double singular_tol) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(singular_tol);
    if (!lu.isInvertible()) {
        throw SingularPtm("transfer matrix has rank " + std::to_string(lu.rank()) + " < " +
                          std::to_string(m.rows()));
    }
    Inversion out{lu.inverse(), 0.0};
    const double rcond = lu.rcond();
    out.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    return out;
}

std::optional<std::string> condition_warning(double condition, double cond_warn) {
    if (condition > cond_warn) {
        return "IllConditioned: condition number " + format_double(condition) + " exceeds " +
               format_double(cond_warn);
    }
    return std::nullopt;
}

}  // namespace

DeconvolutionPlan::DeconvolutionPlan(Path path, Observable observable)
    : path_(path), observable_(std::move(observable)) {
}

std::vector<PauliIndex> DeconvolutionPlan::required_measurements() const {
    std::vector<PauliIndex> out;
    out.reserve(weights_.size());
    for (const auto &[idx, w] : weights_) {
        out.push_back(idx);
    }
    return out;
}

DeconvolutionPlan plan_pauli(const Observable &obs, const PauliDiagonalChannel &ch, int repetitions, double inv_tol) {
    if (obs.num_qubits() != ch.num_qubits()) {
        throw DimensionMismatch("plan_pauli: observable and channel qubit counts differ");
    }
    if (repetitions < 0) {
        throw InvalidArgument("repetition count must be nonnegative");
    }
    DeconvolutionPlan plan(DeconvolutionPlan::Path::kDiagonal, obs);
    double min_abs = 1.0;
    for (const auto &[idx, c] : obs.terms()) {
        const double lambda = ch.eigenvalue(idx);
        ++plan.entries_consulted_;
        const double lambda_m = std::pow(lambda, repetitions);
        if (std::abs(lambda_m) <= inv_tol) {
            throw NonInvertibleChannel("transfer-matrix entry for " + idx.label() + " is " + format_double(lambda_m) +
                                       "; the channel has no inverse on this component");
        }
        min_abs = std::min(min_abs, std::abs(lambda_m));
        const double factor = 1.0 / lambda_m;
        plan.factors_.emplace(idx, factor);
        plan.weights_.emplace(idx, factor * c);
    }
    plan.condition_number_ = 1.0 / min_abs;
    return plan;
}

DeconvolutionPlan plan_from_lambdas(const Observable &obs, const std::map<PauliIndex, double> &lambdas,
                                    double inv_tol) {
    DeconvolutionPlan plan(DeconvolutionPlan::Path::kDiagonal, obs);
    double min_abs = 1.0;
    for (const auto &[idx, c] : obs.terms()) {
        double lambda = 1.0;
        if (!idx.is_identity()) {
            auto it = lambdas.find(idx);
            if (it == lambdas.end()) {
                throw MissingMeasurement("no transfer-matrix entry supplied for " + idx.label());
            }
            lambda = it->second;
        }
        ++plan.entries_consulted_;
        if (std::abs(lambda) <= inv_tol) {
            throw NonInvertibleChannel("transfer-matrix entry for " + idx.label() + " is " + format_double(lambda));
        }
        min_abs = std::min(min_abs, std::abs(lambda));
        plan.factors_.emplace(idx, 1.0 / lambda);
        plan.weights_.emplace(idx, c / lambda);
    }
    plan.condition_number_ = 1.0 / min_abs;
    return plan;
}

DeconvolutionPlan plan_general(const Observable &obs, const Ptm &ptm, double cond_warn, double singular_tol) {
    if (obs.num_qubits() != ptm.num_qubits()) {
        throw DimensionMismatch("plan_general: observable and channel qubit counts differ");
    }
    const Eigen::MatrixXd adjoint = ptm.matrix().transpose();
    Inversion inv = invert_checked(adjoint, singular_tol);

    DeconvolutionPlan plan(DeconvolutionPlan::Path::kGeneral, obs);
    plan.inverse_adjoint_ = std::move(inv.inverse);
    plan.entries_consulted_ = static_cast<std::uint64_t>(plan.inverse_adjoint_.size());
    plan.condition_number_ = inv.condition;
    plan.warning_ = condition_warning(inv.condition, cond_warn);
    plan.weights_ = weights_from_vector(obs.num_qubits(), plan.inverse_adjoint_ * dense_coefficients(obs));
    return plan;
}

DeconvolutionPlan plan_composed(const Observable &obs, const PauliDiagonalChannel &pauli, const Ptm &non_pauli,
                                bool pauli_first, double cond_warn) {
    if (obs.num_qubits() != pauli.num_qubits() || obs.num_qubits() != non_pauli.num_qubits()) {
        throw DimensionMismatch("plan_composed: qubit counts differ");
    }
    Inversion inv = invert_checked(non_pauli.matrix().transpose(), kDefaultInvTol);
    const auto &lambdas = pauli.lambdas();

    DeconvolutionPlan plan(DeconvolutionPlan::Path::kGeneral, obs);
    plan.entries_consulted_ = static_cast<std::uint64_t>(inv.inverse.size());

    auto rescale = [&](Eigen::VectorXd v) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (v(j) == 0.0) {
                continue;
            }
            const double lambda = lambdas[static_cast<std::size_t>(j)];
            ++plan.entries_consulted_;
            if (std::abs(lambda) <= kDefaultInvTol) {
                throw NonInvertibleChannel("Pauli factor entry " + PauliIndex(obs.num_qubits(), j).label() +
                                           " vanishes");
            }
            v(j) /= lambda;
        }
        return v;
    };

    // Gamma = Gamma_A Lambda  =>  (Gamma^*)^-1 = (Gamma_A^T)^-1 Lambda^-1
    // Gamma = Lambda Gamma_A  =>  (Gamma^*)^-1 = Lambda^-1 (Gamma_A^T)^-1
    Eigen::VectorXd w;
    Eigen::VectorXd inv_lambda(static_cast<Eigen::Index>(lambdas.size()));
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        inv_lambda(static_cast<Eigen::Index>(j)) = std::abs(lambdas[j]) > kDefaultInvTol ? 1.0 / lambdas[j] : 0.0;
    }
    if (pauli_first) {
        w = inv.inverse * rescale(dense_coefficients(obs));
        plan.inverse_adjoint_ = inv.inverse * inv_lambda.asDiagonal();
    } else {
        w = rescale(inv.inverse * dense_coefficients(obs));
        plan.inverse_adjoint_ = inv_lambda.asDiagonal() * inv.inverse;
    }
    plan.condition_number_ = inv.condition;
    plan.warning_ = condition_warning(inv.condition, cond_warn);
    plan.weights_ = weights_from_vector(obs.num_qubits(), w);
    return plan;
}

DeconvolutionPlan plan_for_channel(const Observable &obs, const Channel &ch, int repetitions) {
    if (const auto *diag = ch.pauli_diagonal()) {
        return plan_pauli(obs, *diag, repetitions);
    }
    return plan_general(obs, ptm_power(ch.ptm(), repetitions));
}

double deconvolve(const DeconvolutionPlan &plan, const NoisyExpectations &noisy) {
    double acc = 0.0;
    for (const auto &[idx, w] : plan.measurement_weights()) {
        auto it = noisy.find(idx);
        double value = 1.0;
        if (it != noisy.end()) {
            value = it->second;
        } else if (!idx.is_identity()) {
            throw MissingMeasurement("no noisy expectation supplied for " + idx.label());
        }
        acc += w * value;
    }
    return acc;
}

DeconvolvedValue deconvolve(const DeconvolutionPlan &plan, const MeasurementTable &noisy) {
    DeconvolvedValue out;
    double var = 0.0;
    for (const auto &[idx, w] : plan.measurement_weights()) {
        auto it = noisy.find(idx);
        Measurement m{1.0, 0.0};
        if (it != noisy.end()) {
            m = it->second;
        } else if (!idx.is_identity()) {
            throw MissingMeasurement("no noisy expectation supplied for " + idx.label());
        }
        out.value += w * m.value;
        var += (w * m.std_error) * (w * m.std_error);
    }
    out.std_error = std::sqrt(var);
    return out;
}

double reconstruction_factor(const Channel &ch, const PauliIndex &k, int m, double inv_tol) {
    const auto *diag = ch.pauli_diagonal();
    if (diag == nullptr) {
        throw NonInvertibleChannel("reconstruction factors are defined for Pauli (diagonal) channels only");
    }
    if (m < 0) {
        throw InvalidArgument("repetition count must be nonnegative");
    }
    const double lambda_m = std::pow(diag->eigenvalue(k), m);
    if (std::abs(lambda_m) <= inv_tol) {
        throw NonInvertibleChannel("transfer-matrix entry for " + k.label() + " vanishes");
    }
    return 1.0 / lambda_m;
}

}  // namespace qdeconv
