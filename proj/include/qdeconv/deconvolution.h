#ifndef QDECONV_DECONVOLUTION_H
#define QDECONV_DECONVOLUTION_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdeconv/channels.h"
#include "qdeconv/observable_io.h"
#include "qdeconv/pauli.h"

namespace qdeconv {

inline constexpr double kDefaultInvTol = 1e-12;
inline constexpr double kDefaultCondWarn = 1e8;

/// Precomputed recipe turning noisy Pauli expectations <P_j>_{N(rho)} into
/// the noiseless <O>_rho.
///
/// Diagonal path (Pauli channels): one factor 1/lambda_k per nonzero
/// component O_k; only those r entries of the transfer matrix are consulted.
/// General path: the full inverse adjoint transfer matrix is materialized
/// (d^4 entries) and folded with O into per-measurement weights.
class DeconvolutionPlan {
   public:
    enum class Path { kDiagonal, kGeneral };

    Path path() const noexcept {
        return path_;
    }
    const Observable &observable() const noexcept {
        return observable_;
    }
    /// Diagonal path: k -> 1/lambda_k^m. Empty on the general path.
    const std::map<PauliIndex, double> &factors() const noexcept {
        return factors_;
    }
    /// General path: (Gamma^*)^{-1}. Empty on the diagonal path.
    const Eigen::MatrixXd &inverse_adjoint_ptm() const noexcept {
        return inverse_adjoint_;
    }
    /// Transfer-matrix entries read (diagonal) or materialized (general).
    std::uint64_t entries_consulted() const noexcept {
        return entries_consulted_;
    }
    /// Coefficient multiplying each noisy <P_j>: w_j = sum_q (Gamma^*-1)_jq O_q
    /// on the general path, factor_k O_k on the diagonal path.
    const std::map<PauliIndex, double> &measurement_weights() const noexcept {
        return weights_;
    }
    /// Pauli strings whose noisy expectation the plan needs.
    std::vector<PauliIndex> required_measurements() const;

    /// Estimated 1-norm condition number of the inverted matrix (general
    /// path); 1/min|lambda| ratio on the diagonal path.
    double condition_number() const noexcept {
        return condition_number_;
    }
    /// Non-empty when the condition number exceeds the warning threshold.
    const std::optional<std::string> &warning() const noexcept {
        return warning_;
    }

   private:
    friend DeconvolutionPlan plan_pauli(const Observable &, const PauliDiagonalChannel &, int, double);
    friend DeconvolutionPlan plan_general(const Observable &, const Ptm &, double, double);
    friend DeconvolutionPlan plan_composed(const Observable &, const PauliDiagonalChannel &, const Ptm &, bool,
                                           double);
    friend DeconvolutionPlan plan_from_lambdas(const Observable &, const std::map<PauliIndex, double> &, double);

    DeconvolutionPlan(Path path, Observable observable);

    Path path_;
    Observable observable_;
    std::map<PauliIndex, double> factors_;
    Eigen::MatrixXd inverse_adjoint_;
    std::map<PauliIndex, double> weights_;
    std::uint64_t entries_consulted_ = 0;
    double condition_number_ = 1.0;
    std::optional<std::string> warning_;
};

/// Diagonal fast path for an m-fold Pauli channel: factor_k = lambda_k^(-m)
/// for each nonzero O_k. Throws NonInvertibleChannel if |lambda_k| <= inv_tol.
DeconvolutionPlan plan_pauli(const Observable &obs, const PauliDiagonalChannel &ch, int repetitions = 1,
                             double inv_tol = kDefaultInvTol);

/// Diagonal plan from separately supplied lambda_k (e.g. characterization
/// estimates). Every nonzero component must have an entry.
DeconvolutionPlan plan_from_lambdas(const Observable &obs, const std::map<PauliIndex, double> &lambdas,
                                    double inv_tol = kDefaultInvTol);

/// General path: inverts Gamma^T with a fully pivoted LU. Throws SingularPTM
/// if the matrix is not invertible; sets warning() when the condition number
/// exceeds cond_warn.
DeconvolutionPlan plan_general(const Observable &obs, const Ptm &ptm, double cond_warn = kDefaultCondWarn,
                               double singular_tol = kDefaultInvTol);

/// Channel made of a Pauli part and a non-Pauli part. With `pauli_first`
/// the Pauli channel acts before the non-Pauli one (Gamma = Gamma_A Lambda),
/// otherwise after it (Gamma = Lambda Gamma_A). Only Gamma_A is inverted
/// numerically; the Pauli factor is applied as an analytic rescaling.
DeconvolutionPlan plan_composed(const Observable &obs, const PauliDiagonalChannel &pauli, const Ptm &non_pauli,
                                bool pauli_first, double cond_warn = kDefaultCondWarn);

/// Picks the diagonal path for Pauli channels and the general path otherwise.
DeconvolutionPlan plan_for_channel(const Observable &obs, const Channel &ch, int repetitions = 1);

using NoisyExpectations = std::map<PauliIndex, double>;

/// sum_j w_j <P_j>_noisy, reduced in flat-index order. <I> defaults to 1
/// (unit trace) when absent; any other missing entry throws MissingMeasurement.
double deconvolve(const DeconvolutionPlan &plan, const NoisyExpectations &noisy);

struct DeconvolvedValue {
    double value = 0.0;
    /// sqrt(sum_j (w_j sigma_j)^2), assuming independent inputs.
    double std_error = 0.0;
};

DeconvolvedValue deconvolve(const DeconvolutionPlan &plan, const MeasurementTable &noisy);

/// lambda_k^(-m) for a Pauli channel. Throws NonInvertibleChannel when the
/// channel is not diagonal or lambda_k vanishes.
double reconstruction_factor(const Channel &ch, const PauliIndex &k, int m = 1, double inv_tol = kDefaultInvTol);

}  // namespace qdeconv

#endif
