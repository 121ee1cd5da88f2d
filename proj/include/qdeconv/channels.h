#ifndef QDECONV_CHANNELS_H
#define QDECONV_CHANNELS_H

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qdeconv/pauli.h"

namespace qdeconv {

/// Largest qubit count for a materialized d^2 x d^2 transfer matrix.
inline constexpr int kMaxFullPtmQubits = 5;
/// Tolerance for classifying a transfer matrix as diagonal.
inline constexpr double kDiagonalTol = 1e-12;

class PauliDiagonalChannel;

/// Channel given by Kraus operators. Pauli channels (weighted Pauli strings)
/// keep only their weight vector and materialize operators on request.
class KrausChannel {
   public:
    /// General form. Throws NotTracePreserving if sum K^dagger K != 1 within tp_tol.
    KrausChannel(int num_qubits, std::vector<Operator> ops, double tp_tol = 1e-10);

    /// N(rho) = sum_k beta_k P_k rho P_k, beta indexed by flat Pauli index.
    /// Throws InvalidProbability unless beta >= 0 and sums to 1 (1e-12).
    static KrausChannel pauli(int num_qubits, std::vector<double> beta);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    bool is_pauli() const noexcept {
        return !pauli_weights_.empty();
    }
    /// Weights beta_k of a Pauli channel, empty otherwise.
    const std::vector<double> &pauli_weights() const noexcept {
        return pauli_weights_;
    }
    /// Kraus operators; for Pauli channels sqrt(beta_k) P_k over beta_k > 0.
    std::vector<Operator> kraus_ops() const;
    /// Diagonal form of a Pauli channel. Families with a closed-form spectrum
    /// carry their eigenvalues; otherwise they are summed from the weights.
    /// Throws InvalidArgument for non-Pauli channels.
    PauliDiagonalChannel diagonal_form() const;

    Operator apply(const Operator &rho) const;

   private:
    friend KrausChannel correlated_pauli_channel(int, const std::array<double, 4> &, double);
    KrausChannel() = default;

    int num_qubits_ = 0;
    std::vector<Operator> ops_;
    std::vector<double> pauli_weights_;
    std::vector<double> pauli_lambdas_;
};

/// Real d^2 x d^2 Pauli transfer matrix, Gamma_jq = Tr[P_j Phi(P_q)] / d.
class Ptm {
   public:
    Ptm(int num_qubits, Eigen::MatrixXd matrix);
    static Ptm identity(int num_qubits);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    const Eigen::MatrixXd &matrix() const noexcept {
        return matrix_;
    }
    double entry(std::size_t j, std::size_t q) const {
        return matrix_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(q));
    }

    bool is_diagonal(double tol = kDiagonalTol) const;
    /// First row equals (1, 0, ..., 0).
    bool is_trace_preserving(double tol = 1e-10) const;
    /// First column equals (1, 0, ..., 0)^T.
    bool is_unital(double tol = 1e-10) const;

    Operator apply(const Operator &rho) const;

   private:
    int num_qubits_;
    Eigen::MatrixXd matrix_;
};

/// Pauli channel held through its diagonal transfer-matrix entries lambda_j
/// and, when known, its Pauli weights beta_j.
class PauliDiagonalChannel {
   public:
    /// lambda_j = sum_m beta_m s(m, j), s = +1 when P_m and P_j commute.
    static PauliDiagonalChannel from_probabilities(int num_qubits, std::vector<double> beta);
    /// Requires lambda_0 = 1 and |lambda_j| <= 1.
    static PauliDiagonalChannel from_eigenvalues(int num_qubits, std::vector<double> lambdas);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    const std::vector<double> &lambdas() const noexcept {
        return lambdas_;
    }
    const std::optional<std::vector<double>> &probabilities() const noexcept {
        return probs_;
    }
    double eigenvalue(const PauliIndex &k) const;

    /// m-fold repetition: lambda_j^m.
    PauliDiagonalChannel power(int m) const;
    Ptm to_ptm() const;
    Operator apply(const Operator &rho) const;

   private:
    friend class KrausChannel;
    PauliDiagonalChannel(int num_qubits, std::vector<double> lambdas, std::optional<std::vector<double>> probs);

    int num_qubits_;
    std::vector<double> lambdas_;
    std::optional<std::vector<double>> probs_;
};

/// A channel in its native representation. Conversions are computed on
/// first use and cached; copies share the cache.
class Channel {
   public:
    using Native = std::variant<KrausChannel, Ptm, PauliDiagonalChannel>;

    Channel(KrausChannel kraus);
    Channel(Ptm ptm);
    Channel(PauliDiagonalChannel diagonal);

    int num_qubits() const;
    const Native &native() const noexcept {
        return *native_;
    }

    /// Applies the channel in its native representation.
    Operator apply(const Operator &rho) const;

    /// Full transfer matrix. Throws ResourceCapExceeded beyond 5 qubits.
    const Ptm &ptm() const;

    /// Diagonal form if the channel is a Pauli channel (Pauli-form Kraus
    /// list, diagonal PTM, or already diagonal), nullptr otherwise.
    const PauliDiagonalChannel *pauli_diagonal() const;
    bool is_pauli() const {
        return pauli_diagonal() != nullptr;
    }

   private:
    struct Cache;
    std::shared_ptr<const Native> native_;
    std::shared_ptr<Cache> cache_;
};

/// Gamma_jq = Tr[P_j sum_i K_i P_q K_i^dagger] / d, evaluated by traces.
/// Throws ResourceCapExceeded beyond 5 qubits.
Ptm ptm_from_kraus(const KrausChannel &ch);

Operator apply_channel(const Channel &ch, const Operator &rho);

/// Transfer matrix of the adjoint map (the transpose, entries being real).
Ptm adjoint_ptm(const Ptm &ptm);

/// Transfer matrix of a(b(.)): the product Gamma_a Gamma_b.
Ptm compose(const Ptm &a, const Ptm &b);
Ptm ptm_power(const Ptm &ptm, int m);

/// Single-qubit error distribution [1 - p, p_x, p_y, p_z].
using PauliVector = std::array<double, 4>;

/// Correlated Pauli channel with Markov-chain weights
/// p(a_1..a_n) = p(a_1) prod_j [(1 - mu) p(a_j) + mu delta(a_{j-1}, a_j)].
KrausChannel correlated_pauli_channel(int num_qubits, const PauliVector &p_vec, double mu);

/// lambda_k of the Markov-chain channel without forming the 4^n weights:
/// V_1(b) = l(b ^ k_1), V_j(b) = (1 - mu) V_{j-1}(0) l(b ^ k_j) + mu V_{j-1}(b ^ k_j),
/// lambda_k = V_n(0), where l is the single-qubit spectrum and ^ multiplies
/// single-qubit Paulis. Every term stays positive for p_vec with l > 0, so no
/// cancellation occurs when lambda_k is small.
std::vector<double> correlated_pauli_eigenvalues(int num_qubits, const PauliVector &p_vec, double mu);

/// [1 - p, p, 0, 0]
KrausChannel bit_flip_channel(int num_qubits, double p, double mu);
/// [1 - 3q/4, q/4, q/4, q/4]
KrausChannel depolarizing_channel(int num_qubits, double q, double mu);
/// [1 - p, 0, 0, p]
KrausChannel dephasing_channel(int num_qubits, double p, double mu);

/// Two-qubit amplitude damping mixing memoryless (weight 1 - mu) and
/// full-memory (weight mu) Kraus sets; eta is the transmissivity.
KrausChannel correlated_amplitude_damping(double eta, double mu);

/// Names accepted in channel configs.
enum class ChannelFamily { kIdentity, kBitFlip, kDepolarizing, kDephasing, kPauliCustom, kAmpDampCorr };

std::string family_name(ChannelFamily family);
std::optional<ChannelFamily> family_from_name(const std::string &name);

/// Parameters of one channel family instance. `strength` is p (bit flip,
/// dephasing), q (depolarizing) or eta (amplitude damping).
struct ChannelSpec {
    ChannelFamily family = ChannelFamily::kIdentity;
    int num_qubits = 1;
    double strength = 0.0;
    double mu = 0.0;
    std::optional<PauliVector> p_vec;  // pauli_custom, Markov form
    std::vector<double> beta;          // pauli_custom, explicit weights
};

Channel build_channel(const ChannelSpec &spec);

/// True for families whose Kraus operators are Pauli strings.
bool is_pauli_family(ChannelFamily family);

}  // namespace qdeconv

#endif
