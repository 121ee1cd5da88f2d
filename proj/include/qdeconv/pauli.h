#ifndef QDECONV_PAULI_H
#define QDECONV_PAULI_H

#include <Eigen/Dense>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdeconv {

using complex_t = std::complex<double>;

/// Largest qubit count for dense d x d operators.
inline constexpr int kMaxDenseQubits = 6;
/// Largest qubit count accepted by PauliIndex (the flat index must fit 64 bits).
inline constexpr int kMaxIndexQubits = 31;

/// d = 2^n
std::size_t hilbert_dim(int num_qubits);
/// d^2 = 4^n
std::size_t basis_size(int num_qubits);

/// An n-qubit Pauli string sigma_{a_1} x ... x sigma_{a_n}, digits a_i in
/// {0: I, 1: X, 2: Y, 3: Z}. The flat index is k = sum_i a_i 4^(n-i), so the
/// first qubit is the most significant base-4 digit and also the most
/// significant bit of the computational-basis row index.
class PauliIndex {
   public:
    PauliIndex(int num_qubits, std::uint64_t flat);

    static PauliIndex from_digits(std::span<const int> digits);
    /// Parses a label such as "XIZ". Throws InvalidArgument on bad characters.
    static PauliIndex from_label(std::string_view label);
    static PauliIndex identity(int num_qubits) {
        return PauliIndex(num_qubits, 0);
    }

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    std::uint64_t flat() const noexcept {
        return flat_;
    }
    bool is_identity() const noexcept {
        return flat_ == 0;
    }

    /// Digit of qubit `q` (0-based, q = 0 is the leftmost tensor factor).
    int digit(int q) const;
    std::vector<int> digits() const;
    std::string label() const;

    /// Bit (n-1-q) is set when qubit q carries X or Y.
    std::uint64_t x_mask() const noexcept;
    /// Bit (n-1-q) is set when qubit q carries Y or Z.
    std::uint64_t z_mask() const noexcept;
    int y_count() const noexcept;

    bool commutes_with(const PauliIndex &other) const;

    friend auto operator<=>(const PauliIndex &, const PauliIndex &) = default;

   private:
    int num_qubits_;
    std::uint64_t flat_;
};

/// Dense d x d complex operator on n qubits (density matrices, observables,
/// Kraus operators). Immutable.
class Operator {
   public:
    explicit Operator(Eigen::MatrixXcd matrix);

    static Operator identity(int num_qubits);
    static Operator zero(int num_qubits);
    /// |b><b| for a computational basis index b.
    static Operator basis_projector(int num_qubits, std::size_t b);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    std::size_t dim() const noexcept {
        return static_cast<std::size_t>(matrix_.rows());
    }
    const Eigen::MatrixXcd &matrix() const noexcept {
        return matrix_;
    }

    complex_t trace() const {
        return matrix_.trace();
    }
    bool is_hermitian(double tol = 1e-10) const;

   private:
    int num_qubits_;
    Eigen::MatrixXcd matrix_;
};

/// The sign of a Pauli element: P_k[row][row ^ x_mask] for the given row.
complex_t pauli_phase(const PauliIndex &idx, std::uint64_t row);

/// Dense sigma_{a_1} x ... x sigma_{a_n}, built directly from its
/// signed-permutation structure.
Operator pauli_element(const PauliIndex &idx);

/// Tr[P_k A] in O(d).
complex_t pauli_trace(const PauliIndex &idx, const Eigen::MatrixXcd &a);

/// P_k A P_k in O(d^2).
Eigen::MatrixXcd pauli_conjugate(const PauliIndex &idx, const Eigen::MatrixXcd &a);

/// Hilbert-Schmidt product Tr[A^dagger B] / d.
complex_t hs_inner(const Operator &a, const Operator &b);

/// Coefficients A_k = Tr[P_k A] / d over the Pauli basis.
class VectorizedOperator {
   public:
    VectorizedOperator(int num_qubits, Eigen::VectorXcd coeffs);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    const Eigen::VectorXcd &coeffs() const noexcept {
        return coeffs_;
    }
    complex_t operator[](std::size_t k) const {
        return coeffs_(static_cast<Eigen::Index>(k));
    }
    /// True when every coefficient is real within `tol`.
    bool is_real(double tol = 1e-12) const;

   private:
    int num_qubits_;
    Eigen::VectorXcd coeffs_;
};

VectorizedOperator vectorize(const Operator &a);
Operator devectorize(const VectorizedOperator &v);

/// Real-coefficient sparse expansion of an operator over the Pauli basis.
/// Zero (|c| <= prune tolerance) coefficients are never stored.
class Observable {
   public:
    using Terms = std::map<PauliIndex, double>;

    explicit Observable(int num_qubits);
    Observable(int num_qubits, const Terms &terms, double prune_tol = 1e-14);

    static Observable single(const PauliIndex &idx, double coefficient = 1.0);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    const Terms &terms() const noexcept {
        return terms_;
    }
    /// Number of nonzero components.
    std::size_t r() const noexcept {
        return terms_.size();
    }
    double coefficient(const PauliIndex &idx) const;

    Operator to_operator() const;

   private:
    int num_qubits_;
    Terms terms_;
};

/// Projects a Hermitian operator onto the Pauli basis. Throws
/// NonHermitianInput if A differs from A^dagger by more than 1e-10.
Observable observable_from_operator(const Operator &a, double prune_tol = 1e-14);

/// Enumerates every PauliIndex of an n-qubit basis in flat order.
std::vector<PauliIndex> all_paulis(int num_qubits);

}  // namespace qdeconv

#endif
