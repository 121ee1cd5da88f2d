#include "qdeconv/pauli.h"

#include <bit>
#include <cmath>

#include "qdeconv/errors.h"

namespace qdeconv {

namespace {

constexpr char kPauliLetters[4] = {'I', 'X', 'Y', 'Z'};

void check_dense_qubits(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("dense operators support 1 to " + std::to_string(kMaxDenseQubits) +
                                  " qubits, got " + std::to_string(num_qubits));
    }
}

int qubits_for_dim(Eigen::Index dim) {
    if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
        throw DimensionMismatch("operator dimension " + std::to_string(dim) + " is not a power of two >= 2");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

}  // namespace

std::size_t hilbert_dim(int num_qubits) {
    return std::size_t{1} << num_qubits;
}

std::size_t basis_size(int num_qubits) {
    return std::size_t{1} << (2 * num_qubits);
}

// --------------------------------------------------------------------------
// PauliIndex

PauliIndex::PauliIndex(int num_qubits, std::uint64_t flat) : num_qubits_(num_qubits), flat_(flat) {
    if (num_qubits < 1 || num_qubits > kMaxIndexQubits) {
        throw InvalidArgument("PauliIndex qubit count out of range: " + std::to_string(num_qubits));
    }
    if (flat >= (std::uint64_t{1} << (2 * num_qubits))) {
        throw InvalidArgument("PauliIndex " + std::to_string(flat) + " out of range for " +
                              std::to_string(num_qubits) + " qubits");
    }
}

PauliIndex PauliIndex::from_digits(std::span<const int> digits) {
    std::uint64_t flat = 0;
    for (int a : digits) {
        if (a < 0 || a > 3) {
            throw InvalidArgument("Pauli digit must be in {0,1,2,3}, got " + std::to_string(a));
        }
        flat = flat * 4 + static_cast<std::uint64_t>(a);
    }
    return PauliIndex(static_cast<int>(digits.size()), flat);
}

PauliIndex PauliIndex::from_label(std::string_view label) {
    std::vector<int> digits;
    digits.reserve(label.size());
    for (char c : label) {
        switch (c) {
            case 'I':
                digits.push_back(0);
                break;
            case 'X':
                digits.push_back(1);
                break;
            case 'Y':
                digits.push_back(2);
                break;
            case 'Z':
                digits.push_back(3);
                break;
            default:
                throw InvalidArgument("invalid Pauli letter '" + std::string(1, c) + "' in \"" +
                                      std::string(label) + "\"");
        }
    }
    return from_digits(digits);
}

int PauliIndex::digit(int q) const {
    if (q < 0 || q >= num_qubits_) {
        throw InvalidArgument("qubit " + std::to_string(q) + " out of range");
    }
    return static_cast<int>((flat_ >> (2 * (num_qubits_ - 1 - q))) & 3u);
}

std::vector<int> PauliIndex::digits() const {
    std::vector<int> out(static_cast<std::size_t>(num_qubits_));
    for (int q = 0; q < num_qubits_; ++q) {
        out[static_cast<std::size_t>(q)] = digit(q);
    }
    return out;
}

std::string PauliIndex::label() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(num_qubits_));
    for (int q = 0; q < num_qubits_; ++q) {
        out.push_back(kPauliLetters[digit(q)]);
    }
    return out;
}

std::uint64_t PauliIndex::x_mask() const noexcept {
    std::uint64_t mask = 0;
    for (int q = 0; q < num_qubits_; ++q) {
        int a = static_cast<int>((flat_ >> (2 * (num_qubits_ - 1 - q))) & 3u);
        if (a == 1 || a == 2) {
            mask |= std::uint64_t{1} << (num_qubits_ - 1 - q);
        }
    }
    return mask;
}

std::uint64_t PauliIndex::z_mask() const noexcept {
    std::uint64_t mask = 0;
    for (int q = 0; q < num_qubits_; ++q) {
        int a = static_cast<int>((flat_ >> (2 * (num_qubits_ - 1 - q))) & 3u);
        if (a == 2 || a == 3) {
            mask |= std::uint64_t{1} << (num_qubits_ - 1 - q);
        }
    }
    return mask;
}

int PauliIndex::y_count() const noexcept {
    return std::popcount(x_mask() & z_mask());
}

bool PauliIndex::commutes_with(const PauliIndex &other) const {
    if (other.num_qubits_ != num_qubits_) {
        throw DimensionMismatch("commutes_with: qubit counts differ");
    }
    std::uint64_t anti = (x_mask() & other.z_mask()) ^ (z_mask() & other.x_mask());
    return std::popcount(anti) % 2 == 0;
}

// --------------------------------------------------------------------------
// Operator

Operator::Operator(Eigen::MatrixXcd matrix) : num_qubits_(0), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw DimensionMismatch("operator must be square");
    }
    num_qubits_ = qubits_for_dim(matrix_.rows());
    check_dense_qubits(num_qubits_);
}

Operator Operator::identity(int num_qubits) {
    check_dense_qubits(num_qubits);
    auto d = static_cast<Eigen::Index>(hilbert_dim(num_qubits));
    return Operator(Eigen::MatrixXcd::Identity(d, d));
}

Operator Operator::zero(int num_qubits) {
    check_dense_qubits(num_qubits);
    auto d = static_cast<Eigen::Index>(hilbert_dim(num_qubits));
    return Operator(Eigen::MatrixXcd::Zero(d, d));
}

Operator Operator::basis_projector(int num_qubits, std::size_t b) {
    check_dense_qubits(num_qubits);
    std::size_t d = hilbert_dim(num_qubits);
    if (b >= d) {
        throw InvalidArgument("basis state index out of range");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = 1.0;
    return Operator(std::move(m));
}

bool Operator::is_hermitian(double tol) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// --------------------------------------------------------------------------
// Pauli elements

complex_t pauli_phase(const PauliIndex &idx, std::uint64_t row) {
    // sigma_y = -i Z X up to the row sign, so each Y contributes a factor -i
    // and every Y or Z contributes (-1)^(row bit).
    static const complex_t kMinusIPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    complex_t phase = kMinusIPowers[idx.y_count() % 4];
    if (std::popcount(row & idx.z_mask()) % 2 != 0) {
        phase = -phase;
    }
    return phase;
}

Operator pauli_element(const PauliIndex &idx) {
    check_dense_qubits(idx.num_qubits());
    const std::size_t d = hilbert_dim(idx.num_qubits());
    const std::uint64_t x = idx.x_mask();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::uint64_t r = 0; r < d; ++r) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ x)) = pauli_phase(idx, r);
    }
    return Operator(std::move(m));
}

complex_t pauli_trace(const PauliIndex &idx, const Eigen::MatrixXcd &a) {
    const auto d = static_cast<std::uint64_t>(a.rows());
    if (d != hilbert_dim(idx.num_qubits()) || a.cols() != a.rows()) {
        throw DimensionMismatch("pauli_trace: operator dimension does not match Pauli index");
    }
    const std::uint64_t x = idx.x_mask();
    const std::uint64_t z = idx.z_mask();
    // Tr[P A] = sum_r P[r][r^x] A[r^x][r], with a row-independent base phase.
    complex_t even{0.0, 0.0};
    complex_t odd{0.0, 0.0};
    for (std::uint64_t r = 0; r < d; ++r) {
        const complex_t v = a(static_cast<Eigen::Index>(r ^ x), static_cast<Eigen::Index>(r));
        if (std::popcount(r & z) % 2 == 0) {
            even += v;
        } else {
            odd += v;
        }
    }
    return pauli_phase(idx, 0) * (even - odd);
}

Eigen::MatrixXcd pauli_conjugate(const PauliIndex &idx, const Eigen::MatrixXcd &a) {
    const auto d = static_cast<std::uint64_t>(a.rows());
    if (d != hilbert_dim(idx.num_qubits()) || a.cols() != a.rows()) {
        throw DimensionMismatch("pauli_conjugate: operator dimension does not match Pauli index");
    }
    const std::uint64_t x = idx.x_mask();
    const std::uint64_t z = idx.z_mask();
    // (P A P)[r][c] = s(r) s(c) A[r^x][c^x] with s the +-1 row sign; the
    // base phase cancels against its conjugate because P is Hermitian.
    Eigen::MatrixXcd out(a.rows(), a.cols());
    for (std::uint64_t c = 0; c < d; ++c) {
        const bool sc = std::popcount(c & z) % 2 != 0;
        for (std::uint64_t r = 0; r < d; ++r) {
            const bool sr = std::popcount(r & z) % 2 != 0;
            const complex_t v = a(static_cast<Eigen::Index>(r ^ x), static_cast<Eigen::Index>(c ^ x));
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (sr != sc) ? -v : v;
        }
    }
    return out;
}

complex_t hs_inner(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("hs_inner: operators act on different dimensions");
    }
    // Tr[A^dagger B] = sum_ij conj(A_ij) B_ij
    complex_t acc = (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
    return acc / static_cast<double>(a.dim());
}

// --------------------------------------------------------------------------
// Vectorization

VectorizedOperator::VectorizedOperator(int num_qubits, Eigen::VectorXcd coeffs)
    : num_qubits_(num_qubits), coeffs_(std::move(coeffs)) {
    check_dense_qubits(num_qubits);
    if (static_cast<std::size_t>(coeffs_.size()) != basis_size(num_qubits)) {
        throw DimensionMismatch("vectorized operator needs 4^n coefficients");
    }
}

bool VectorizedOperator::is_real(double tol) const {
    return coeffs_.imag().cwiseAbs().maxCoeff() <= tol;
}

VectorizedOperator vectorize(const Operator &a) {
    const int n = a.num_qubits();
    const std::size_t size = basis_size(n);
    const double d = static_cast<double>(a.dim());
    Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(size));
    for (std::uint64_t k = 0; k < size; ++k) {
        // P_k is Hermitian, so <<k|A>> = Tr[P_k A] / d.
        coeffs(static_cast<Eigen::Index>(k)) = pauli_trace(PauliIndex(n, k), a.matrix()) / d;
    }
    return VectorizedOperator(n, std::move(coeffs));
}

Operator devectorize(const VectorizedOperator &v) {
    const int n = v.num_qubits();
    const std::size_t d = hilbert_dim(n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::uint64_t k = 0; k < basis_size(n); ++k) {
        const complex_t c = v[k];
        if (c == complex_t{0.0, 0.0}) {
            continue;
        }
        PauliIndex idx(n, k);
        const std::uint64_t x = idx.x_mask();
        for (std::uint64_t r = 0; r < d; ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ x)) += c * pauli_phase(idx, r);
        }
    }
    return Operator(std::move(m));
}

// --------------------------------------------------------------------------
// Observable

Observable::Observable(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxIndexQubits) {
        throw InvalidArgument("observable qubit count out of range");
    }
}

Observable::Observable(int num_qubits, const Terms &terms, double prune_tol) : Observable(num_qubits) {
    for (const auto &[idx, c] : terms) {
        if (idx.num_qubits() != num_qubits) {
            throw DimensionMismatch("observable term " + idx.label() + " has the wrong qubit count");
        }
        if (!std::isfinite(c)) {
            throw InvalidArgument("observable coefficient for " + idx.label() + " is not finite");
        }
        if (std::abs(c) > prune_tol) {
            terms_.emplace(idx, c);
        }
    }
}

Observable Observable::single(const PauliIndex &idx, double coefficient) {
    return Observable(idx.num_qubits(), Terms{{idx, coefficient}});
}

double Observable::coefficient(const PauliIndex &idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? 0.0 : it->second;
}

Operator Observable::to_operator() const {
    check_dense_qubits(num_qubits_);
    Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_size(num_qubits_)));
    for (const auto &[idx, c] : terms_) {
        coeffs(static_cast<Eigen::Index>(idx.flat())) = c;
    }
    return devectorize(VectorizedOperator(num_qubits_, std::move(coeffs)));
}

Observable observable_from_operator(const Operator &a, double prune_tol) {
    if (!a.is_hermitian(1e-10)) {
        throw NonHermitianInput("observable_from_operator requires a Hermitian operator");
    }
    const VectorizedOperator v = vectorize(a);
    Observable::Terms terms;
    for (std::uint64_t k = 0; k < basis_size(a.num_qubits()); ++k) {
        terms.emplace(PauliIndex(a.num_qubits(), k), v[k].real());
    }
    return Observable(a.num_qubits(), terms, prune_tol);
}

std::vector<PauliIndex> all_paulis(int num_qubits) {
    std::vector<PauliIndex> out;
    const std::size_t size = basis_size(num_qubits);
    out.reserve(size);
    for (std::uint64_t k = 0; k < size; ++k) {
        out.emplace_back(num_qubits, k);
    }
    return out;
}

}  // namespace qdeconv
