#include "qdeconv/channels.h"

#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>

#include "qdeconv/errors.h"

namespace qdeconv {

namespace {

constexpr double kProbabilityTol = 1e-12;

void check_full_ptm_qubits(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxFullPtmQubits) {
        throw ResourceCapExceeded("full transfer matrices support 1 to " + std::to_string(kMaxFullPtmQubits) +
                                  " qubits, got " + std::to_string(num_qubits));
    }
}

void check_same_qubits(int a, int b, const char *what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": qubit counts differ (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
    }
}

void validate_probabilities(const std::vector<double> &probs, const char *what) {
    double sum = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw InvalidProbability(std::string(what) + ": probabilities must be finite and nonnegative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTol) {
        throw InvalidProbability(std::string(what) + ": probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

void validate_unit_interval(double value, const char *name) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw InvalidArgument(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

void validate_probability(double value, const char *name) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw InvalidProbability(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

void validate_correlation(double mu) {
    if (!std::isfinite(mu) || mu < 0.0 || mu > 1.0) {
        throw InvalidCorrelation("mu must lie in [0, 1], got " + std::to_string(mu));
    }
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

// --------------------------------------------------------------------------
// KrausChannel

KrausChannel::KrausChannel(int num_qubits, std::vector<Operator> ops, double tp_tol)
    : num_qubits_(num_qubits), ops_(std::move(ops)) {
    if (ops_.empty()) {
        throw InvalidArgument("Kraus channel needs at least one operator");
    }
    const auto d = static_cast<Eigen::Index>(hilbert_dim(num_qubits));
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto &k : ops_) {
        check_same_qubits(k.num_qubits(), num_qubits, "KrausChannel");
        sum.noalias() += k.matrix().adjoint() * k.matrix();
    }
    const double residual = (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (residual > tp_tol) {
        throw NotTracePreserving("sum of K^dagger K deviates from identity by " + std::to_string(residual));
    }
}

KrausChannel KrausChannel::pauli(int num_qubits, std::vector<double> beta) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("Pauli channels support 1 to " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    if (beta.size() != basis_size(num_qubits)) {
        throw DimensionMismatch("Pauli weight vector must have 4^n entries");
    }
    validate_probabilities(beta, "Pauli channel");
    KrausChannel ch;
    ch.num_qubits_ = num_qubits;
    ch.pauli_weights_ = std::move(beta);
    return ch;
}

std::vector<Operator> KrausChannel::kraus_ops() const {
    if (!is_pauli()) {
        return ops_;
    }
    std::vector<Operator> out;
    for (std::uint64_t k = 0; k < pauli_weights_.size(); ++k) {
        if (pauli_weights_[k] > 0.0) {
            Eigen::MatrixXcd m = std::sqrt(pauli_weights_[k]) * pauli_element(PauliIndex(num_qubits_, k)).matrix();
            out.emplace_back(std::move(m));
        }
    }
    return out;
}

PauliDiagonalChannel KrausChannel::diagonal_form() const {
    if (!is_pauli()) {
        throw InvalidArgument("diagonal form requested for a non-Pauli channel");
    }
    if (pauli_lambdas_.empty()) {
        return PauliDiagonalChannel::from_probabilities(num_qubits_, pauli_weights_);
    }
    return PauliDiagonalChannel(num_qubits_, pauli_lambdas_, pauli_weights_);
}

Operator KrausChannel::apply(const Operator &rho) const {
    check_same_qubits(rho.num_qubits(), num_qubits_, "KrausChannel::apply");
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    if (is_pauli()) {
        for (std::uint64_t k = 0; k < pauli_weights_.size(); ++k) {
            if (pauli_weights_[k] > 0.0) {
                out += pauli_weights_[k] * pauli_conjugate(PauliIndex(num_qubits_, k), rho.matrix());
            }
        }
    } else {
        for (const auto &k : ops_) {
            out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
        }
    }
    return Operator(std::move(out));
}

// --------------------------------------------------------------------------
// Ptm

Ptm::Ptm(int num_qubits, Eigen::MatrixXd matrix) : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
    check_full_ptm_qubits(num_qubits);
    const auto size = static_cast<Eigen::Index>(basis_size(num_qubits));
    if (matrix_.rows() != size || matrix_.cols() != size) {
        throw DimensionMismatch("transfer matrix must be 4^n x 4^n");
    }
    if (!matrix_.allFinite()) {
        throw InvalidArgument("transfer matrix has non-finite entries");
    }
}

Ptm Ptm::identity(int num_qubits) {
    check_full_ptm_qubits(num_qubits);
    const auto size = static_cast<Eigen::Index>(basis_size(num_qubits));
    return Ptm(num_qubits, Eigen::MatrixXd::Identity(size, size));
}

bool Ptm::is_diagonal(double tol) const {
    Eigen::MatrixXd off = matrix_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol;
}

bool Ptm::is_trace_preserving(double tol) const {
    Eigen::RowVectorXd expected = Eigen::RowVectorXd::Zero(matrix_.cols());
    expected(0) = 1.0;
    return (matrix_.row(0) - expected).cwiseAbs().maxCoeff() <= tol;
}

bool Ptm::is_unital(double tol) const {
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(matrix_.rows());
    expected(0) = 1.0;
    return (matrix_.col(0) - expected).cwiseAbs().maxCoeff() <= tol;
}

Operator Ptm::apply(const Operator &rho) const {
    check_same_qubits(rho.num_qubits(), num_qubits_, "Ptm::apply");
    const VectorizedOperator v = vectorize(rho);
    Eigen::VectorXcd out = matrix_.cast<complex_t>() * v.coeffs();
    return devectorize(VectorizedOperator(num_qubits_, std::move(out)));
}

// --------------------------------------------------------------------------
// PauliDiagonalChannel

PauliDiagonalChannel::PauliDiagonalChannel(int num_qubits, std::vector<double> lambdas,
                                           std::optional<std::vector<double>> probs)
    : num_qubits_(num_qubits), lambdas_(std::move(lambdas)), probs_(std::move(probs)) {
}

PauliDiagonalChannel PauliDiagonalChannel::from_probabilities(int num_qubits, std::vector<double> beta) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("diagonal channels support 1 to " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    const std::size_t size = basis_size(num_qubits);
    if (beta.size() != size) {
        throw DimensionMismatch("Pauli weight vector must have 4^n entries");
    }
    validate_probabilities(beta, "Pauli channel");

    std::vector<std::uint64_t> xs(size);
    std::vector<std::uint64_t> zs(size);
    std::vector<std::uint64_t> support;
    for (std::uint64_t k = 0; k < size; ++k) {
        PauliIndex idx(num_qubits, k);
        xs[k] = idx.x_mask();
        zs[k] = idx.z_mask();
        if (beta[k] != 0.0) {
            support.push_back(k);
        }
    }
    // Each weight enters with +1 if P_m commutes with P_j and -1 otherwise.
    std::vector<double> lambdas(size);
    for (std::uint64_t j = 0; j < size; ++j) {
        long double acc = 0.0L;
        for (std::uint64_t m : support) {
            const bool anti = std::popcount((xs[m] & zs[j]) ^ (zs[m] & xs[j])) % 2 != 0;
            acc += anti ? -static_cast<long double>(beta[m]) : static_cast<long double>(beta[m]);
        }
        lambdas[j] = static_cast<double>(acc);
    }
    lambdas[0] = 1.0;
    return PauliDiagonalChannel(num_qubits, std::move(lambdas), std::move(beta));
}

PauliDiagonalChannel PauliDiagonalChannel::from_eigenvalues(int num_qubits, std::vector<double> lambdas) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("diagonal channels support 1 to " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    if (lambdas.size() != basis_size(num_qubits)) {
        throw DimensionMismatch("eigenvalue vector must have 4^n entries");
    }
    if (std::abs(lambdas[0] - 1.0) > 1e-12) {
        throw NotTracePreserving("lambda_0 must equal 1");
    }
    for (double l : lambdas) {
        if (!std::isfinite(l) || std::abs(l) > 1.0 + 1e-12) {
            throw InvalidArgument("diagonal transfer-matrix entries must satisfy |lambda| <= 1");
        }
    }
    return PauliDiagonalChannel(num_qubits, std::move(lambdas), std::nullopt);
}

double PauliDiagonalChannel::eigenvalue(const PauliIndex &k) const {
    check_same_qubits(k.num_qubits(), num_qubits_, "PauliDiagonalChannel::eigenvalue");
    return lambdas_[k.flat()];
}

PauliDiagonalChannel PauliDiagonalChannel::power(int m) const {
    if (m < 0) {
        throw InvalidArgument("repetition count must be nonnegative");
    }
    std::vector<double> out(lambdas_.size());
    for (std::size_t j = 0; j < lambdas_.size(); ++j) {
        out[j] = std::pow(lambdas_[j], m);
    }
    return PauliDiagonalChannel(num_qubits_, std::move(out), std::nullopt);
}

Ptm PauliDiagonalChannel::to_ptm() const {
    check_full_ptm_qubits(num_qubits_);
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(lambdas_.data(), static_cast<Eigen::Index>(lambdas_.size()));
    return Ptm(num_qubits_, diag.asDiagonal().toDenseMatrix());
}

Operator PauliDiagonalChannel::apply(const Operator &rho) const {
    check_same_qubits(rho.num_qubits(), num_qubits_, "PauliDiagonalChannel::apply");
    Eigen::VectorXcd coeffs = vectorize(rho).coeffs();
    for (std::size_t j = 0; j < lambdas_.size(); ++j) {
        coeffs(static_cast<Eigen::Index>(j)) *= lambdas_[j];
    }
    return devectorize(VectorizedOperator(num_qubits_, std::move(coeffs)));
}

// --------------------------------------------------------------------------
// Channel

struct Channel::Cache {
    std::once_flag ptm_once;
    std::optional<Ptm> ptm;
    std::once_flag diag_once;
    std::optional<PauliDiagonalChannel> diag;
};

Channel::Channel(KrausChannel kraus)
    : native_(std::make_shared<const Native>(std::move(kraus))), cache_(std::make_shared<Cache>()) {
}

Channel::Channel(Ptm ptm) : native_(std::make_shared<const Native>(std::move(ptm))), cache_(std::make_shared<Cache>()) {
}

Channel::Channel(PauliDiagonalChannel diagonal)
    : native_(std::make_shared<const Native>(std::move(diagonal))), cache_(std::make_shared<Cache>()) {
}

int Channel::num_qubits() const {
    return std::visit([](const auto &ch) { return ch.num_qubits(); }, *native_);
}

Operator Channel::apply(const Operator &rho) const {
    return std::visit([&](const auto &ch) { return ch.apply(rho); }, *native_);
}

const Ptm &Channel::ptm() const {
    if (const auto *p = std::get_if<Ptm>(native_.get())) {
        return *p;
    }
    std::call_once(cache_->ptm_once, [this] {
        if (const auto *d = std::get_if<PauliDiagonalChannel>(native_.get())) {
            cache_->ptm = d->to_ptm();
            return;
        }
        const auto &kraus = std::get<KrausChannel>(*native_);
        if (kraus.is_pauli()) {
            cache_->ptm = pauli_diagonal()->to_ptm();
        } else {
            cache_->ptm = ptm_from_kraus(kraus);
        }
    });
    return *cache_->ptm;
}

const PauliDiagonalChannel *Channel::pauli_diagonal() const {
    if (const auto *d = std::get_if<PauliDiagonalChannel>(native_.get())) {
        return d;
    }
    std::call_once(cache_->diag_once, [this] {
        // Pauli-form Kraus lists go straight to the sign sum; anything else
        // qualifies only if its full transfer matrix is diagonal.
        if (const auto *k = std::get_if<KrausChannel>(native_.get())) {
            if (k->is_pauli()) {
                cache_->diag = k->diagonal_form();
                return;
            }
            if (k->num_qubits() > kMaxFullPtmQubits) {
                return;
            }
        }
        const Ptm &full = ptm();
        if (!full.is_diagonal() || std::abs(full.entry(0, 0) - 1.0) > 1e-12) {
            return;
        }
        std::vector<double> lambdas(basis_size(full.num_qubits()));
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            lambdas[j] = full.entry(j, j);
            if (std::abs(lambdas[j]) > 1.0 + 1e-12) {
                return;
            }
        }
        cache_->diag = PauliDiagonalChannel::from_eigenvalues(full.num_qubits(), std::move(lambdas));
    });
    return cache_->diag ? &*cache_->diag : nullptr;
}

// --------------------------------------------------------------------------
// Free functions

Ptm ptm_from_kraus(const KrausChannel &ch) {
    const int n = ch.num_qubits();
    check_full_ptm_qubits(n);
    const std::size_t size = basis_size(n);
    const double d = static_cast<double>(hilbert_dim(n));
    const std::vector<Operator> ops = ch.is_pauli() ? std::vector<Operator>{} : ch.kraus_ops();

    Eigen::MatrixXd out(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::uint64_t q = 0; q < size; ++q) {
        const PauliIndex pq(n, q);
        Eigen::MatrixXcd image;
        if (ch.is_pauli()) {
            image = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            const auto &beta = ch.pauli_weights();
            const Eigen::MatrixXcd p = pauli_element(pq).matrix();
            for (std::uint64_t m = 0; m < size; ++m) {
                if (beta[m] > 0.0) {
                    image += beta[m] * pauli_conjugate(PauliIndex(n, m), p);
                }
            }
        } else {
            const Eigen::MatrixXcd p = pauli_element(pq).matrix();
            image = Eigen::MatrixXcd::Zero(p.rows(), p.cols());
            for (const auto &k : ops) {
                image.noalias() += k.matrix() * p * k.matrix().adjoint();
            }
        }
        for (std::uint64_t j = 0; j < size; ++j) {
            const complex_t t = pauli_trace(PauliIndex(n, j), image) / d;
            if (std::abs(t.imag()) > 1e-10) {
                throw InvalidArgument("transfer-matrix entry has imaginary residue " + std::to_string(t.imag()));
            }
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(q)) = t.real();
        }
    }
    return Ptm(n, std::move(out));
}

Operator apply_channel(const Channel &ch, const Operator &rho) {
    if (rho.num_qubits() != ch.num_qubits()) {
        throw DimensionMismatch("apply_channel: state and channel qubit counts differ");
    }
    return ch.apply(rho);
}

Ptm adjoint_ptm(const Ptm &ptm) {
    return Ptm(ptm.num_qubits(), ptm.matrix().transpose());
}

Ptm compose(const Ptm &a, const Ptm &b) {
    check_same_qubits(a.num_qubits(), b.num_qubits(), "compose");
    return Ptm(a.num_qubits(), a.matrix() * b.matrix());
}

Ptm ptm_power(const Ptm &ptm, int m) {
    if (m < 0) {
        throw InvalidArgument("repetition count must be nonnegative");
    }
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(ptm.matrix().rows(), ptm.matrix().cols());
    Eigen::MatrixXd base = ptm.matrix();
    // Square-and-multiply keeps diagonal inputs exactly diagonal.
    while (m > 0) {
        if (m & 1) {
            result = result * base;
        }
        m >>= 1;
        if (m > 0) {
            base = base * base;
        }
    }
    return Ptm(ptm.num_qubits(), std::move(result));
}

KrausChannel correlated_pauli_channel(int num_qubits, const PauliVector &p_vec, double mu) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("correlated Pauli channels support 1 to " + std::to_string(kMaxDenseQubits) +
                                  " qubits");
    }
    validate_probabilities(std::vector<double>(p_vec.begin(), p_vec.end()), "p_vec");
    validate_correlation(mu);

    const std::size_t size = basis_size(num_qubits);
    std::vector<double> beta(size);
    for (std::uint64_t k = 0; k < size; ++k) {
        const PauliIndex idx(num_qubits, k);
        int prev = idx.digit(0);
        double w = p_vec[static_cast<std::size_t>(prev)];
        for (int q = 1; q < num_qubits && w != 0.0; ++q) {
            const int a = idx.digit(q);
            w *= (1.0 - mu) * p_vec[static_cast<std::size_t>(a)] + (a == prev ? mu : 0.0);
            prev = a;
        }
        beta[k] = w;
    }
    const double total = std::accumulate(beta.begin(), beta.end(), 0.0);
    if (std::abs(total - 1.0) > kProbabilityTol) {
        throw InvalidProbability("correlated weights sum to " + std::to_string(total));
    }
    KrausChannel out = KrausChannel::pauli(num_qubits, std::move(beta));
    out.pauli_lambdas_ = correlated_pauli_eigenvalues(num_qubits, p_vec, mu);
    return out;
}

std::vector<double> correlated_pauli_eigenvalues(int num_qubits, const PauliVector &p_vec, double mu) {
    if (num_qubits < 1 || num_qubits > kMaxDenseQubits) {
        throw ResourceCapExceeded("correlated Pauli channels support 1 to " + std::to_string(kMaxDenseQubits) +
                                  " qubits");
    }
    validate_probabilities(std::vector<double>(p_vec.begin(), p_vec.end()), "p_vec");
    validate_correlation(mu);

    // Single-qubit spectrum from the error weights alone: l(b) = 1 - 2 sum of
    // p_a anticommuting with b. Digits 1..3 (X, Y, Z) multiply by xor.
    std::array<long double, 4> l{1.0L, 1.0L, 1.0L, 1.0L};
    for (int b = 1; b < 4; ++b) {
        long double anti = 0.0L;
        for (int a = 1; a < 4; ++a) {
            if (a != b) {
                anti += p_vec[static_cast<std::size_t>(a)];
            }
        }
        l[static_cast<std::size_t>(b)] = 1.0L - 2.0L * anti;
    }
    const long double m = mu;
    const std::size_t size = basis_size(num_qubits);
    std::vector<double> out(size);
    for (std::uint64_t k = 0; k < size; ++k) {
        const PauliIndex idx(num_qubits, k);
        std::array<long double, 4> v{};
        const auto k0 = static_cast<std::size_t>(idx.digit(0));
        for (std::size_t b = 0; b < 4; ++b) {
            v[b] = l[b ^ k0];
        }
        for (int q = 1; q < num_qubits; ++q) {
            const auto kq = static_cast<std::size_t>(idx.digit(q));
            std::array<long double, 4> next{};
            for (std::size_t b = 0; b < 4; ++b) {
                next[b] = (1.0L - m) * v[0] * l[b ^ kq] + m * v[b ^ kq];
            }
            v = next;
        }
        out[k] = static_cast<double>(v[0]);
    }
    return out;
}

KrausChannel bit_flip_channel(int num_qubits, double p, double mu) {
    validate_probability(p, "bit-flip p");
    return correlated_pauli_channel(num_qubits, {1.0 - p, p, 0.0, 0.0}, mu);
}

KrausChannel depolarizing_channel(int num_qubits, double q, double mu) {
    if (!std::isfinite(q) || q < 0.0 || q > 4.0 / 3.0) {
        throw InvalidProbability("depolarizing q must lie in [0, 4/3], got " + std::to_string(q));
    }
    return correlated_pauli_channel(num_qubits, {1.0 - 3.0 * q / 4.0, q / 4.0, q / 4.0, q / 4.0}, mu);
}

KrausChannel dephasing_channel(int num_qubits, double p, double mu) {
    validate_probability(p, "dephasing p");
    return correlated_pauli_channel(num_qubits, {1.0 - p, 0.0, 0.0, p}, mu);
}

KrausChannel correlated_amplitude_damping(double eta, double mu) {
    validate_unit_interval(eta, "eta");
    validate_correlation(mu);
    Eigen::MatrixXcd e0 = Eigen::MatrixXcd::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(eta);
    Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(2, 2);
    e1(0, 1) = std::sqrt(1.0 - eta);

    Eigen::MatrixXcd b0 = Eigen::MatrixXcd::Identity(4, 4);
    b0(3, 3) = std::sqrt(eta);
    Eigen::MatrixXcd b1 = Eigen::MatrixXcd::Zero(4, 4);
    b1(0, 3) = std::sqrt(1.0 - eta);

    const double memoryless = std::sqrt(1.0 - mu);
    const double memoryful = std::sqrt(mu);
    std::vector<Operator> ops;
    ops.emplace_back(memoryless * kronecker(e0, e0));
    ops.emplace_back(memoryless * kronecker(e0, e1));
    ops.emplace_back(memoryless * kronecker(e1, e0));
    ops.emplace_back(memoryless * kronecker(e1, e1));
    ops.emplace_back(memoryful * b0);
    ops.emplace_back(memoryful * b1);
    return KrausChannel(2, std::move(ops), 1e-12);
}

std::string family_name(ChannelFamily family) {
    switch (family) {
        case ChannelFamily::kIdentity:
            return "identity";
        case ChannelFamily::kBitFlip:
            return "bit_flip";
        case ChannelFamily::kDepolarizing:
            return "depolarizing";
        case ChannelFamily::kDephasing:
            return "dephasing";
        case ChannelFamily::kPauliCustom:
            return "pauli_custom";
        case ChannelFamily::kAmpDampCorr:
            return "amp_damp_corr";
    }
    return "unknown";
}

std::optional<ChannelFamily> family_from_name(const std::string &name) {
    for (auto f : {ChannelFamily::kIdentity, ChannelFamily::kBitFlip, ChannelFamily::kDepolarizing,
                   ChannelFamily::kDephasing, ChannelFamily::kPauliCustom, ChannelFamily::kAmpDampCorr}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

bool is_pauli_family(ChannelFamily family) {
    return family != ChannelFamily::kAmpDampCorr;
}

Channel build_channel(const ChannelSpec &spec) {
    const int n = spec.num_qubits;
    switch (spec.family) {
        case ChannelFamily::kIdentity: {
            if (n < 1 || n > kMaxDenseQubits) {
                throw ResourceCapExceeded("identity channel qubit count out of range");
            }
            std::vector<double> beta(basis_size(n), 0.0);
            beta[0] = 1.0;
            return Channel(KrausChannel::pauli(n, std::move(beta)));
        }
        case ChannelFamily::kBitFlip:
            return Channel(bit_flip_channel(n, spec.strength, spec.mu));
        case ChannelFamily::kDepolarizing:
            return Channel(depolarizing_channel(n, spec.strength, spec.mu));
        case ChannelFamily::kDephasing:
            return Channel(dephasing_channel(n, spec.strength, spec.mu));
        case ChannelFamily::kPauliCustom:
            if (!spec.beta.empty()) {
                return Channel(KrausChannel::pauli(n, spec.beta));
            }
            if (!spec.p_vec) {
                throw InvalidArgument("pauli_custom needs either p_vec or beta");
            }
            return Channel(correlated_pauli_channel(n, *spec.p_vec, spec.mu));
        case ChannelFamily::kAmpDampCorr:
            if (n != 2) {
                throw InvalidArgument("amp_damp_corr is defined for exactly 2 qubits");
            }
            return Channel(correlated_amplitude_damping(spec.strength, spec.mu));
    }
    throw InvalidArgument("unknown channel family");
}

}  // namespace qdeconv
