#include "qdeconv/channels.h"

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "oracles.h"
#include "qdeconv/errors.h"

namespace qdeconv {
namespace {

std::vector<oracle::Mat> dense_ops(const KrausChannel &ch) {
    std::vector<oracle::Mat> out;
    for (const auto &op : ch.kraus_ops()) {
        out.push_back(op.matrix());
    }
    return out;
}

double max_abs(const Eigen::MatrixXd &m) {
    return m.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd kron_real(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

TEST(PtmFromKraus, IdentityChannel) {
    KrausChannel id(2, {Operator::identity(2)});
    EXPECT_EQ(max_abs(ptm_from_kraus(id).matrix() - Eigen::MatrixXd::Identity(16, 16)), 0.0);
}

TEST(PtmFromKraus, SingleQubitFamilies) {
    const double p = 0.1;
    const Ptm bf = ptm_from_kraus(bit_flip_channel(1, p, 0.0));
    EXPECT_NEAR(bf.entry(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(bf.entry(1, 1), 1.0, 1e-15);
    EXPECT_NEAR(bf.entry(2, 2), 1 - 2 * p, 1e-15);
    EXPECT_NEAR(bf.entry(3, 3), 1 - 2 * p, 1e-15);

    const double q = 0.3;
    const Ptm dp = ptm_from_kraus(depolarizing_channel(1, q, 0.0));
    EXPECT_NEAR(dp.entry(0, 0), 1.0, 1e-15);
    for (std::size_t k = 1; k < 4; ++k) {
        EXPECT_NEAR(dp.entry(k, k), 1 - q, 1e-15);
    }
}

TEST(PtmFromKraus, MatchesDenseTraceOracle) {
    const std::vector<KrausChannel> chans = {
        bit_flip_channel(2, 0.13, 0.4), depolarizing_channel(3, 0.2, 0.7), dephasing_channel(2, 0.3, 0.5),
        correlated_pauli_channel(2, {0.6, 0.1, 0.2, 0.1}, 0.3), correlated_amplitude_damping(0.4, 0.6)};
    for (const auto &ch : chans) {
        const Eigen::MatrixXd ref = oracle::ptm(ch.num_qubits(), dense_ops(ch));
        EXPECT_LT(max_abs(ptm_from_kraus(ch).matrix() - ref), 1e-12);
    }
}

TEST(CorrelatedPauli, WeightsMatchMarkovChain) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
            const double s = p[0] + p[1] + p[2] + p[3];
            for (auto &x : p) {
                x /= s;
            }
            const double mu = u(rng);
            const auto ch = correlated_pauli_channel(n, p, mu);
            const auto ref = oracle::markov_weights(n, p, mu);
            ASSERT_EQ(ch.pauli_weights().size(), ref.size());
            double total = 0.0;
            for (std::size_t k = 0; k < ref.size(); ++k) {
                EXPECT_NEAR(ch.pauli_weights()[k], ref[k], 1e-15);
                total += ch.pauli_weights()[k];
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(CorrelatedPauli, PtmIsDiagonal) {
    for (int n = 1; n <= 4; ++n) {
        for (double mu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Ptm p = ptm_from_kraus(correlated_pauli_channel(n, {0.7, 0.1, 0.15, 0.05}, mu));
            EXPECT_TRUE(p.is_diagonal(1e-12)) << n << " " << mu;
            EXPECT_TRUE(p.is_trace_preserving());
            EXPECT_TRUE(p.is_unital());
        }
    }
}

TEST(CorrelatedPauli, DiagonalShortcutMatchesTraces) {
    for (int n = 1; n <= 3; ++n) {
        const auto ch = correlated_pauli_channel(n, {0.55, 0.2, 0.05, 0.2}, 0.35);
        const auto diag = PauliDiagonalChannel::from_probabilities(n, ch.pauli_weights());
        const Eigen::MatrixXd ref = oracle::ptm(n, dense_ops(ch));
        for (std::uint64_t k = 0; k < basis_size(n); ++k) {
            EXPECT_NEAR(diag.eigenvalue(PauliIndex(n, k)), ref(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)),
                        1e-14);
        }
    }
}

TEST(CorrelatedPauli, MemorylessIsKroneckerPower) {
    const PauliVector p{0.8, 0.05, 0.1, 0.05};
    const Eigen::MatrixXd one = ptm_from_kraus(correlated_pauli_channel(1, p, 0.0)).matrix();
    Eigen::MatrixXd expected = one;
    for (int n = 2; n <= 3; ++n) {
        expected = kron_real(expected, one);
        EXPECT_LT(max_abs(ptm_from_kraus(correlated_pauli_channel(n, p, 0.0)).matrix() - expected), 1e-12);
    }
}

TEST(CorrelatedPauli, FullMemoryBitFlip) {
    const auto ch = bit_flip_channel(2, 0.2, 1.0);
    const auto &w = ch.pauli_weights();
    for (std::uint64_t k = 0; k < 16; ++k) {
        const auto d = oracle::digits(2, k);
        if (d[0] != d[1]) {
            EXPECT_EQ(w[k], 0.0) << k;
        }
    }
    EXPECT_NEAR(w[0], 0.8, 1e-15);
    EXPECT_NEAR(w[5], 0.2, 1e-15);
}

TEST(CorrelatedPauli, TwoQubitBitFlipZZ) {
    for (double p : {0.05, 0.2, 0.45}) {
        for (double mu : {0.0, 0.3, 1.0}) {
            const Ptm g = ptm_from_kraus(bit_flip_channel(2, p, mu));
            EXPECT_NEAR(g.entry(15, 15), 1 + 4 * (mu - 1) * (1 - p) * p, 1e-14);
        }
    }
}

TEST(CorrelatedPauli, ParameterValidation) {
    EXPECT_THROW(correlated_pauli_channel(2, {0.5, 0.5, 0.5, -0.5}, 0.1), InvalidProbability);
    EXPECT_THROW(correlated_pauli_channel(2, {0.5, 0.1, 0.1, 0.1}, 0.1), InvalidProbability);
    EXPECT_THROW(correlated_pauli_channel(2, {0.7, 0.1, 0.1, 0.1}, 1.5), InvalidCorrelation);
    EXPECT_THROW(correlated_pauli_channel(2, {0.7, 0.1, 0.1, 0.1}, -0.1), InvalidCorrelation);
    EXPECT_THROW(bit_flip_channel(1, 1.5, 0.0), InvalidProbability);
}

TEST(Families, DepolarizingZeroIsIdentity) {
    for (double mu : {0.0, 0.5, 1.0}) {
        const Ptm g = ptm_from_kraus(depolarizing_channel(2, 0.0, mu));
        EXPECT_LT(max_abs(g.matrix() - Eigen::MatrixXd::Identity(16, 16)), 1e-15);
    }
}

TEST(Families, ParametrizationVectors) {
    const auto bf = bit_flip_channel(1, 0.3, 0.0).pauli_weights();
    EXPECT_NEAR(bf[0], 0.7, 1e-15);
    EXPECT_NEAR(bf[1], 0.3, 1e-15);
    EXPECT_EQ(bf[2], 0.0);
    EXPECT_EQ(bf[3], 0.0);
    const auto dp = depolarizing_channel(1, 0.4, 0.0).pauli_weights();
    EXPECT_NEAR(dp[0], 0.7, 1e-15);
    for (int k = 1; k < 4; ++k) {
        EXPECT_NEAR(dp[static_cast<std::size_t>(k)], 0.1, 1e-15);
    }
}

TEST(ApplyChannel, Examples) {
    const Operator zero = Operator::basis_projector(1, 0);
    const Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
    EXPECT_LT((apply_channel(Channel(bit_flip_channel(1, 0.5, 0.0)), zero).matrix() - half).norm(), 1e-15);
    std::mt19937_64 rng(2);
    const Operator rho(oracle::random_density(1, rng));
    EXPECT_LT((apply_channel(Channel(depolarizing_channel(1, 1.0, 0.0)), rho).matrix() - half).norm(), 1e-15);
    KrausChannel id(2, {Operator::identity(2)});
    const Operator rho2(oracle::random_density(2, rng));
    EXPECT_LT((apply_channel(Channel(id), rho2).matrix() - rho2.matrix()).norm(), 1e-15);
}

TEST(ApplyChannel, KrausAndPtmAgree) {
    std::mt19937_64 rng(3);
    const std::vector<KrausChannel> chans = {bit_flip_channel(3, 0.2, 0.4), depolarizing_channel(2, 0.3, 0.6),
                                             correlated_amplitude_damping(0.3, 0.5)};
    for (const auto &ch : chans) {
        for (int t = 0; t < 5; ++t) {
            const Operator rho(oracle::random_density(ch.num_qubits(), rng));
            const Operator a = ch.apply(rho);
            const Operator b = ptm_from_kraus(ch).apply(rho);
            const Operator c(oracle::apply(dense_ops(ch), rho.matrix()));
            EXPECT_LT((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_LT((a.matrix() - c.matrix()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_NEAR(a.trace().real(), 1.0, 1e-10);
        }
    }
}

TEST(ApplyChannel, DimensionMismatch) {
    EXPECT_THROW(bit_flip_channel(2, 0.1, 0.0).apply(Operator::identity(1)), DimensionMismatch);
}

TEST(Adjoint, PauliChannelIsSelfAdjoint) {
    const Ptm g = ptm_from_kraus(depolarizing_channel(2, 0.2, 0.3));
    EXPECT_EQ(max_abs(adjoint_ptm(g).matrix() - g.matrix()), 0.0);
    EXPECT_EQ(max_abs(adjoint_ptm(Ptm::identity(1)).matrix() - Eigen::MatrixXd::Identity(4, 4)), 0.0);
}

TEST(Adjoint, SatisfiesDefiningIdentity) {
    const double eta = 0.6;
    std::vector<Operator> ops;
    Eigen::MatrixXcd e0(2, 2), e1(2, 2);
    e0 << 1, 0, 0, std::sqrt(eta);
    e1 << 0, std::sqrt(1 - eta), 0, 0;
    ops.emplace_back(e0);
    ops.emplace_back(e1);
    const KrausChannel ad(1, ops);
    const Ptm g = ptm_from_kraus(ad);
    const Ptm gstar = adjoint_ptm(g);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
        const Operator a(oracle::random_hermitian(1, rng));
        const Operator b(oracle::random_hermitian(1, rng));
        const complex_t lhs = hs_inner(ad.apply(a), b);
        const complex_t rhs = hs_inner(a, gstar.apply(b));
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
    }
}

TEST(Compose, PowerExamples) {
    const Ptm g = ptm_from_kraus(bit_flip_channel(1, 0.15, 0.0));
    EXPECT_EQ(max_abs(ptm_power(g, 0).matrix() - Eigen::MatrixXd::Identity(4, 4)), 0.0);
    EXPECT_NEAR(ptm_power(g, 2).entry(3, 3), std::pow(1 - 0.3, 2), 1e-15);
    const Ptm ad = ptm_from_kraus(correlated_amplitude_damping(0.5, 0.3));
    const Ptm inv(2, ad.matrix().inverse());
    EXPECT_LT(max_abs(compose(ad, inv).matrix() - Eigen::MatrixXd::Identity(16, 16)), 1e-10);
}

TEST(Compose, PowerMatchesRepeatedKraus) {
    const std::vector<KrausChannel> chans = {depolarizing_channel(2, 0.1, 0.4), correlated_amplitude_damping(0.7, 0.2),
                                             bit_flip_channel(3, 0.05, 0.5)};
    for (const auto &ch : chans) {
        const int n = ch.num_qubits();
        const auto ops = dense_ops(ch);
        const double d = std::pow(2.0, n);
        const auto size = static_cast<Eigen::Index>(oracle::basis(n));
        for (int m : {1, 3, 10}) {
            Eigen::MatrixXd ref(size, size);
            for (Eigen::Index q = 0; q < size; ++q) {
                oracle::Mat img = oracle::pauli(n, static_cast<std::uint64_t>(q));
                for (int i = 0; i < m; ++i) {
                    img = oracle::apply(ops, img);
                }
                for (Eigen::Index j = 0; j < size; ++j) {
                    ref(j, q) = (oracle::pauli(n, static_cast<std::uint64_t>(j)) * img).trace().real() / d;
                }
            }
            EXPECT_LT(max_abs(ptm_power(ptm_from_kraus(ch), m).matrix() - ref), 1e-9) << n << " " << m;
        }
    }
}

TEST(Compose, DiagonalPowerStaysDiagonal) {
    const auto diag = PauliDiagonalChannel::from_probabilities(2, bit_flip_channel(2, 0.1, 0.2).pauli_weights());
    const auto p5 = diag.power(5);
    for (std::uint64_t k = 0; k < 16; ++k) {
        EXPECT_NEAR(p5.eigenvalue(PauliIndex(2, k)), std::pow(diag.eigenvalue(PauliIndex(2, k)), 5), 1e-15);
    }
    EXPECT_TRUE(ptm_power(diag.to_ptm(), 5).is_diagonal());
}

TEST(AmplitudeDamping, TracePreservingAndEdgeCases) {
    for (double eta : {0.0, 0.3, 1.0}) {
        for (double mu : {0.0, 0.5, 1.0}) {
            const auto ch = correlated_amplitude_damping(eta, mu);
            Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
            for (const auto &k : ch.kraus_ops()) {
                s += k.matrix().adjoint() * k.matrix();
            }
            EXPECT_LT((s - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
            const Ptm g = ptm_from_kraus(ch);
            EXPECT_TRUE(g.is_trace_preserving());
            if (eta == 1.0) {
                EXPECT_LT(max_abs(g.matrix() - Eigen::MatrixXd::Identity(16, 16)), 1e-15);
            }
            if (mu == 1.0) {
                EXPECT_NEAR(g.entry(15, 15), 1.0, 1e-15);
            }
        }
    }
}

TEST(AmplitudeDamping, MemorylessFactorizes) {
    const double eta = 0.35;
    std::vector<Operator> ops;
    Eigen::MatrixXcd e0(2, 2), e1(2, 2);
    e0 << 1, 0, 0, std::sqrt(eta);
    e1 << 0, std::sqrt(1 - eta), 0, 0;
    ops.emplace_back(e0);
    ops.emplace_back(e1);
    const Eigen::MatrixXd one = ptm_from_kraus(KrausChannel(1, ops)).matrix();
    const Eigen::MatrixXd two = ptm_from_kraus(correlated_amplitude_damping(eta, 0.0)).matrix();
    EXPECT_LT(max_abs(two - kron_real(one, one)), 1e-12);
}

TEST(AmplitudeDamping, MatchesOracleKraus) {
    for (double eta : {0.2, 0.9}) {
        for (double mu : {0.0, 0.4, 1.0}) {
            const Eigen::MatrixXd ref = oracle::ptm(2, oracle::amp_damp_kraus(eta, mu));
            EXPECT_LT(max_abs(ptm_from_kraus(correlated_amplitude_damping(eta, mu)).matrix() - ref), 1e-12);
        }
    }
}

TEST(AmplitudeDamping, ParameterValidation) {
    EXPECT_THROW(correlated_amplitude_damping(1.2, 0.5), InvalidArgument);
    EXPECT_THROW(correlated_amplitude_damping(0.5, 1.2), InvalidCorrelation);
}

TEST(KrausChannel, RejectsNonTracePreserving) {
    EXPECT_THROW(KrausChannel(1, {Operator(Eigen::MatrixXcd::Identity(2, 2) * 0.9)}), NotTracePreserving);
}

TEST(Ptm, CapAndShapeChecks) {
    EXPECT_THROW(Ptm(1, Eigen::MatrixXd::Identity(3, 3)), Error);
    EXPECT_THROW(ptm_from_kraus(bit_flip_channel(6, 0.1, 0.0)), ResourceCapExceeded);
}

TEST(PauliDiagonal, RejectsInvalidEigenvalues) {
    EXPECT_THROW(PauliDiagonalChannel::from_eigenvalues(1, {0.9, 1, 1, 1}), Error);
    EXPECT_THROW(PauliDiagonalChannel::from_eigenvalues(1, {1, 1.5, 1, 1}), Error);
}

TEST(Channel, PauliDetection) {
    EXPECT_NE(Channel(bit_flip_channel(2, 0.1, 0.1)).pauli_diagonal(), nullptr);
    EXPECT_EQ(Channel(correlated_amplitude_damping(0.5, 0.5)).pauli_diagonal(), nullptr);
    EXPECT_NE(Channel(ptm_from_kraus(depolarizing_channel(2, 0.1, 0.3))).pauli_diagonal(), nullptr);
    EXPECT_NE(Channel(correlated_amplitude_damping(1.0, 0.5)).pauli_diagonal(), nullptr);
}

TEST(Channel, ConcurrentConversionIsShared) {
    const Channel ch(depolarizing_channel(3, 0.1, 0.5));
    std::vector<const Ptm *> seen(8, nullptr);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < seen.size(); ++i) {
        threads.emplace_back([&, i] { seen[i] = &ch.ptm(); });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (const Ptm *p : seen) {
        EXPECT_EQ(p, seen[0]);
    }
    const Channel copy = ch;
    EXPECT_EQ(&copy.ptm(), seen[0]);
}

TEST(BuildChannel, FamiliesFromSpec) {
    ChannelSpec s;
    s.family = ChannelFamily::kDepolarizing;
    s.num_qubits = 3;
    s.strength = 0.00052;
    s.mu = 0.25;
    const Channel ch = build_channel(s);
    const double q = s.strength;
    const double mu = s.mu;
    EXPECT_NEAR(ch.pauli_diagonal()->eigenvalue(PauliIndex::from_label("ZZZ")),
                (1 - q) * (1 + (mu - 1) * (mu - 1) * (q - 2) * q), 1e-15);

    s.family = ChannelFamily::kAmpDampCorr;
    EXPECT_THROW(build_channel(s), Error);
    s.num_qubits = 2;
    s.strength = 0.5;
    EXPECT_EQ(build_channel(s).pauli_diagonal(), nullptr);

    s.family = ChannelFamily::kIdentity;
    EXPECT_LT(max_abs(build_channel(s).ptm().matrix() - Eigen::MatrixXd::Identity(16, 16)), 0.5e-15);
    EXPECT_EQ(family_from_name(family_name(ChannelFamily::kPauliCustom)), ChannelFamily::kPauliCustom);
    EXPECT_FALSE(family_from_name("nope"));
}

TEST(CorrelatedPauli, SpectrumRecursionMatchesWeightSum) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 4; ++n) {
        // Sign of each weight from commutation of the explicit matrices.
        const auto size = oracle::basis(n);
        std::vector<oracle::Mat> ps;
        for (std::uint64_t k = 0; k < size; ++k) {
            ps.push_back(oracle::pauli(n, k));
        }
        std::vector<bool> commute(size * size);
        for (std::uint64_t j = 0; j < size; ++j) {
            for (std::uint64_t m = 0; m < size; ++m) {
                commute[j * size + m] = (ps[m] * ps[j] - ps[j] * ps[m]).norm() < 1e-9;
            }
        }
        for (int trial = 0; trial < 5; ++trial) {
            PauliVector p{0.0, u(rng), u(rng), u(rng)};
            const double s = p[1] + p[2] + p[3];
            for (int i = 1; i < 4; ++i) {
                p[static_cast<std::size_t>(i)] *= 0.6 / s;
            }
            p[0] = 1.0 - p[1] - p[2] - p[3];
            const double mu = u(rng);
            const auto weights = oracle::markov_weights(n, p, mu);
            const auto lambdas = correlated_pauli_eigenvalues(n, p, mu);
            const auto from_channel = correlated_pauli_channel(n, p, mu).diagonal_form().lambdas();
            for (std::uint64_t j = 0; j < size; ++j) {
                long double ref = 0.0L;
                for (std::uint64_t m = 0; m < size; ++m) {
                    ref += commute[j * size + m] ? weights[m] : -static_cast<long double>(weights[m]);
                }
                EXPECT_NEAR(lambdas[j], static_cast<double>(ref), 1e-14);
                EXPECT_EQ(from_channel[j], lambdas[j]);
            }
        }
    }
}

TEST(CorrelatedPauli, SpectrumAvoidsCancellation) {
    // (1 - 2p)^3 with p = 0.49 is 8e-6; summing signed weights loses ~1e-12 relative.
    const double p = 0.49;
    const double lam = correlated_pauli_eigenvalues(3, {1 - p, p, 0, 0}, 0.0)[PauliIndex::from_label("ZZZ").flat()];
    const long double exact = std::pow(1.0L - 2.0L * p, 3);
    EXPECT_LE(std::abs(lam - exact) / exact, 4e-16);
    EXPECT_THROW(correlated_pauli_eigenvalues(2, {0.5, 0.5, 0.5, -0.5}, 0.1), InvalidProbability);
}

}  // namespace
}  // namespace qdeconv
