#ifndef QDECONV_TESTS_ORACLES_H
#define QDECONV_TESTS_ORACLES_H

// Reference implementations used only by tests. They share no code with the
// library: Pauli strings are built by explicit Kronecker products, transfer
// matrices by dense traces, and closed forms are evaluated in long double.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat sigma(int a) {
    Mat s(2, 2);
    switch (a) {
        case 0:
            s << 1, 0, 0, 1;
            break;
        case 1:
            s << 0, 1, 1, 0;
            break;
        case 2:
            s << 0, cd(0, -1), cd(0, 1), 0;
            break;
        default:
            s << 1, 0, 0, -1;
            break;
    }
    return s;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Base-4 digits of k, most significant first.
inline std::vector<int> digits(int n, std::uint64_t k) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int q = n - 1; q >= 0; --q) {
        d[static_cast<std::size_t>(q)] = static_cast<int>(k % 4);
        k /= 4;
    }
    return d;
}

inline Mat pauli(int n, std::uint64_t k) {
    Mat out = Mat::Ones(1, 1);
    for (int a : digits(n, k)) {
        out = kron(out, sigma(a));
    }
    return out;
}

inline std::uint64_t basis(int n) {
    return std::uint64_t{1} << (2 * n);
}

/// Gamma_jq = Tr[P_j sum_i K_i P_q K_i^dagger] / d.
inline Eigen::MatrixXd ptm(int n, const std::vector<Mat> &kraus) {
    const auto size = static_cast<Eigen::Index>(basis(n));
    const double d = std::pow(2.0, n);
    std::vector<Mat> ps;
    for (std::uint64_t k = 0; k < basis(n); ++k) {
        ps.push_back(pauli(n, k));
    }
    Eigen::MatrixXd out(size, size);
    for (Eigen::Index q = 0; q < size; ++q) {
        Mat img = Mat::Zero(ps[0].rows(), ps[0].cols());
        for (const auto &kop : kraus) {
            img += kop * ps[static_cast<std::size_t>(q)] * kop.adjoint();
        }
        for (Eigen::Index j = 0; j < size; ++j) {
            out(j, q) = (ps[static_cast<std::size_t>(j)] * img).trace().real() / d;
        }
    }
    return out;
}

inline Mat apply(const std::vector<Mat> &kraus, const Mat &rho) {
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto &k : kraus) {
        out += k * rho * k.adjoint();
    }
    return out;
}

/// p(a_1) prod_j [(1 - mu) p(a_j) + mu delta(a_j, a_{j-1})] for every string.
inline std::vector<double> markov_weights(int n, const std::array<double, 4> &p, double mu) {
    std::vector<double> w;
    for (std::uint64_t k = 0; k < basis(n); ++k) {
        const auto d = digits(n, k);
        long double v = p[static_cast<std::size_t>(d[0])];
        for (std::size_t j = 1; j < d.size(); ++j) {
            v *= (1.0L - mu) * p[static_cast<std::size_t>(d[j])] + (d[j] == d[j - 1] ? mu : 0.0L);
        }
        w.push_back(static_cast<double>(v));
    }
    return w;
}

inline std::vector<Mat> pauli_kraus(int n, const std::vector<double> &weights) {
    std::vector<Mat> out;
    for (std::uint64_t k = 0; k < basis(n); ++k) {
        if (weights[k] > 0.0) {
            out.push_back(std::sqrt(weights[k]) * pauli(n, k));
        }
    }
    return out;
}

/// Two-qubit correlated amplitude damping written out from its definition.
inline std::vector<Mat> amp_damp_kraus(double eta, double mu) {
    Mat e0(2, 2), e1(2, 2);
    e0 << 1, 0, 0, std::sqrt(eta);
    e1 << 0, std::sqrt(1 - eta), 0, 0;
    Mat b0 = Mat::Identity(4, 4);
    b0(3, 3) = std::sqrt(eta);
    Mat b1 = Mat::Zero(4, 4);
    b1(0, 3) = std::sqrt(1 - eta);
    const double a = std::sqrt(1 - mu);
    const double b = std::sqrt(mu);
    return {a * kron(e0, e0), a * kron(e0, e1), a * kron(e1, e0), a * kron(e1, e1), b * b0, b * b1};
}

// Closed-form deconvolution factors for Z^n, evaluated in quad precision:
// the literal forms cancel to ~1e-4 near p = 0.5, which costs long double
// about 1e-12 absolute there.
using quad = __float128;

inline long double bitflip_f(int n, long double p_in, long double mu_in) {
    const quad p = p_in;
    const quad mu = mu_in;
    switch (n) {
        case 1:
            return static_cast<long double>(1 / (1 - 2 * p));
        case 2:
            return static_cast<long double>(1 / (1 + 4 * (mu - 1) * (1 - p) * p));
        default:
            return static_cast<long double>(1 / ((1 - 2 * p) * (1 + 4 * (mu - 1) * (mu - 1) * (p - 1) * p)));
    }
}

inline long double depolarizing_f(int n, long double q_in, long double mu_in) {
    const quad q = q_in;
    const quad mu = mu_in;
    switch (n) {
        case 1:
            return static_cast<long double>(1 / (1 - q));
        case 2:
            return static_cast<long double>(1 / (1 + (mu - 1) * (2 - q) * q));
        default:
            return static_cast<long double>(1 / ((1 - q) * (1 + (mu - 1) * (mu - 1) * (q - 2) * q)));
    }
}

inline long double amp_f(long double eta, long double mu) {
    return 1.0L / (2 * (mu * (eta - std::sqrt(eta)) - eta) * (mu * (eta - 1) - eta));
}

inline long double amp_g(long double eta, long double mu) {
    const long double t = eta + mu * (1 - eta);
    return 1.0L / (t * t);
}

inline Mat random_density(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(1) << n;
    Mat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cd(g(rng), g(rng));
        }
    }
    Mat rho = a * a.adjoint();
    return rho / rho.trace();
}

inline Mat random_hermitian(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(1) << n;
    Mat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cd(g(rng), g(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

}  // namespace oracle

#endif
