#include "qdeconv/measurement.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "qdeconv/errors.h"

namespace qdeconv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double checked_probability_plus(double e) {
    if (!std::isfinite(e) || std::abs(e) > 1.0 + 1e-9) {
        throw ProbabilityOutOfRange("expectation " + std::to_string(e) + " lies outside [-1, 1]");
    }
    return (1.0 + std::clamp(e, -1.0, 1.0)) / 2.0;
}

ExpectationRecord finish(std::int64_t plus_minus_sum, std::uint64_t shots, std::uint64_t seed) {
    ExpectationRecord rec;
    rec.shots = shots;
    rec.seed = seed;
    rec.value = static_cast<double>(plus_minus_sum) / static_cast<double>(shots);
    rec.std_error = std::sqrt(std::max(0.0, (1.0 - rec.value * rec.value) / static_cast<double>(shots)));
    return rec;
}

// Local unitary U with U^dagger Z U = sigma_a, so measuring Z after U
// measures sigma_a.
Eigen::Matrix2cd basis_change(int digit) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    if (digit == 1) {
        u << s, s, s, -s;
    } else if (digit == 2) {
        // H S^dagger
        u << complex_t(s, 0), complex_t(0, -s), complex_t(s, 0), complex_t(0, s);
    }
    return u;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t c : coords) {
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

double expectation_exact(const Operator &rho, const PauliIndex &k) {
    const complex_t t = pauli_trace(k, rho.matrix());
    if (std::abs(t.imag()) > 1e-10) {
        throw InvalidArgument("expectation of " + k.label() + " has imaginary residue " + std::to_string(t.imag()));
    }
    return t.real();
}

ExpectationRecord sample_from_expectation(double e, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw InvalidArgument("sampled expectation needs at least one shot");
    }
    const double p_plus = checked_probability_plus(e);
    std::mt19937_64 rng(seed);
    std::binomial_distribution<std::uint64_t> dist(shots, p_plus);
    const std::uint64_t plus = dist(rng);
    return finish(2 * static_cast<std::int64_t>(plus) - static_cast<std::int64_t>(shots), shots, seed);
}

ExpectationRecord expectation_sampled(const Operator &rho, const PauliIndex &k, std::uint64_t shots,
                                      std::uint64_t seed, SamplingMode mode) {
    if (shots == 0) {
        throw InvalidArgument("sampled expectation needs at least one shot");
    }
    const double e = expectation_exact(rho, k);
    if (mode == SamplingMode::kMarginal) {
        return sample_from_expectation(e, shots, seed);
    }
    checked_probability_plus(e);

    const int n = rho.num_qubits();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Ones(1, 1);
    for (int q = 0; q < n; ++q) {
        const Eigen::Matrix2cd b = basis_change(k.digit(q));
        Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            for (Eigen::Index j = 0; j < u.cols(); ++j) {
                next.block(i * 2, j * 2, 2, 2) = u(i, j) * b;
            }
        }
        u = std::move(next);
    }
    const Eigen::MatrixXcd rotated = u * rho.matrix() * u.adjoint();
    std::vector<double> probs(static_cast<std::size_t>(rotated.rows()));
    for (Eigen::Index b = 0; b < rotated.rows(); ++b) {
        probs[static_cast<std::size_t>(b)] = std::max(0.0, rotated(b, b).real());
    }
    // Qubits carrying identity are measured but do not enter the parity.
    std::uint64_t support = 0;
    for (int q = 0; q < n; ++q) {
        if (k.digit(q) != 0) {
            support |= std::uint64_t{1} << (n - 1 - q);
        }
    }
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::uint64_t> dist(probs.begin(), probs.end());
    std::int64_t sum = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const std::uint64_t outcome = dist(rng);
        sum += (std::popcount(outcome & support) % 2 == 0) ? 1 : -1;
    }
    return finish(sum, shots, seed);
}

}  // namespace qdeconv
