#ifndef QDECONV_MEASUREMENT_H
#define QDECONV_MEASUREMENT_H

#include <cstdint>
#include <initializer_list>
#include <optional>

#include "qdeconv/pauli.h"

namespace qdeconv {

/// Mixes a base seed with stream coordinates (grid point, repetition, Pauli
/// index, ...) into an independent 64-bit stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords);

/// Tr[P_k rho]. Throws InvalidArgument if the imaginary residue exceeds 1e-10.
double expectation_exact(const Operator &rho, const PauliIndex &k);

struct ExpectationRecord {
    int m = 0;
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::optional<double> deconvolved;
};

enum class SamplingMode {
    /// Draw the +-1 outcome count from its binomial marginal (1 + e) / 2.
    kMarginal,
    /// Sample full 2^n-outcome projective measurements in the eigenbasis of
    /// P_k and take the parity of the measured qubits.
    kFullOutcome,
};

/// Estimates <P_k> from `shots` single-shot outcomes. value is the sample
/// mean, std_error = sqrt((1 - value^2) / shots). Deterministic in `seed`.
/// Throws ProbabilityOutOfRange if |Tr[P_k rho]| > 1 + 1e-9.
ExpectationRecord expectation_sampled(const Operator &rho, const PauliIndex &k, std::uint64_t shots,
                                      std::uint64_t seed, SamplingMode mode = SamplingMode::kMarginal);

/// Same estimator given the exact expectation e directly (marginal mode).
ExpectationRecord sample_from_expectation(double e, std::uint64_t shots, std::uint64_t seed);

}  // namespace qdeconv

#endif
