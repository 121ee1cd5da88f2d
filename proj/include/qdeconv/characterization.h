#ifndef QDECONV_CHARACTERIZATION_H
#define QDECONV_CHARACTERIZATION_H

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdeconv/channels.h"
#include "qdeconv/deconvolution.h"
#include "qdeconv/pauli.h"

namespace qdeconv {

/// Threshold on |Tr[P_j Phi(1/d)]| above which a channel counts as non-unital.
inline constexpr double kUnitalityTol = 1e-9;
/// Tolerance on S_m for the positive-semidefinite verdict.
inline constexpr double kPositivityTol = 1e-10;

/// Black-box channel: the characterization only ever pushes states through it.
using ChannelOracle = std::function<Operator(const Operator &)>;

ChannelOracle as_oracle(const Channel &ch);

/// rho_k = (1 + P_k) / d for k != 0.
struct ProbeState {
    PauliIndex k;
    Operator op;
};

/// Throws IdentityProbe for k = 0.
ProbeState probe_state(const PauliIndex &k);

struct EntryEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;  // 0 means exact
    std::uint64_t seed = 0;
};

/// Gamma_kk = <P_k> on Phi(rho_k). shots == 0 evaluates exactly. Throws
/// NonUnitalChannel if |Tr[P_k Phi(1/d)]| > 1e-9.
EntryEstimate estimate_diagonal_entry(const ChannelOracle &ch, int num_qubits, const PauliIndex &k,
                                      std::uint64_t shots, std::uint64_t seed);

/// Estimated transfer-matrix entries keyed by (row j, column k).
class CharacterizedPtm {
   public:
    enum class Mode { kDiagonalOnly, kFull };
    using Key = std::pair<PauliIndex, PauliIndex>;

    CharacterizedPtm(int num_qubits, Mode mode);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    Mode mode() const noexcept {
        return mode_;
    }
    const std::map<Key, EntryEstimate> &entries() const noexcept {
        return entries_;
    }
    /// Distinct probe states rho_k prepared to obtain the measured entries.
    std::size_t probe_count() const;

    void set(const PauliIndex &j, const PauliIndex &k, const EntryEstimate &e);

    /// Diagonal values Gamma_kk, for use as deconvolution factors.
    std::map<PauliIndex, double> diagonal() const;
    /// Dense matrix; requires full mode.
    Ptm to_ptm() const;

   private:
    int num_qubits_;
    Mode mode_;
    std::map<Key, EntryEstimate> entries_;
};

/// Measures Gamma_kk for the requested k != 0 only (one probe each).
CharacterizedPtm estimate_diagonal_entries(const ChannelOracle &ch, int num_qubits, std::span<const PauliIndex> ks,
                                           std::uint64_t shots, std::uint64_t seed);

/// Entries needed by a diagonal plan for `obs`: Gamma_kk for each nonzero
/// non-identity component (Gamma_00 = 1 needs no probe).
CharacterizedPtm characterize_for_observable(const ChannelOracle &ch, const Observable &obs, std::uint64_t shots,
                                             std::uint64_t seed);

/// Gamma_jk = <P_j> on Phi(rho_k) for all j, k != 0; row 0 and column 0 are
/// filled from trace preservation and unitality. Throws NonUnitalChannel.
CharacterizedPtm estimate_full_ptm(const ChannelOracle &ch, int num_qubits, std::uint64_t shots, std::uint64_t seed);

/// Diagonal plan whose factors come from a characterization.
DeconvolutionPlan plan_from_characterization(const Observable &obs, const CharacterizedPtm &ptm);

/// Characteristic-polynomial coefficients S_0..S_d of rho from the Newton
/// recursion S_m = (1/m) sum_{j=1..m} (-1)^(j-1) Tr[rho^j] S_{m-j}, S_0 = 1.
std::vector<double> positivity_coefficients(const Operator &rho);

/// All S_m >= -tol.
bool is_positive_semidefinite(std::span<const double> coefficients, double tol = kPositivityTol);

// Report: CSV with header `j,k,estimate,std_error,shots,seed`, Pauli labels
// in the j/k columns and one row per stored entry in (j, k) order.
std::string format_characterization_report(const CharacterizedPtm &ptm);
CharacterizedPtm parse_characterization_report(std::string_view text);

}  // namespace qdeconv

#endif
