#ifndef QDECONV_CLI_CONFIG_H
#define QDECONV_CLI_CONFIG_H

#include <filesystem>
#include <string>
#include <string_view>

#include "qdeconv/channels.h"
#include "qdeconv/pauli.h"
#include "qdeconv/simulator.h"

namespace qdeconv::cli {

/// Reads a whole file; throws InvalidArgument if it cannot be opened.
std::string read_file(const std::filesystem::path &path);

// Channel config (JSON object):
//   {"family": "bit_flip" | "dephasing", "n": int, "p": real, "mu": real}
//   {"family": "depolarizing", "n": int, "q": real, "mu": real}
//   {"family": "pauli_custom", "n": int, "p_vec": [p0, px, py, pz], "mu": real}
//   {"family": "pauli_custom", "n": int, "beta": [4^n weights]}
//   {"family": "amp_damp_corr", "n": 2, "eta": real, "mu": real}
//   {"family": "identity", "n": int}
// "mu" defaults to 0. Unknown keys are rejected.
ChannelSpec parse_channel_config(std::string_view json_text);

// Matrix (JSON object): {"real": [[...], ...], "imag": [[...], ...]} with
// "imag" optional.
Operator parse_matrix(std::string_view json_text);

// Experiment config (JSON object):
//   "n": int (required)
//   "channel": channel config object (required)
//   "initial_state": "zero" | "plus" | "maximally_mixed" | matrix object
//   "observable": {"ZZZ": 1.0, ...}            default Z on every qubit
//   "m_max": int = 40, "shots": int = 0, "seed": int = 0
//   "mu_grid": [reals], "param_grid": [reals]  default: the channel's own values
//   "sampling": "marginal" | "full_outcome"    default marginal
ExperimentConfig parse_experiment_config(std::string_view json_text);

}  // namespace qdeconv::cli

#endif
