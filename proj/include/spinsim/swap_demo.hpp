#pragma once

#include <cstdint>

#include "spinsim/readout.hpp"
#include "spinsim/run_result.hpp"

namespace spinsim::harness {

/// State-transfer check on the two-qubit reference device: prepare q0 up and
/// q1 with Pr[up] = p_up_q2, read both out, then repeat with a full exchange
/// swap inserted before readout. Both phases land in one result with outcome
/// keys prefixed "pre:" / "post:"; `shots` applies per phase, and the quoted
/// probabilities are per phase. After the swap, q1's up fraction tracks q0's
/// preparation and vice versa.
RunResult swap_demo_experiment(double p_up_q2, std::uint64_t shots, const readout::ReadoutConfig& config,
                               std::uint64_t master_seed,
                               const readout::DetectorModel& detector = readout::DetectorModel::ideal(),
                               int workers = 1);

}  // namespace spinsim::harness
