#pragma once

#include <cstdint>
#include <vector>

#include "spinsim/protocol.hpp"
#include "spinsim/readout.hpp"
#include "spinsim/run_result.hpp"

namespace spinsim::harness {

/// One measurement's raw record, tagged with its shot and step.
struct ShotRecord {
  std::uint64_t shot = 0;
  int step_index = 0;
  int qubit = 0;
  readout::ReadoutRecord record;
};

/// Runs the protocol `shots` times. Every random draw comes from a stream
/// keyed by (master_seed, shot, step), so the aggregate is byte-identical
/// for any worker count. If shot_log is given it receives every measurement
/// record in (shot, step) order.
RunResult run_protocol(const Protocol& protocol, const device::DeviceParams& device, std::uint64_t shots,
                       std::uint64_t master_seed, int workers = 1, std::vector<ShotRecord>* shot_log = nullptr);

/// First-order dephasing error of a gate: duration / T2.
double error_per_gate_budget(double gate_duration, double t2);

/// CSV for a shot log: columns shot, true_spin, tunnel_out_time, signal,
/// declared (one row per measurement; empty tunnel time when no exit event).
std::string shot_log_csv(const std::vector<ShotRecord>& log);

}  // namespace spinsim::harness
