#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinsim/device.hpp"
#include "spinsim/harness.hpp"
#include "spinsim/protocol.hpp"
#include "spinsim/run_result.hpp"

namespace spinsim::config {

/// A parsed experiment file: device, protocol and run settings. Quantity
/// fields accept plain numbers (base SI units) or suffixed strings like
/// "5 T", "100 ns", "25.5 ueV". Unknown keys are rejected.
struct Experiment {
  device::DeviceParams device;
  harness::Protocol protocol;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool seed_given = false;
  std::vector<std::string> warnings;
};

Experiment parse_experiment(const nlohmann::ordered_json& doc);
Experiment parse_experiment_file(const std::string& path);

harness::RunResult run_experiment(const Experiment& experiment, std::vector<harness::ShotRecord>* shot_log = nullptr);

/// Round-trip echoes used in result metadata (base SI units throughout).
nlohmann::ordered_json device_to_json(const device::DeviceParams& device);
nlohmann::ordered_json protocol_to_json(const harness::Protocol& protocol);

/// One-dimensional scan: rewrites the value at `path` (a JSON pointer into
/// the experiment document), reparses and reruns per point.
struct SweepSpec {
  std::string path;
  std::vector<double> values;  // base SI units
  std::string outcome;         // marginal to tabulate, e.g. "q0=down"
  std::uint64_t shots = 0;     // 0: inherit the experiment's shot count
};

struct SweepPoint {
  double value = 0.0;
  harness::RunResult result;
};

/// Reads doc["sweep"] if present. The default outcome is "q<N>=down" for the
/// first measured qubit.
std::optional<SweepSpec> parse_sweep(const nlohmann::ordered_json& doc);

/// Runs the scan. Each point gets an independent seed derived from the
/// experiment seed and the point index, so points are uncorrelated but the
/// whole scan is reproducible.
std::vector<SweepPoint> run_sweep(const nlohmann::ordered_json& doc, const SweepSpec& spec);

/// Columns: parameter, value, p_estimate, ci_low, ci_high, shots. The
/// estimate is the Wilson interval of spec.outcome at each point.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points);

}  // namespace spinsim::config
