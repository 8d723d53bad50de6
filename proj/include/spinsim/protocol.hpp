#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "spinsim/device.hpp"
#include "spinsim/esr.hpp"
#include "spinsim/exchange.hpp"
#include "spinsim/initialization.hpp"
#include "spinsim/readout.hpp"

namespace spinsim::harness {

struct InitStep {
  int qubit = 0;
  init::InitMethod method;
};

/// Free evolution of every live qubit (T1/T2 decay toward equilibrium).
struct WaitStep {
  double duration = 0.0;  // s
};

struct EsrStep {
  int qubit = 0;
  esr::EsrPulse pulse;
  /// Integrator override; by default each execution derives
  /// BlochSettings::recommended for the step's pulse and dot.
  std::optional<esr::BlochSettings> settings;
};

/// Acts on qubits 0 and 1 (two-qubit protocols only).
struct ExchangeStep {
  exchange::ExchangePulse pulse;
};

struct MeasureStep {
  int qubit = 0;
  readout::ReadoutConfig config;
  readout::DetectorModel detector;
};

using ProtocolStep = std::variant<InitStep, WaitStep, EsrStep, ExchangeStep, MeasureStep>;

struct Protocol {
  std::vector<ProtocolStep> steps;

  /// Highest referenced qubit index + 1.
  int num_qubits() const;

  /// Structural rules: every referenced qubit is initialized first and
  /// exactly once; nothing references a qubit after its (non-Off) Measure;
  /// exchange steps need both qubits live and a shared static field.
  /// Violations name the offending step index.
  void validate(const device::DeviceParams& device) const;
};

}  // namespace spinsim::harness
