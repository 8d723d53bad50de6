#include "spinsim/swap_demo.hpp"

#include "spinsim/config.hpp"
#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/harness.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/version.hpp"

namespace spinsim::harness {
namespace {

Protocol demo_protocol(double p_up_q2, const readout::ReadoutConfig& config,
                       const readout::DetectorModel& detector, bool with_swap) {
  init::TunnelFromPartiallyPolarizedLeads q0_prep;
  q0_prep.lead_polarization = 1.0;
  init::TunnelFromPartiallyPolarizedLeads q1_prep;
  q1_prep.lead_polarization = p_up_q2;

  Protocol protocol;
  protocol.steps.emplace_back(InitStep{0, q0_prep});
  protocol.steps.emplace_back(InitStep{1, q1_prep});
  if (with_swap) {
    // 20 GHz exchange: a 25 ps swap, far faster than any decay here.
    protocol.steps.emplace_back(ExchangeStep{exchange::ExchangePulse::swap(20e9 * constants::h)});
  }
  protocol.steps.emplace_back(MeasureStep{0, config, detector});
  protocol.steps.emplace_back(MeasureStep{1, config, detector});
  return protocol;
}

}  // namespace

RunResult swap_demo_experiment(double p_up_q2, std::uint64_t shots, const readout::ReadoutConfig& config,
                               std::uint64_t master_seed, const readout::DetectorModel& detector,
                               int workers) {
  if (!(p_up_q2 >= 0.0 && p_up_q2 <= 1.0)) {
    throw ConfigError("swap_demo_experiment: p_up_q2 must be in [0, 1]");
  }

  device::DeviceParams device = device::reference_device(2);
  Protocol pre = demo_protocol(p_up_q2, config, detector, false);
  Protocol post = demo_protocol(p_up_q2, config, detector, true);

  // The two phases have overlapping step indices, so give each its own
  // derived seed to keep their streams disjoint.
  std::uint64_t pre_seed = rng::Stream(master_seed, 1, 0).next_u64();
  std::uint64_t post_seed = rng::Stream(master_seed, 2, 0).next_u64();
  RunResult pre_result = run_protocol(pre, device, shots, pre_seed, workers);
  RunResult post_result = run_protocol(post, device, shots, post_seed, workers);

  RunResult merged;
  merged.shots = 2 * shots;
  auto fold = [&](const RunResult& phase, const char* prefix) {
    for (const auto& [key, count] : phase.outcome_counts) merged.outcome_counts[prefix + key] = count;
    for (const auto& [key, est] : phase.estimated_probabilities) {
      merged.estimated_probabilities[prefix + key] = est;
    }
    for (const auto& [key, est] : phase.marginal_probabilities) {
      merged.marginal_probabilities[prefix + key] = est;
    }
  };
  fold(pre_result, "pre:");
  fold(post_result, "post:");

  merged.metadata["code_version"] = std::string(kVersion);
  merged.metadata["master_seed"] = master_seed;
  merged.metadata["shots_per_phase"] = shots;
  merged.metadata["note"] = "probability estimates are per phase (pre/post each ran shots_per_phase shots)";
  merged.metadata["p_up_q2"] = p_up_q2;
  merged.metadata["device"] = config::device_to_json(device);
  merged.metadata["protocol_pre"] = config::protocol_to_json(pre);
  merged.metadata["protocol_post"] = config::protocol_to_json(post);
  merged.metadata["detector_noise_assumptions"] =
      nlohmann::ordered_json::array({{{"noise_sigma_at_1us", detector.noise_sigma_at_1us}}});
  return merged;
}

}  // namespace spinsim::harness
