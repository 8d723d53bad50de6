#include "spinsim/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "spinsim/config.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/version.hpp"

namespace spinsim::harness {
namespace {

std::string step_error(int index, const std::string& msg) {
  return "step " + std::to_string(index) + ": " + msg;
}

enum class QubitPhase { Uninitialized, Live, Measured };

/// The joint state of the not-yet-measured qubits, factors ordered by
/// initialization.
struct LiveSet {
  std::optional<spin::SpinState> state;
  std::vector<int> order;

  int position_of(int qubit) const {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] == qubit) return static_cast<int>(i);
    }
    return -1;
  }

  void drop(int qubit) {
    int pos = position_of(qubit);
    if (state->num_spins() == 1) {
      state.reset();
    } else {
      state = state->partial_trace_keep(1 - pos);
    }
    order.erase(order.begin() + pos);
  }
};

// Everything except Measure is a deterministic map on the live state.
void apply_deterministic(LiveSet& live, const ProtocolStep& step, const device::DeviceParams& device,
                         int step_index) {
  if (const auto* init_step = std::get_if<InitStep>(&step)) {
    spin::SpinState fresh = init::apply(init_step->method, device.qubit(init_step->qubit)).state;
    if (!live.state) {
      live.state = std::move(fresh);
    } else {
      live.state = spin::SpinState::tensor(*live.state, fresh);
    }
    live.order.push_back(init_step->qubit);
    return;
  }

  if (const auto* wait_step = std::get_if<WaitStep>(&step)) {
    for (std::size_t pos = 0; pos < live.order.size(); ++pos) {
      const device::DotParams& dot = device.qubit(live.order[pos]).dot;
      auto [a, c] = init::relax_affine(dot, wait_step->duration);
      live.state = spin::apply_affine_bloch_map(*live.state, static_cast<int>(pos), a, c);
    }
    return;
  }

  if (const auto* esr_step = std::get_if<EsrStep>(&step)) {
    const device::DotParams& dot = device.qubit(esr_step->qubit).dot;
    esr::BlochSettings settings =
        esr_step->settings ? *esr_step->settings : esr::BlochSettings::recommended(esr_step->pulse, dot);
    int pos = live.position_of(esr_step->qubit);
    if (live.state->num_spins() == 1) {
      live.state = esr::evolve_bloch(*live.state, esr_step->pulse, dot, settings);
      return;
    }
    // The damped Bloch flow is affine in the Bloch vector, so probing it on
    // a basis recovers the exact map to apply to one spin of the pair.
    auto evolve_vector = [&](double x, double y, double z) -> Eigen::Vector3d {
      spin::SpinState probe = spin::SpinState::from_bloch(spin::BlochVector{x, y, z});
      spin::BlochVector out = esr::evolve_bloch(probe, esr_step->pulse, dot, settings).to_bloch();
      return {out.mx, out.my, out.mz};
    };
    Eigen::Vector3d c = evolve_vector(0.0, 0.0, 0.0);
    Eigen::Matrix3d a;
    a.col(0) = evolve_vector(1.0, 0.0, 0.0) - c;
    a.col(1) = evolve_vector(0.0, 1.0, 0.0) - c;
    a.col(2) = evolve_vector(0.0, 0.0, 1.0) - c;
    live.state = spin::apply_affine_bloch_map(*live.state, pos, a, c);
    return;
  }

  if (const auto* exchange_step = std::get_if<ExchangeStep>(&step)) {
    // Factor order may be (q1, q0) if q1 was initialized first; the
    // Hamiltonian takes the g-factors in factor order.
    const device::DotParams& dot_a = device.qubit(live.order[0]).dot;
    const device::DotParams& dot_b = device.qubit(live.order[1]).dot;
    live.state = exchange::exchange_evolve(*live.state, exchange_step->pulse, dot_a.g_factor, dot_b.g_factor,
                                           dot_a.b0_field);
    return;
  }

  throw ConfigError(step_error(step_index, "measurement reached the deterministic executor"));
}

struct Tally {
  std::map<std::string, std::uint64_t> outcomes;
  std::map<std::string, std::uint64_t> marginals;

  void merge(const Tally& other) {
    for (const auto& [k, v] : other.outcomes) outcomes[k] += v;
    for (const auto& [k, v] : other.marginals) marginals[k] += v;
  }
};

}  // namespace

int Protocol::num_qubits() const {
  int highest = -1;
  for (const ProtocolStep& step : steps) {
    if (const auto* s = std::get_if<InitStep>(&step)) highest = std::max(highest, s->qubit);
    if (const auto* s = std::get_if<EsrStep>(&step)) highest = std::max(highest, s->qubit);
    if (const auto* s = std::get_if<MeasureStep>(&step)) highest = std::max(highest, s->qubit);
    if (std::get_if<ExchangeStep>(&step)) highest = std::max(highest, 1);
  }
  return highest + 1;
}

void Protocol::validate(const device::DeviceParams& device) const {
  device.validate();
  std::vector<QubitPhase> phase(device.qubits.size(), QubitPhase::Uninitialized);

  auto check_index = [&](int index, int step_index) {
    if (index < 0 || index >= static_cast<int>(device.qubits.size())) {
      throw ConfigError(step_error(step_index, "qubit " + std::to_string(index) + " not in the device"));
    }
  };
  auto check_live = [&](int index, int step_index, const char* what) {
    check_index(index, step_index);
    if (phase[index] == QubitPhase::Uninitialized) {
      throw ConfigError(step_error(step_index, std::string(what) + " before qubit " +
                                                   std::to_string(index) + " was initialized"));
    }
    if (phase[index] == QubitPhase::Measured) {
      throw ConfigError(step_error(step_index, std::string(what) + " after qubit " +
                                                   std::to_string(index) + " was measured"));
    }
  };

  for (std::size_t i = 0; i < steps.size(); ++i) {
    int index = static_cast<int>(i);
    if (const auto* s = std::get_if<InitStep>(&steps[i])) {
      check_index(s->qubit, index);
      if (phase[s->qubit] != QubitPhase::Uninitialized) {
        throw ConfigError(step_error(index, "qubit " + std::to_string(s->qubit) + " initialized twice"));
      }
      init::validate(s->method);
      phase[s->qubit] = QubitPhase::Live;
    } else if (const auto* s = std::get_if<WaitStep>(&steps[i])) {
      if (s->duration < 0.0) throw ConfigError(step_error(index, "negative wait duration"));
    } else if (const auto* s = std::get_if<EsrStep>(&steps[i])) {
      check_live(s->qubit, index, "microwave burst");
      s->pulse.validate();
      if (s->settings) s->settings->validate_for(s->pulse, device.qubit(s->qubit).dot);
    } else if (const auto* s = std::get_if<ExchangeStep>(&steps[i])) {
      if (device.qubits.size() < 2) {
        throw ConfigError(step_error(index, "exchange pulse needs a two-qubit device"));
      }
      check_live(0, index, "exchange pulse");
      check_live(1, index, "exchange pulse");
      if (device.qubit(0).dot.b0_field != device.qubit(1).dot.b0_field) {
        throw ConfigError(step_error(index, "exchange pulse needs both dots at the same static field"));
      }
      s->pulse.validate();
    } else if (const auto* s = std::get_if<MeasureStep>(&steps[i])) {
      check_live(s->qubit, index, "measurement");
      s->config.validate();
      s->detector.validate();
      if (s->config.scheme != readout::Scheme::Off) phase[s->qubit] = QubitPhase::Measured;
    }
  }
}

RunResult run_protocol(const Protocol& protocol, const device::DeviceParams& device, std::uint64_t shots,
                       std::uint64_t master_seed, int workers, std::vector<ShotRecord>* shot_log) {
  protocol.validate(device);
  if (shots < 1) throw ConfigError("run_protocol: shots must be >= 1");
  if (workers < 1) throw ConfigError("run_protocol: workers must be >= 1");

  // Step indices that consume randomness, and each qubit's final measurement
  // (the one that defines its marginal statistics).
  std::vector<int> measure_steps;
  std::map<int, int> final_measure_of_qubit;
  for (std::size_t i = 0; i < protocol.steps.size(); ++i) {
    if (const auto* m = std::get_if<MeasureStep>(&protocol.steps[i])) {
      measure_steps.push_back(static_cast<int>(i));
      final_measure_of_qubit[m->qubit] = static_cast<int>(i);
    }
  }
  std::size_t records_per_shot = measure_steps.size();
  if (shot_log) shot_log->assign(shots * records_per_shot, ShotRecord{});

  // Everything before the first measurement is shot-independent.
  std::size_t first_random = protocol.steps.size();
  for (std::size_t i = 0; i < protocol.steps.size(); ++i) {
    if (std::holds_alternative<MeasureStep>(protocol.steps[i])) {
      first_random = i;
      break;
    }
  }
  LiveSet prefix;
  for (std::size_t i = 0; i < first_random; ++i) {
    apply_deterministic(prefix, protocol.steps[i], device, static_cast<int>(i));
  }

  auto run_shot = [&](std::uint64_t shot, Tally& tally) {
    LiveSet live = prefix;
    std::string outcome_key;
    std::size_t record_slot = 0;

    for (std::size_t i = first_random; i < protocol.steps.size(); ++i) {
      const auto* measure = std::get_if<MeasureStep>(&protocol.steps[i]);
      if (!measure) {
        apply_deterministic(live, protocol.steps[i], device, static_cast<int>(i));
        continue;
      }

      rng::Stream stream(master_seed, shot, static_cast<std::uint64_t>(i));
      int pos = live.position_of(measure->qubit);
      double p_up = live.state->marginal_prob_up(pos);
      readout::ReadoutRecord record = readout::simulate_shot(p_up, measure->config, measure->detector, stream);

      if (measure->config.scheme != readout::Scheme::Off) {
        // Back-action follows the physical spin, not the declaration: the
        // partner is conditioned on the spin that actually tunneled (or not).
        if (live.state->num_spins() == 2) {
          live.state = spin::project_spin(*live.state, pos, record.true_spin == readout::Spin::Up);
        }
        live.drop(measure->qubit);
      }

      std::string declared(readout::to_string(record.declared));
      std::string label = "q" + std::to_string(measure->qubit) + "=" + declared;
      if (!outcome_key.empty()) outcome_key += ",";
      outcome_key += label;
      if (final_measure_of_qubit.at(measure->qubit) == static_cast<int>(i)) ++tally.marginals[label];

      if (shot_log) {
        (*shot_log)[shot * records_per_shot + record_slot] =
            ShotRecord{shot, static_cast<int>(i), measure->qubit, std::move(record)};
      }
      ++record_slot;
    }

    ++tally.outcomes[outcome_key.empty() ? "none" : outcome_key];
  };

  auto run_range = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
    for (std::uint64_t s = begin; s < end; ++s) {
      try {
        run_shot(s, tally);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw NumericError("shot " + std::to_string(s) + ": " + e.what());
      }
    }
  };

  Tally total;
  int used_workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), shots));
  if (used_workers <= 1) {
    run_range(0, shots, total);
  } else {
    std::vector<Tally> partial(used_workers);
    std::vector<std::thread> pool;
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t chunk = (shots + used_workers - 1) / used_workers;
    for (int w = 0; w < used_workers; ++w) {
      std::uint64_t begin = w * chunk;
      std::uint64_t end = std::min(shots, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end, partial[w]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    for (const Tally& t : partial) total.merge(t);
  }

  RunResult result;
  result.shots = shots;
  result.outcome_counts = total.outcomes;
  for (const auto& [key, count] : total.outcomes) {
    result.estimated_probabilities[key] = wilson_interval(count, shots);
  }
  for (const auto& [key, count] : total.marginals) {
    result.marginal_probabilities[key] = wilson_interval(count, shots);
  }

  result.metadata["code_version"] = std::string(kVersion);
  result.metadata["master_seed"] = master_seed;
  result.metadata["shots"] = shots;
  result.metadata["device"] = config::device_to_json(device);
  result.metadata["protocol"] = config::protocol_to_json(protocol);
  nlohmann::ordered_json assumptions = nlohmann::ordered_json::array();
  for (int i : measure_steps) {
    const auto& m = std::get<MeasureStep>(protocol.steps[i]);
    assumptions.push_back({{"step", i}, {"noise_sigma_at_1us", m.detector.noise_sigma_at_1us}});
  }
  result.metadata["detector_noise_assumptions"] = std::move(assumptions);
  return result;
}

double error_per_gate_budget(double gate_duration, double t2) {
  if (gate_duration < 0.0) throw ConfigError("error_per_gate_budget: negative gate duration");
  if (!(t2 > 0.0)) throw ConfigError("error_per_gate_budget: T2 must be > 0");
  return std::isfinite(t2) ? gate_duration / t2 : 0.0;
}

std::string shot_log_csv(const std::vector<ShotRecord>& log) {
  std::string out = "shot,true_spin,tunnel_out_time,signal,declared\n";
  char buf[96];
  for (const ShotRecord& entry : log) {
    const readout::ReadoutRecord& r = entry.record;
    out += std::to_string(entry.shot);
    out += ",";
    out += readout::to_string(r.true_spin);
    out += ",";
    if (r.tunnel_out_time) {
      std::snprintf(buf, sizeof(buf), "%.9g", *r.tunnel_out_time);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.9g,", r.window_avg_signal);
    out += buf;
    out += readout::to_string(r.declared);
    out += "\n";
  }
  return out;
}

}  // namespace spinsim::harness
