#include "spinsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/units.hpp"
#include "spinsim/version.hpp"

namespace spinsim::config {
namespace {

using nlohmann::ordered_json;
using units::Dimension;

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
  throw ConfigError(ctx + ": " + msg);
}

void check_keys(const ordered_json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& ctx) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(ctx, "unknown key \"" + it.key() + "\"");
  }
}

const ordered_json* find(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &it.value();
}

void require_object(const ordered_json& v, const std::string& ctx) {
  if (!v.is_object()) fail(ctx, "expected an object");
}

double read_quantity(const ordered_json& v, Dimension dim, const std::string& ctx) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return units::parse_quantity(v.get<std::string>(), dim);
    } catch (const ConfigError& e) {
      fail(ctx, e.what());
    }
  }
  fail(ctx, "expected a number (base units) or a quantity string");
}

double quantity_or(const ordered_json& obj, const char* key, Dimension dim, double fallback,
                   const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  return v ? read_quantity(*v, dim, ctx + "." + key) : fallback;
}

double require_quantity(const ordered_json& obj, const char* key, Dimension dim, const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  if (!v) fail(ctx, std::string("missing required key \"") + key + "\"");
  return read_quantity(*v, dim, ctx + "." + key);
}

double number_or(const ordered_json& obj, const char* key, double fallback, const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(ctx + "." + key, "expected a number");
  return v->get<double>();
}

bool bool_or(const ordered_json& obj, const char* key, bool fallback, const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(ctx + "." + key, "expected true or false");
  return v->get<bool>();
}

std::int64_t integer_or(const ordered_json& obj, const char* key, std::int64_t fallback,
                        const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(ctx + "." + key, "expected an integer");
  return v->get<std::int64_t>();
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& ctx) {
  const ordered_json* v = find(obj, key);
  if (!v) fail(ctx, std::string("missing required key \"") + key + "\"");
  if (!v->is_string()) fail(ctx + "." + key, "expected a string");
  return v->get<std::string>();
}

int require_qubit(const ordered_json& obj, const std::string& ctx) {
  std::int64_t q = integer_or(obj, "qubit", -1, ctx);
  if (q < 0) fail(ctx, "missing or negative \"qubit\"");
  return static_cast<int>(q);
}

device::DotParams parse_dot(const ordered_json& obj, const std::string& ctx) {
  require_object(obj, ctx);
  check_keys(obj, {"g_factor", "b0_field", "temperature", "t1", "t2", "charging_energy", "level_spacing"},
             ctx);
  device::DotParams dot;
  dot.g_factor = number_or(obj, "g_factor", dot.g_factor, ctx);
  dot.b0_field = quantity_or(obj, "b0_field", Dimension::Field, dot.b0_field, ctx);
  dot.temperature = quantity_or(obj, "temperature", Dimension::Temperature, dot.temperature, ctx);
  dot.t1 = quantity_or(obj, "t1", Dimension::Time, dot.t1, ctx);
  dot.t2 = quantity_or(obj, "t2", Dimension::Time, dot.t2, ctx);
  dot.charging_energy = quantity_or(obj, "charging_energy", Dimension::Energy, dot.charging_energy, ctx);
  dot.level_spacing = quantity_or(obj, "level_spacing", Dimension::Energy, dot.level_spacing, ctx);
  return dot;
}

device::LeadParams parse_leads(const ordered_json& obj, const std::string& ctx) {
  require_object(obj, ctx);
  check_keys(obj, {"g_factor", "g_factor_effective", "filling_factor", "fermi_level_offset"}, ctx);
  device::LeadParams leads;
  leads.g_factor = number_or(obj, "g_factor", leads.g_factor, ctx);
  // Without an explicit exchange-enhanced value the leads are unenhanced.
  leads.g_factor_effective = number_or(obj, "g_factor_effective", leads.g_factor, ctx);
  leads.filling_factor = static_cast<int>(integer_or(obj, "filling_factor", leads.filling_factor, ctx));
  leads.fermi_level_offset =
      quantity_or(obj, "fermi_level_offset", Dimension::Energy, leads.fermi_level_offset, ctx);
  return leads;
}

device::DeviceParams parse_device(const ordered_json& obj, int fallback_qubits) {
  const std::string ctx = "device";
  require_object(obj, ctx);
  check_keys(obj, {"preset", "num_qubits", "qubits"}, ctx);

  if (const ordered_json* preset = find(obj, "preset")) {
    if (find(obj, "qubits")) fail(ctx, "\"preset\" and \"qubits\" are mutually exclusive");
    if (!preset->is_string() || preset->get<std::string>() != "reference") {
      fail(ctx, "the only preset is \"reference\"");
    }
    std::int64_t n = integer_or(obj, "num_qubits", fallback_qubits, ctx);
    if (n < 1 || n > 2) fail(ctx, "num_qubits must be 1 or 2");
    return device::reference_device(static_cast<int>(n));
  }

  const ordered_json* qubits = find(obj, "qubits");
  if (!qubits) fail(ctx, "needs either \"preset\" or \"qubits\"");
  if (find(obj, "num_qubits")) fail(ctx, "\"num_qubits\" only applies to a preset");
  if (!qubits->is_array() || qubits->empty() || qubits->size() > 2) {
    fail(ctx, "\"qubits\" must be an array of 1 or 2 entries");
  }

  device::DeviceParams params;
  for (std::size_t i = 0; i < qubits->size(); ++i) {
    const std::string qctx = ctx + ".qubits[" + std::to_string(i) + "]";
    const ordered_json& entry = (*qubits)[i];
    require_object(entry, qctx);
    check_keys(entry, {"dot", "leads"}, qctx);
    device::QubitParams qubit;
    if (const ordered_json* dot = find(entry, "dot")) qubit.dot = parse_dot(*dot, qctx + ".dot");
    if (const ordered_json* leads = find(entry, "leads")) qubit.leads = parse_leads(*leads, qctx + ".leads");
    params.qubits.push_back(qubit);
  }
  return params;
}

harness::InitStep parse_init_step(const ordered_json& obj, const std::string& ctx) {
  harness::InitStep step;
  step.qubit = require_qubit(obj, ctx);
  std::string method = require_string(obj, "method", ctx);
  if (method == "thermal") {
    check_keys(obj, {"type", "qubit", "method", "wait_time"}, ctx);
    init::ThermalEquilibration m;
    m.wait_time = require_quantity(obj, "wait_time", Dimension::Time, ctx);
    step.method = m;
  } else if (method == "polarized_leads") {
    check_keys(obj, {"type", "qubit", "method", "tunnel_time", "spin_flip_probability"}, ctx);
    init::TunnelFromPolarizedLeads m;
    m.tunnel_time = quantity_or(obj, "tunnel_time", Dimension::Time, m.tunnel_time, ctx);
    m.spin_flip_probability = number_or(obj, "spin_flip_probability", m.spin_flip_probability, ctx);
    step.method = m;
  } else if (method == "mixed_leads") {
    check_keys(obj, {"type", "qubit", "method", "lead_polarization", "tunnel_time", "spin_flip_probability"},
               ctx);
    init::TunnelFromPartiallyPolarizedLeads m;
    m.lead_polarization = number_or(obj, "lead_polarization", m.lead_polarization, ctx);
    m.tunnel_time = quantity_or(obj, "tunnel_time", Dimension::Time, m.tunnel_time, ctx);
    m.spin_flip_probability = number_or(obj, "spin_flip_probability", m.spin_flip_probability, ctx);
    step.method = m;
  } else {
    fail(ctx, "unknown init method \"" + method + "\" (thermal, polarized_leads, mixed_leads)");
  }
  return step;
}

harness::EsrStep parse_esr_step(const ordered_json& obj, const device::DeviceParams& device,
                                const std::string& ctx) {
  check_keys(obj, {"type", "qubit", "b1", "duration", "phase", "carrier", "resonant", "integrator"}, ctx);
  harness::EsrStep step;
  step.qubit = require_qubit(obj, ctx);
  step.pulse.b1_amplitude = require_quantity(obj, "b1", Dimension::Field, ctx);
  step.pulse.duration = require_quantity(obj, "duration", Dimension::Time, ctx);
  step.pulse.phase = number_or(obj, "phase", 0.0, ctx);

  bool resonant = bool_or(obj, "resonant", false, ctx);
  const ordered_json* carrier = find(obj, "carrier");
  if (resonant == (carrier != nullptr)) {
    fail(ctx, "give exactly one of \"carrier\" or \"resonant\": true");
  }
  if (resonant) {
    if (step.qubit < 0 || step.qubit >= static_cast<int>(device.qubits.size())) {
      fail(ctx, "qubit " + std::to_string(step.qubit) + " not in the device");
    }
    const device::DotParams& dot = device.qubit(step.qubit).dot;
    step.pulse.carrier_frequency = device::larmor_frequency(dot.g_factor, dot.b0_field);
  } else {
    step.pulse.carrier_frequency = read_quantity(*carrier, Dimension::Frequency, ctx + ".carrier");
  }

  if (const ordered_json* integ = find(obj, "integrator")) {
    const std::string ictx = ctx + ".integrator";
    require_object(*integ, ictx);
    check_keys(*integ, {"step", "frame", "rwa"}, ictx);
    esr::BlochSettings settings;
    settings.integrator_step = require_quantity(*integ, "step", Dimension::Time, ictx);
    std::string frame = find(*integ, "frame") ? require_string(*integ, "frame", ictx) : "rotating";
    if (frame == "rotating") {
      settings.frame = esr::Frame::Rotating;
    } else if (frame == "lab") {
      settings.frame = esr::Frame::Lab;
    } else {
      fail(ictx, "frame must be \"rotating\" or \"lab\"");
    }
    settings.rwa_enabled = bool_or(*integ, "rwa", true, ictx);
    step.settings = settings;
  }
  return step;
}

harness::ExchangeStep parse_exchange_step(const ordered_json& obj, const std::string& ctx) {
  check_keys(obj, {"type", "j", "j_over_h", "duration", "gate"}, ctx);
  const ordered_json* j = find(obj, "j");
  const ordered_json* j_over_h = find(obj, "j_over_h");
  if ((j != nullptr) == (j_over_h != nullptr)) {
    fail(ctx, "give exactly one of \"j\" (energy) or \"j_over_h\" (frequency)");
  }
  double j_energy = j ? read_quantity(*j, Dimension::Energy, ctx + ".j")
                      : read_quantity(*j_over_h, Dimension::Frequency, ctx + ".j_over_h") * constants::h;

  harness::ExchangeStep step;
  const ordered_json* duration = find(obj, "duration");
  const ordered_json* gate = find(obj, "gate");
  if ((duration != nullptr) == (gate != nullptr)) {
    fail(ctx, "give exactly one of \"duration\" or \"gate\"");
  }
  if (gate) {
    if (!gate->is_string()) fail(ctx + ".gate", "expected a string");
    std::string name = gate->get<std::string>();
    if (name == "swap") {
      step.pulse = exchange::ExchangePulse::swap(j_energy);
    } else if (name == "sqrt_swap") {
      step.pulse = exchange::ExchangePulse::sqrt_swap(j_energy);
    } else {
      fail(ctx, "gate must be \"swap\" or \"sqrt_swap\"");
    }
  } else {
    step.pulse.j_energy = j_energy;
    step.pulse.duration = read_quantity(*duration, Dimension::Time, ctx + ".duration");
  }
  return step;
}

readout::ReadoutConfig parse_readout(const ordered_json& v, const std::string& ctx) {
  if (v.is_string()) {
    std::string preset = v.get<std::string>();
    if (preset == "ideal") return readout::ReadoutConfig::ideal();
    if (preset == "reference_rate_selective") return readout::ReadoutConfig::reference_rate_selective();
    fail(ctx, "unknown readout preset \"" + preset + "\"");
  }
  require_object(v, ctx);
  check_keys(v, {"scheme", "gamma_up_out", "gamma_down_out", "gamma_in", "measurement_window",
                 "singlet_triplet_splitting"},
             ctx);
  readout::ReadoutConfig config;
  if (const ordered_json* scheme = find(v, "scheme")) {
    if (!scheme->is_string()) fail(ctx + ".scheme", "expected a string");
    try {
      config.scheme = readout::scheme_from_name(scheme->get<std::string>());
    } catch (const ConfigError& e) {
      fail(ctx, e.what());
    }
  }
  config.gamma_up_out = quantity_or(v, "gamma_up_out", Dimension::Frequency, config.gamma_up_out, ctx);
  config.gamma_down_out = quantity_or(v, "gamma_down_out", Dimension::Frequency, config.gamma_down_out, ctx);
  config.gamma_in = quantity_or(v, "gamma_in", Dimension::Frequency, config.gamma_in, ctx);
  config.measurement_window =
      quantity_or(v, "measurement_window", Dimension::Time, config.measurement_window, ctx);
  config.singlet_triplet_splitting = quantity_or(v, "singlet_triplet_splitting", Dimension::Energy,
                                                 config.singlet_triplet_splitting, ctx);
  return config;
}

readout::DetectorModel parse_detector(const ordered_json& v, const std::string& ctx) {
  require_object(v, ctx);
  check_keys(v, {"charge_levels", "noise_sigma_at_1us", "threshold"}, ctx);
  readout::DetectorModel detector;
  if (const ordered_json* levels = find(v, "charge_levels")) {
    if (!levels->is_array() || levels->size() != 3) {
      fail(ctx + ".charge_levels", "expected an array of 3 numbers");
    }
    for (int i = 0; i < 3; ++i) {
      if (!(*levels)[i].is_number()) fail(ctx + ".charge_levels", "expected an array of 3 numbers");
      detector.charge_levels[i] = (*levels)[i].get<double>();
    }
  }
  detector.noise_sigma_at_1us = number_or(v, "noise_sigma_at_1us", detector.noise_sigma_at_1us, ctx);
  detector.threshold = number_or(v, "threshold", detector.threshold, ctx);
  return detector;
}

harness::MeasureStep parse_measure_step(const ordered_json& obj, const std::string& ctx) {
  check_keys(obj, {"type", "qubit", "readout", "detector"}, ctx);
  harness::MeasureStep step;
  step.qubit = require_qubit(obj, ctx);
  if (const ordered_json* r = find(obj, "readout")) step.config = parse_readout(*r, ctx + ".readout");
  if (const ordered_json* d = find(obj, "detector")) step.detector = parse_detector(*d, ctx + ".detector");
  return step;
}

harness::Protocol parse_protocol(const ordered_json& steps, const device::DeviceParams& device) {
  harness::Protocol protocol;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string ctx = "protocol[" + std::to_string(i) + "]";
    const ordered_json& obj = steps[i];
    require_object(obj, ctx);
    std::string type = require_string(obj, "type", ctx);
    if (type == "init") {
      protocol.steps.emplace_back(parse_init_step(obj, ctx));
    } else if (type == "wait") {
      check_keys(obj, {"type", "duration"}, ctx);
      harness::WaitStep step;
      step.duration = require_quantity(obj, "duration", Dimension::Time, ctx);
      protocol.steps.emplace_back(step);
    } else if (type == "esr") {
      protocol.steps.emplace_back(parse_esr_step(obj, device, ctx));
    } else if (type == "exchange") {
      protocol.steps.emplace_back(parse_exchange_step(obj, ctx));
    } else if (type == "measure") {
      protocol.steps.emplace_back(parse_measure_step(obj, ctx));
    } else {
      fail(ctx, "unknown step type \"" + type + "\" (init, wait, esr, exchange, measure)");
    }
  }
  return protocol;
}

// Peek at the step list so an omitted device block can default to a
// reference device of the right size.
int scan_num_qubits(const ordered_json& steps) {
  int highest = 0;
  for (const ordered_json& obj : steps) {
    if (!obj.is_object()) continue;
    const ordered_json* type = find(obj, "type");
    if (type && type->is_string() && type->get<std::string>() == "exchange") highest = std::max(highest, 1);
    const ordered_json* qubit = find(obj, "qubit");
    if (qubit && qubit->is_number_integer()) {
      highest = std::max(highest, static_cast<int>(qubit->get<std::int64_t>()));
    }
  }
  return highest + 1;
}

ordered_json dot_to_json(const device::DotParams& dot) {
  return {{"g_factor", dot.g_factor},
          {"b0_field", dot.b0_field},
          {"temperature", dot.temperature},
          {"t1", dot.t1},
          {"t2", dot.t2},
          {"charging_energy", dot.charging_energy},
          {"level_spacing", dot.level_spacing}};
}

ordered_json leads_to_json(const device::LeadParams& leads) {
  return {{"g_factor", leads.g_factor},
          {"g_factor_effective", leads.g_factor_effective},
          {"filling_factor", leads.filling_factor},
          {"fermi_level_offset", leads.fermi_level_offset}};
}

ordered_json readout_to_json(const readout::ReadoutConfig& config) {
  return {{"scheme", std::string(readout::scheme_name(config.scheme))},
          {"gamma_up_out", config.gamma_up_out},
          {"gamma_down_out", config.gamma_down_out},
          {"gamma_in", config.gamma_in},
          {"measurement_window", config.measurement_window},
          {"singlet_triplet_splitting", config.singlet_triplet_splitting}};
}

ordered_json detector_to_json(const readout::DetectorModel& detector) {
  return {{"charge_levels", detector.charge_levels},
          {"noise_sigma_at_1us", detector.noise_sigma_at_1us},
          {"threshold", detector.threshold}};
}

}  // namespace

Experiment parse_experiment(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("experiment: top level must be an object");
  check_keys(doc, {"schema_version", "device", "protocol", "run", "sweep"}, "experiment");

  const ordered_json* schema = find(doc, "schema_version");
  if (!schema || !schema->is_number_integer()) {
    throw ConfigError("experiment: missing integer \"schema_version\"");
  }
  if (schema->get<std::int64_t>() != kSchemaVersion) {
    throw ConfigError("experiment: unsupported schema_version " + schema->dump() + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }

  const ordered_json* steps = find(doc, "protocol");
  if (!steps || !steps->is_array()) throw ConfigError("experiment: missing \"protocol\" array");

  Experiment experiment;
  if (const ordered_json* dev = find(doc, "device")) {
    experiment.device = parse_device(*dev, scan_num_qubits(*steps));
  } else {
    experiment.device = device::reference_device(scan_num_qubits(*steps));
  }
  experiment.protocol = parse_protocol(*steps, experiment.device);

  if (const ordered_json* run = find(doc, "run")) {
    const std::string ctx = "run";
    require_object(*run, ctx);
    check_keys(*run, {"shots", "seed", "workers"}, ctx);
    std::int64_t shots = integer_or(*run, "shots", static_cast<std::int64_t>(experiment.shots), ctx);
    if (shots < 1) fail(ctx, "shots must be >= 1");
    experiment.shots = static_cast<std::uint64_t>(shots);
    if (const ordered_json* seed = find(*run, "seed")) {
      if (!seed->is_number_integer() && !seed->is_number_unsigned()) fail(ctx + ".seed", "expected an integer");
      experiment.seed = seed->get<std::uint64_t>();
      experiment.seed_given = true;
    }
    std::int64_t workers = integer_or(*run, "workers", experiment.workers, ctx);
    if (workers < 1 || workers > 256) fail(ctx, "workers must be in [1, 256]");
    experiment.workers = static_cast<int>(workers);
  }

  experiment.protocol.validate(experiment.device);
  experiment.warnings = experiment.device.regime_warnings();
  return experiment;
}

Experiment parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file \"" + path + "\": " + e.what());
  }
  return parse_experiment(doc);
}

harness::RunResult run_experiment(const Experiment& experiment, std::vector<harness::ShotRecord>* shot_log) {
  return harness::run_protocol(experiment.protocol, experiment.device, experiment.shots, experiment.seed,
                               experiment.workers, shot_log);
}

nlohmann::ordered_json device_to_json(const device::DeviceParams& device) {
  ordered_json qubits = ordered_json::array();
  for (const device::QubitParams& qubit : device.qubits) {
    qubits.push_back({{"dot", dot_to_json(qubit.dot)}, {"leads", leads_to_json(qubit.leads)}});
  }
  return {{"qubits", std::move(qubits)}};
}

nlohmann::ordered_json protocol_to_json(const harness::Protocol& protocol) {
  ordered_json out = ordered_json::array();
  for (const harness::ProtocolStep& step : protocol.steps) {
    if (const auto* s = std::get_if<harness::InitStep>(&step)) {
      ordered_json entry{{"type", "init"}, {"qubit", s->qubit}};
      if (const auto* m = std::get_if<init::ThermalEquilibration>(&s->method)) {
        entry["method"] = "thermal";
        entry["wait_time"] = m->wait_time;
      } else if (const auto* m = std::get_if<init::TunnelFromPolarizedLeads>(&s->method)) {
        entry["method"] = "polarized_leads";
        entry["tunnel_time"] = m->tunnel_time;
        entry["spin_flip_probability"] = m->spin_flip_probability;
      } else if (const auto* m = std::get_if<init::TunnelFromPartiallyPolarizedLeads>(&s->method)) {
        entry["method"] = "mixed_leads";
        entry["lead_polarization"] = m->lead_polarization;
        entry["tunnel_time"] = m->tunnel_time;
        entry["spin_flip_probability"] = m->spin_flip_probability;
      }
      out.push_back(std::move(entry));
    } else if (const auto* s = std::get_if<harness::WaitStep>(&step)) {
      out.push_back({{"type", "wait"}, {"duration", s->duration}});
    } else if (const auto* s = std::get_if<harness::EsrStep>(&step)) {
      ordered_json entry{{"type", "esr"},
                         {"qubit", s->qubit},
                         {"carrier", s->pulse.carrier_frequency},
                         {"b1", s->pulse.b1_amplitude},
                         {"duration", s->pulse.duration},
                         {"phase", s->pulse.phase}};
      if (s->settings) {
        entry["integrator"] = {{"step", s->settings->integrator_step},
                               {"frame", s->settings->frame == esr::Frame::Lab ? "lab" : "rotating"},
                               {"rwa", s->settings->rwa_enabled}};
      }
      out.push_back(std::move(entry));
    } else if (const auto* s = std::get_if<harness::ExchangeStep>(&step)) {
      out.push_back({{"type", "exchange"}, {"j", s->pulse.j_energy}, {"duration", s->pulse.duration}});
    } else if (const auto* s = std::get_if<harness::MeasureStep>(&step)) {
      out.push_back({{"type", "measure"},
                     {"qubit", s->qubit},
                     {"readout", readout_to_json(s->config)},
                     {"detector", detector_to_json(s->detector)}});
    }
  }
  return out;
}

std::optional<SweepSpec> parse_sweep(const nlohmann::ordered_json& doc) {
  const ordered_json* obj = doc.is_object() ? find(doc, "sweep") : nullptr;
  if (!obj) return std::nullopt;
  const std::string ctx = "sweep";
  require_object(*obj, ctx);
  check_keys(*obj, {"path", "values", "outcome", "shots"}, ctx);

  SweepSpec spec;
  spec.path = require_string(*obj, "path", ctx);
  if (spec.path.empty() || spec.path[0] != '/') fail(ctx, "path must be a JSON pointer starting with \"/\"");
  if (spec.path.rfind("/sweep", 0) == 0) fail(ctx, "path cannot point into the sweep block");

  const ordered_json* values = find(*obj, "values");
  if (!values || !values->is_array() || values->empty()) {
    fail(ctx, "missing non-empty \"values\" array");
  }
  for (const ordered_json& v : *values) {
    if (!v.is_number()) fail(ctx + ".values", "entries must be numbers in base units");
    spec.values.push_back(v.get<double>());
  }

  if (const ordered_json* outcome = find(*obj, "outcome")) {
    if (!outcome->is_string()) fail(ctx + ".outcome", "expected a string like \"q0=down\"");
    spec.outcome = outcome->get<std::string>();
  } else {
    const ordered_json* steps = find(doc, "protocol");
    if (steps && steps->is_array()) {
      for (const ordered_json& s : *steps) {
        if (s.is_object() && find(s, "type") && s["type"] == "measure") {
          spec.outcome = "q" + std::to_string(integer_or(s, "qubit", 0, ctx)) + "=down";
          break;
        }
      }
    }
    if (spec.outcome.empty()) fail(ctx, "no measurement step to track; set \"outcome\"");
  }

  std::int64_t shots = integer_or(*obj, "shots", 0, ctx);
  if (shots < 0) fail(ctx, "shots must be >= 1");
  spec.shots = static_cast<std::uint64_t>(shots);
  return spec;
}

std::vector<SweepPoint> run_sweep(const nlohmann::ordered_json& doc, const SweepSpec& spec) {
  ordered_json::json_pointer pointer;
  try {
    pointer = ordered_json::json_pointer(spec.path);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("sweep: bad path \"" + spec.path + "\": " + e.what());
  }

  std::vector<SweepPoint> points;
  points.reserve(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    ordered_json point_doc = doc;
    point_doc.erase("sweep");
    if (!point_doc.contains(pointer)) {
      throw ConfigError("sweep: path \"" + spec.path + "\" does not exist in the document");
    }
    point_doc[pointer] = spec.values[i];

    Experiment experiment = parse_experiment(point_doc);
    if (spec.shots > 0) experiment.shots = spec.shots;
    // Decorrelate the points while keeping the whole scan a pure function
    // of the experiment seed.
    experiment.seed = rng::Stream(experiment.seed, i, 0x53574545u).next_u64();

    SweepPoint point;
    point.value = spec.values[i];
    point.result = run_experiment(experiment);
    points.push_back(std::move(point));
  }
  return points;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points) {
  std::string out = "parameter,value,p_estimate,ci_low,ci_high,shots\n";
  char buf[256];
  for (const SweepPoint& point : points) {
    harness::ProbabilityEstimate estimate{};
    auto it = point.result.marginal_probabilities.find(spec.outcome);
    if (it != point.result.marginal_probabilities.end()) {
      estimate = it->second;
    } else {
      estimate = harness::wilson_interval(0, point.result.shots);
    }
    std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,%.9g,%.9g,%llu\n", spec.path.c_str(), point.value,
                  estimate.p, estimate.ci_low, estimate.ci_high,
                  static_cast<unsigned long long>(point.result.shots));
    out += buf;
  }
  return out;
}

}  // namespace spinsim::config
