#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinsim/config.hpp"
#include "spinsim/constants.hpp"
#include "spinsim/device.hpp"
#include "spinsim/errors.hpp"
#include "spinsim/esr.hpp"
#include "spinsim/exchange.hpp"
#include "spinsim/harness.hpp"
#include "spinsim/microwave.hpp"
#include "spinsim/readout.hpp"
#include "spinsim/run_result.hpp"
#include "spinsim/swap_demo.hpp"
#include "spinsim/units.hpp"
#include "spinsim/version.hpp"

namespace {

using nlohmann::ordered_json;
using spinsim::ConfigError;
using spinsim::NumericError;
using spinsim::units::Dimension;

double qty(const std::string& text, Dimension dim) { return spinsim::units::parse_quantity(text, dim); }

std::string fmt(double value, Dimension dim) { return spinsim::units::format_quantity(value, dim); }

// Relative --out paths land in SPINSIM_OUTPUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("SPINSIM_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fputs(content.c_str(), stdout);
    if (!content.empty() && content.back() != '\n') std::fputc('\n', stdout);
    return;
  }
  std::string full = resolve_out(path);
  std::ofstream out(full);
  if (!out) throw ConfigError("cannot write \"" + full + "\"");
  out << content;
}

ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file \"" + path + "\": " + e.what());
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// Every calculator prints either a human summary or, with --json, the raw
// values in base SI units.
struct CalcOutput {
  bool json = false;
  ordered_json payload = ordered_json::object();
  std::string text;

  void line(const std::string& s) {
    text += s;
    text += "\n";
  }
  void value(const char* key, double v) { payload[key] = v; }
  void value(const char* key, bool v) { payload[key] = v; }
  void value(const char* key, const std::string& v) { payload[key] = v; }
  void emit() const { std::fputs(json ? (payload.dump(2) + "\n").c_str() : text.c_str(), stdout); }
};

void add_json_flag(CLI::App* cmd, CalcOutput& out) {
  cmd->add_flag("--json", out.json, "print machine-readable JSON instead of text");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinsim: electron-spin-qubit protocol simulator and engineering calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(spinsim::kVersion));

  // Shared state filled by option parsing; each subcommand reads what it
  // declared in its callback.
  std::string config_path;
  std::string out_path;
  std::string shot_log_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t shots = 0;
  int workers = 0;
  bool ci_mode = false;

  auto* run = app.add_subcommand("run", "run an experiment file and print the aggregated result as JSON");
  run->add_option("config", config_path, "experiment JSON file")->required();
  run->add_option("--seed", seed, "override the run seed")->each([&](const std::string&) { seed_set = true; });
  run->add_option("--shots", shots, "override the shot count");
  run->add_option("--workers", workers, "override the worker thread count");
  run->add_option("--out", out_path, "write the result here instead of stdout");
  run->add_option("--shot-log", shot_log_path, "also write every measurement record as CSV");
  run->add_flag("--ci", ci_mode, "refuse to run without an explicit seed");
  run->callback([&] {
    spinsim::config::Experiment experiment = spinsim::config::parse_experiment_file(config_path);
    if (seed_set) {
      experiment.seed = seed;
      experiment.seed_given = true;
    }
    if (ci_mode && !experiment.seed_given) {
      throw ConfigError("--ci needs an explicit seed (run.seed in the file or --seed)");
    }
    if (shots > 0) experiment.shots = shots;
    if (workers > 0) experiment.workers = workers;
    print_warnings(experiment.warnings);

    std::vector<spinsim::harness::ShotRecord> log;
    spinsim::harness::RunResult result =
        spinsim::config::run_experiment(experiment, shot_log_path.empty() ? nullptr : &log);
    write_output(out_path, result.to_json().dump(2) + "\n");
    if (!shot_log_path.empty()) write_output(shot_log_path, spinsim::harness::shot_log_csv(log));
  });

  auto* sweep = app.add_subcommand("sweep", "run the experiment's sweep block and print a CSV table");
  sweep->add_option("config", config_path, "experiment JSON file with a sweep block")->required();
  sweep->add_option("--out", out_path, "write the CSV here instead of stdout");
  sweep->callback([&] {
    ordered_json doc = load_json(config_path);
    auto spec = spinsim::config::parse_sweep(doc);
    if (!spec) throw ConfigError("config file \"" + config_path + "\" has no sweep block");
    print_warnings(spinsim::config::parse_experiment(doc).warnings);
    std::vector<spinsim::config::SweepPoint> points = spinsim::config::run_sweep(doc, *spec);
    write_output(out_path, spinsim::config::sweep_csv(*spec, points));
  });

  auto* validate = app.add_subcommand("validate", "parse and check an experiment file without running it");
  validate->add_option("config", config_path, "experiment JSON file")->required();
  validate->callback([&] {
    ordered_json doc = load_json(config_path);
    spinsim::config::Experiment experiment = spinsim::config::parse_experiment(doc);
    spinsim::config::parse_sweep(doc);
    print_warnings(experiment.warnings);
    std::printf("ok: %zu steps on %zu qubit(s), %llu shots\n", experiment.protocol.steps.size(),
                experiment.device.qubits.size(), static_cast<unsigned long long>(experiment.shots));
  });

  double demo_p_up = 0.25;
  std::string demo_readout = "ideal";
  double demo_sigma = 0.0;
  auto* demo = app.add_subcommand("demo-swap", "two-qubit state transfer: readout before and after a swap");
  demo->add_option("--p-up", demo_p_up, "preparation Pr[up] of the second qubit")->check(CLI::Range(0.0, 1.0));
  demo->add_option("--shots", shots, "shots per phase (default 20000)");
  demo->add_option("--seed", seed, "master seed (default 1)");
  demo->add_option("--workers", workers, "worker thread count");
  demo->add_option("--readout", demo_readout, "readout preset: ideal or reference_rate_selective");
  demo->add_option("--sigma", demo_sigma, "detector noise sigma at 1 us");
  demo->add_option("--out", out_path, "write the result here instead of stdout");
  demo->callback([&] {
    spinsim::readout::ReadoutConfig config;
    if (demo_readout == "ideal") {
      config = spinsim::readout::ReadoutConfig::ideal();
    } else if (demo_readout == "reference_rate_selective") {
      config = spinsim::readout::ReadoutConfig::reference_rate_selective();
    } else {
      throw ConfigError("unknown readout preset \"" + demo_readout + "\"");
    }
    spinsim::readout::DetectorModel detector;
    detector.noise_sigma_at_1us = demo_sigma;
    spinsim::harness::RunResult result = spinsim::harness::swap_demo_experiment(
        demo_p_up, shots > 0 ? shots : 20000, config, seed > 0 ? seed : 1, detector,
        workers > 0 ? workers : 1);
    write_output(out_path, result.to_json().dump(2) + "\n");
  });

  auto* calc = app.add_subcommand("calc", "closed-form engineering calculators");
  calc->require_subcommand(1);
  static CalcOutput out;

  // Quantity options arrive as strings so unit suffixes work ("5 T", "30 GHz").
  std::string g = "0.44", g_shifted, b0 = "5 T", b1, temperature = "100 mK";
  std::string t1 = "100 us", t2 = "100 ns", f1, duration;
  std::string current, distance = "200 nm", resistance = "20 ohm", frequency, power;
  std::string available = "300 uW", j_text, j_over_h_text, j0_text, v0_text, v_ref_text = "0 V", v_text;
  std::string gamma_up = "10 MHz", gamma_down = "100 Hz", gamma_in = "10 MHz", window = "5 us";
  std::string mode = "signed", scheme = "rate_selective";
  double mu_r = 1.0, overhead = 2.0, duty = 1.0, epsilon = 6.9, threshold = 0.5, sigma = 0.0;

  auto* zeeman = calc->add_subcommand("zeeman", "spin splitting g*mu_B*B0 and its frequency");
  zeeman->add_option("--g", g, "g-factor magnitude (sign is ignored)");
  zeeman->add_option("--b0", b0, "static field");
  add_json_flag(zeeman, out);
  zeeman->callback([&] {
    double gv = qty(g, Dimension::Dimensionless), b = qty(b0, Dimension::Field);
    double e = spinsim::device::zeeman_splitting(gv, b);
    double f = spinsim::device::larmor_frequency(gv, b);
    out.value("splitting", e);
    out.value("frequency", f);
    out.line("zeeman splitting: " + fmt(e, Dimension::Energy) + " (" + fmt(f, Dimension::Frequency) + ")");
  });

  auto* larmor = calc->add_subcommand("larmor", "spin precession frequency g*mu_B*B0/h");
  larmor->add_option("--g", g, "g-factor magnitude");
  larmor->add_option("--b0", b0, "static field");
  add_json_flag(larmor, out);
  larmor->callback([&] {
    double f = spinsim::device::larmor_frequency(qty(g, Dimension::Dimensionless), qty(b0, Dimension::Field));
    out.value("frequency", f);
    out.line("larmor frequency: " + fmt(f, Dimension::Frequency));
  });

  auto* thermal = calc->add_subcommand("thermal", "Boltzmann spin populations at the given temperature");
  thermal->add_option("--g", g, "g-factor magnitude");
  thermal->add_option("--b0", b0, "static field");
  thermal->add_option("--temperature", temperature, "electron temperature");
  add_json_flag(thermal, out);
  thermal->callback([&] {
    double gv = qty(g, Dimension::Dimensionless), b = qty(b0, Dimension::Field);
    double t = qty(temperature, Dimension::Temperature);
    double p_up = spinsim::device::thermal_up_probability(gv, b, t);
    double ratio = spinsim::device::zeeman_splitting(gv, b) / (spinsim::constants::k_B * t);
    bool polarized = spinsim::device::polarization_condition_met(gv, b, t);
    out.value("p_up", p_up);
    out.value("p_down", 1.0 - p_up);
    out.value("zeeman_over_kt", ratio);
    out.value("polarized", polarized);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "thermal populations: p_up = %.6f, p_down = %.6g", p_up, 1.0 - p_up);
    out.line(buf);
    std::snprintf(buf, sizeof(buf), "zeeman / kT = %.3f (needs > 5 for spin-selective loading: %s)", ratio,
                  polarized ? "yes" : "no");
    out.line(buf);
  });

  auto* rabi = calc->add_subcommand("rabi", "Rabi frequency g*mu_B*B1/h of a drive field");
  rabi->add_option("--g", g, "g-factor magnitude");
  rabi->add_option("--b1", b1, "rotating-frame drive amplitude")->required();
  add_json_flag(rabi, out);
  rabi->callback([&] {
    double f = spinsim::esr::rabi_frequency(qty(g, Dimension::Dimensionless), qty(b1, Dimension::Field));
    out.value("rabi_frequency", f);
    out.value("pi_time", 0.5 / f);
    out.line("rabi frequency: " + fmt(f, Dimension::Frequency) + " (pi pulse " +
             fmt(0.5 / f, Dimension::Time) + ")");
  });

  auto* minf1 = calc->add_subcommand("min-f1", "smallest Rabi frequency visible against T1/T2 damping");
  minf1->add_option("--t1", t1, "relaxation time");
  minf1->add_option("--t2", t2, "coherence time");
  add_json_flag(minf1, out);
  minf1->callback([&] {
    double f = spinsim::esr::min_observable_f1(qty(t1, Dimension::Time), qty(t2, Dimension::Time));
    out.value("min_f1", f);
    out.line("minimum observable rabi frequency: " + fmt(f, Dimension::Frequency));
  });

  auto* cw = calc->add_subcommand("cw-saturation", "steady-state Pr[up] under resonant continuous drive");
  cw->add_option("--f1", f1, "Rabi frequency")->required();
  cw->add_option("--t1", t1, "relaxation time");
  cw->add_option("--t2", t2, "coherence time");
  add_json_flag(cw, out);
  cw->callback([&] {
    double p = spinsim::esr::cw_saturation_probability(qty(f1, Dimension::Frequency),
                                                       qty(t1, Dimension::Time), qty(t2, Dimension::Time));
    out.value("p_up", p);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "steady-state p_up: %.7f", p);
    out.line(buf);
  });

  auto* detuning = calc->add_subcommand("detuning", "Larmor shift from a local g-factor change");
  detuning->add_option("--g-base", g, "unshifted g-factor");
  detuning->add_option("--g-shifted", g_shifted, "shifted g-factor")->required();
  detuning->add_option("--b0", b0, "static field");
  detuning->add_option("--mode", mode, "signed (default) or magnitude");
  add_json_flag(detuning, out);
  detuning->callback([&] {
    spinsim::esr::AddressingMode m;
    if (mode == "signed") {
      m = spinsim::esr::AddressingMode::SignedDifference;
    } else if (mode == "magnitude") {
      m = spinsim::esr::AddressingMode::MagnitudeDifference;
    } else {
      throw ConfigError("mode must be \"signed\" or \"magnitude\"");
    }
    double d = spinsim::esr::detuning_for_addressing(qty(g, Dimension::Dimensionless),
                                                     qty(g_shifted, Dimension::Dimensionless),
                                                     qty(b0, Dimension::Field), m);
    out.value("detuning", d);
    out.line("addressing detuning: " + fmt(d, Dimension::Frequency));
  });

  auto* wire = calc->add_subcommand("wire-field", "drive field of an on-chip wire at the dot");
  wire->add_option("--current", current, "current amplitude")->required();
  wire->add_option("--distance", distance, "wire-to-dot distance");
  wire->add_option("--mu-r", mu_r, "relative permeability");
  add_json_flag(wire, out);
  wire->callback([&] {
    spinsim::microwave::WireGeometry geom;
    geom.distance_to_dot = qty(distance, Dimension::Length);
    geom.relative_permeability = mu_r;
    double b = spinsim::microwave::wire_field(qty(current, Dimension::Current), geom);
    out.value("b1", b);
    out.line("field at the dot: " + fmt(b, Dimension::Field));
  });

  auto* budget = calc->add_subcommand(
      "drive-budget", "wire current, dissipation, near-field and cooling checks for a target drive field");
  budget->add_option("--b1", b1, "target rotating-frame amplitude")->required();
  budget->add_option("--distance", distance, "wire-to-dot distance");
  budget->add_option("--mu-r", mu_r, "relative permeability");
  budget->add_option("--resistance", resistance, "effective series resistance");
  budget->add_option("--overhead", overhead, "loss overhead factor on the ohmic power");
  budget->add_option("--frequency", frequency, "drive frequency for the near-field check");
  budget->add_option("--epsilon", epsilon, "effective permittivity of the substrate");
  budget->add_option("--duty", duty, "drive duty cycle");
  budget->add_option("--available", available, "cooling power available");
  add_json_flag(budget, out);
  budget->callback([&] {
    spinsim::microwave::WireGeometry geom;
    geom.distance_to_dot = qty(distance, Dimension::Length);
    geom.relative_permeability = mu_r;
    geom.resistance = qty(resistance, Dimension::Resistance);
    double b = qty(b1, Dimension::Field);
    double i = spinsim::microwave::required_current(b, geom);
    double ohmic = spinsim::microwave::ohmic_power(i, geom);
    double total = spinsim::microwave::total_dissipation(i, geom, overhead);
    double cavity = spinsim::microwave::cavity_power_estimate(b);
    spinsim::microwave::ThermalBudget cooling;
    cooling.available_power = qty(available, Dimension::Power);
    cooling.duty_cycle = duty;
    spinsim::microwave::BudgetReport report = spinsim::microwave::thermal_budget_check(total, cooling);
    out.value("current", i);
    out.value("ohmic_power", ohmic);
    out.value("total_dissipation", total);
    out.value("cavity_power", cavity);
    out.value("effective_power", report.effective_power);
    out.value("budget_margin", report.margin);
    out.value("budget_pass", report.pass);
    out.line("required current: " + fmt(i, Dimension::Current));
    out.line("ohmic power: " + fmt(ohmic, Dimension::Power) + ", with overhead: " +
             fmt(total, Dimension::Power));
    out.line("cavity equivalent: " + fmt(cavity, Dimension::Power));
    char buf[160];
    std::snprintf(buf, sizeof(buf), "cooling budget: %s duty-weighted vs %s available, margin %.3g: %s",
                  fmt(report.effective_power, Dimension::Power).c_str(),
                  fmt(cooling.available_power, Dimension::Power).c_str(), report.margin,
                  report.pass ? "PASS" : "FAIL");
    out.line(buf);
    if (!frequency.empty()) {
      spinsim::microwave::NearFieldReport nf =
          spinsim::microwave::near_field_check(geom, qty(frequency, Dimension::Frequency), epsilon);
      out.value("wavelength", nf.wavelength);
      out.value("near_field_ratio", nf.ratio);
      out.value("near_field_pass", nf.pass);
      std::snprintf(buf, sizeof(buf), "near field: r/lambda = %.3g (lambda %s): %s", nf.ratio,
                    fmt(nf.wavelength, Dimension::Length).c_str(), nf.pass ? "PASS" : "FAIL");
      out.line(buf);
    }
  });

  auto* ohmic = calc->add_subcommand("ohmic-power", "I^2 R / 2 dissipation of a sinusoidal current");
  ohmic->add_option("--current", current, "current amplitude")->required();
  ohmic->add_option("--resistance", resistance, "effective series resistance");
  add_json_flag(ohmic, out);
  ohmic->callback([&] {
    spinsim::microwave::WireGeometry geom;
    geom.resistance = qty(resistance, Dimension::Resistance);
    double p = spinsim::microwave::ohmic_power(qty(current, Dimension::Current), geom);
    out.value("power", p);
    out.line("ohmic power: " + fmt(p, Dimension::Power));
  });

  auto* cavity = calc->add_subcommand("cavity-power", "cavity power needed for the same drive field");
  cavity->add_option("--b1", b1, "target drive amplitude")->required();
  add_json_flag(cavity, out);
  cavity->callback([&] {
    double p = spinsim::microwave::cavity_power_estimate(qty(b1, Dimension::Field));
    out.value("power", p);
    out.line("cavity power estimate: " + fmt(p, Dimension::Power));
  });

  auto* nf = calc->add_subcommand("near-field", "lumped-element validity of the wire drive");
  nf->add_option("--frequency", frequency, "drive frequency")->required();
  nf->add_option("--distance", distance, "wire-to-dot distance");
  nf->add_option("--epsilon", epsilon, "effective permittivity");
  add_json_flag(nf, out);
  nf->callback([&] {
    spinsim::microwave::WireGeometry geom;
    geom.distance_to_dot = qty(distance, Dimension::Length);
    spinsim::microwave::NearFieldReport report =
        spinsim::microwave::near_field_check(geom, qty(frequency, Dimension::Frequency), epsilon);
    out.value("wavelength", report.wavelength);
    out.value("ratio", report.ratio);
    out.value("pass", report.pass);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "r/lambda = %.4g against %.3g (lambda %s): %s", report.ratio,
                  report.threshold, fmt(report.wavelength, Dimension::Length).c_str(),
                  report.pass ? "PASS" : "FAIL");
    out.line(buf);
  });

  auto* cool = calc->add_subcommand("thermal-budget", "duty-weighted dissipation against cooling power");
  cool->add_option("--power", power, "dissipated power while driving")->required();
  cool->add_option("--duty", duty, "drive duty cycle");
  cool->add_option("--available", available, "cooling power available");
  add_json_flag(cool, out);
  cool->callback([&] {
    spinsim::microwave::ThermalBudget cooling;
    cooling.available_power = qty(available, Dimension::Power);
    cooling.duty_cycle = duty;
    spinsim::microwave::BudgetReport report =
        spinsim::microwave::thermal_budget_check(qty(power, Dimension::Power), cooling);
    out.value("effective_power", report.effective_power);
    out.value("margin", report.margin);
    out.value("pass", report.pass);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s duty-weighted vs %s available, margin %.3g: %s",
                  fmt(report.effective_power, Dimension::Power).c_str(),
                  fmt(cooling.available_power, Dimension::Power).c_str(), report.margin,
                  report.pass ? "PASS" : "FAIL");
    out.line(buf);
  });

  auto* jv = calc->add_subcommand("j-from-voltage", "exchange coupling of an exponential barrier model");
  jv->add_option("--j0", j0_text, "coupling at the reference voltage")->required();
  jv->add_option("--v0", v0_text, "exponential voltage scale")->required();
  jv->add_option("--v-ref", v_ref_text, "reference gate voltage");
  jv->add_option("--v", v_text, "gate voltage")->required();
  add_json_flag(jv, out);
  jv->callback([&] {
    spinsim::exchange::BarrierModel model;
    model.j0 = qty(j0_text, Dimension::Energy);
    model.v0 = qty(v0_text, Dimension::Voltage);
    model.v_ref = qty(v_ref_text, Dimension::Voltage);
    double j = spinsim::exchange::j_from_voltage(model, qty(v_text, Dimension::Voltage));
    out.value("j", j);
    out.value("j_over_h", j / spinsim::constants::h);
    out.value("swap_time", spinsim::exchange::swap_duration(j));
    out.line("J = " + fmt(j, Dimension::Energy) + " (" +
             fmt(j / spinsim::constants::h, Dimension::Frequency) + "), swap in " +
             fmt(spinsim::exchange::swap_duration(j), Dimension::Time));
  });

  auto* swap_time = calc->add_subcommand("swap-time", "swap pulse length h/(2J) at fixed coupling");
  swap_time->add_option("--j", j_text, "exchange coupling as an energy");
  swap_time->add_option("--j-over-h", j_over_h_text, "exchange coupling as a frequency");
  add_json_flag(swap_time, out);
  swap_time->callback([&] {
    if (j_text.empty() == j_over_h_text.empty()) {
      throw ConfigError("give exactly one of --j or --j-over-h");
    }
    double j = j_text.empty() ? qty(j_over_h_text, Dimension::Frequency) * spinsim::constants::h
                              : qty(j_text, Dimension::Energy);
    double t = spinsim::exchange::swap_duration(j);
    out.value("swap_time", t);
    out.value("sqrt_swap_time", t / 2.0);
    out.line("swap: " + fmt(t, Dimension::Time) + ", sqrt-swap: " + fmt(t / 2.0, Dimension::Time));
  });

  auto* budget_gate = calc->add_subcommand("error-budget", "first-order dephasing error duration/T2");
  budget_gate->add_option("--duration", duration, "gate duration")->required();
  budget_gate->add_option("--t2", t2, "coherence time");
  add_json_flag(budget_gate, out);
  budget_gate->callback([&] {
    double e = spinsim::harness::error_per_gate_budget(qty(duration, Dimension::Time), qty(t2, Dimension::Time));
    out.value("error_per_gate", e);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "error per gate: %.3g", e);
    out.line(buf);
  });

  auto* fidelity = calc->add_subcommand("readout-fidelity", "closed-form single-shot readout fidelity");
  fidelity->add_option("--scheme", scheme, "rate_selective or energy_threshold");
  fidelity->add_option("--gamma-up", gamma_up, "up-spin exit rate");
  fidelity->add_option("--gamma-down", gamma_down, "down-spin exit rate");
  fidelity->add_option("--gamma-in", gamma_in, "reload rate");
  fidelity->add_option("--window", window, "measurement window");
  fidelity->add_option("--threshold", threshold, "detector decision level");
  fidelity->add_option("--sigma", sigma, "detector noise sigma at 1 us");
  add_json_flag(fidelity, out);
  fidelity->callback([&] {
    spinsim::readout::ReadoutConfig config;
    config.scheme = spinsim::readout::scheme_from_name(scheme);
    config.gamma_up_out = qty(gamma_up, Dimension::Frequency);
    config.gamma_down_out = qty(gamma_down, Dimension::Frequency);
    config.gamma_in = qty(gamma_in, Dimension::Frequency);
    config.measurement_window = qty(window, Dimension::Time);
    spinsim::readout::DetectorModel detector;
    detector.threshold = threshold;
    detector.noise_sigma_at_1us = sigma;
    spinsim::readout::FidelityEstimate estimate = spinsim::readout::analytic_fidelity(config, detector);
    out.value("f_up", estimate.f_up);
    out.value("f_down", estimate.f_down);
    out.value("f_avg", 0.5 * (estimate.f_up + estimate.f_down));
    char buf[120];
    std::snprintf(buf, sizeof(buf), "f_up = %.6f, f_down = %.6f, average %.6f", estimate.f_up,
                  estimate.f_down, 0.5 * (estimate.f_up + estimate.f_down));
    out.line(buf);
  });

  auto* timing = calc->add_subcommand("timing", "readout timing chain T_t < T_m < T1, T_nt");
  timing->add_option("--gamma-up", gamma_up, "up-spin exit rate");
  timing->add_option("--gamma-down", gamma_down, "down-spin exit rate");
  timing->add_option("--window", window, "measurement window");
  timing->add_option("--t1", t1, "relaxation time");
  add_json_flag(timing, out);
  timing->callback([&] {
    spinsim::readout::ReadoutConfig config;
    config.gamma_up_out = qty(gamma_up, Dimension::Frequency);
    config.gamma_down_out = qty(gamma_down, Dimension::Frequency);
    config.measurement_window = qty(window, Dimension::Time);
    spinsim::device::DotParams dot;
    dot.t1 = qty(t1, Dimension::Time);
    spinsim::readout::TimingReport report = spinsim::readout::timing_chain_check(config, dot);
    ordered_json links = ordered_json::array();
    char buf[160];
    for (const spinsim::readout::TimingLink& link : report.links) {
      links.push_back({{"name", link.name}, {"lhs", link.lhs}, {"rhs", link.rhs}, {"pass", link.pass},
                       {"margin", link.margin}});
      std::snprintf(buf, sizeof(buf), "%-12s %10s < %-10s margin %8.3g: %s", link.name.c_str(),
                    fmt(link.lhs, Dimension::Time).c_str(), fmt(link.rhs, Dimension::Time).c_str(),
                    link.margin, link.pass ? "PASS" : "FAIL");
      out.line(buf);
    }
    out.payload["links"] = std::move(links);
    out.value("all_pass", report.all_pass);
    out.line(report.all_pass ? "timing chain: PASS" : "timing chain: FAIL");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }

  if (calc->parsed()) out.emit();
  return 0;
}
