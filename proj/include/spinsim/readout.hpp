#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinsim/device.hpp"
#include "spinsim/rng.hpp"

namespace spinsim::readout {

/// Spin-to-charge conversion schemes. The three Broken* variants are level
/// alignments that destroy spin selectivity (all levels below the Fermi
/// energy, Fermi energy between the levels with reload allowed, all levels
/// above); Off models the detector parked in Coulomb blockade.
enum class Scheme {
  RateSelective,
  EnergyThreshold,
  SingletTriplet,
  BrokenBothBelowEF,
  BrokenMidgapEF,
  BrokenUnselective,
  Off,
};

std::string_view scheme_name(Scheme scheme);
Scheme scheme_from_name(std::string_view name);

struct ReadoutConfig {
  Scheme scheme = Scheme::RateSelective;
  double gamma_up_out = 1e7;    // Hz, exit rate of the up electron
  double gamma_down_out = 0.0;  // Hz, exit rate of the down electron
  double gamma_in = 1e7;        // Hz, reload/entry rate where allowed
  double measurement_window = 5e-6;        // s (T_m)
  double singlet_triplet_splitting = 0.0;  // eV, SingletTriplet scheme only

  void validate() const;

  /// Error-free reference: energy-threshold scheme, fast exit, no slow-spin
  /// leakage; with a noiseless detector every declaration is correct.
  static ReadoutConfig ideal();

  /// Rate-selective working point: T_t = 0.1 us, T_nt = 10 ms, T_m = 5 us.
  static ReadoutConfig reference_rate_selective();

  /// Maps the tunnel-distance picture to rates: the slow species' exit is
  /// suppressed by exp(-wavefunction_offset / decay_length) relative to
  /// gamma_fast.
  static ReadoutConfig rate_selective_from_lengths(double wavefunction_offset, double decay_length,
                                                   double gamma_fast, double measurement_window);
};

struct DetectorModel {
  /// Expected signal per dot charge; normalized so one electron steps the
  /// signal by exactly 1.
  std::array<double, 3> charge_levels{0.0, 1.0, 2.0};
  double noise_sigma_at_1us = 0.0;  // std-dev of the 1 us window average
  double threshold = 0.5;           // decision level, in (0, 1)

  void validate() const;

  /// White-noise averaging: sigma(T_m) = sigma(1 us) * sqrt(1 us / T_m).
  double sigma_for_window(double t_m) const;

  static DetectorModel ideal() { return DetectorModel{}; }
};

enum class Spin { Up, Down };
enum class Declared { Up, Down, None };

std::string_view to_string(Spin spin);
std::string_view to_string(Declared declared);

struct ChargeEvent {
  double time;  // s
  int charge;   // electrons on the dot from this instant
};

struct ReadoutRecord {
  Spin true_spin = Spin::Up;
  std::optional<double> tunnel_out_time;  // s
  std::optional<double> reload_time;      // s
  double window_avg_signal = 0.0;
  Declared declared = Declared::None;
  std::vector<ChargeEvent> charge_trajectory;  // starts at t = 0, charge 1
};

/// One single-shot readout: draws the true spin Bernoulli(p_up), samples the
/// tunnel events of the scheme as exponential waiting times, integrates the
/// detector signal over the measurement window, adds Gaussian noise, and
/// thresholds. Events are followed to the trajectory's absorbing state even
/// past the window end. SingletTriplet configs dispatch to the dedicated
/// simulator below.
ReadoutRecord simulate_shot(double p_up, const ReadoutConfig& config, const DetectorModel& detector,
                            rng::Stream& stream);

/// Charge-2 variant: a second electron can enter only when the qubit is down
/// (the singlet is energetically reachable, the triplet is not); declaration
/// thresholds between charge 1 and 2.
ReadoutRecord simulate_singlet_triplet_shot(double p_up, const ReadoutConfig& config,
                                            const DetectorModel& detector, rng::Stream& stream);

struct FidelityEstimate {
  double f_up;    // Pr[declared up | true up]
  double f_down;  // Pr[declared down | true down]
};

/// Closed-form companion of simulate_shot for the spin-selective schemes:
/// integrates the exponential tunnel-time density against the Gaussian
/// decision boundary (signal for a tunnel at tau is min(tau, T_m)/T_m).
FidelityEstimate analytic_fidelity(const ReadoutConfig& config, const DetectorModel& detector);

struct TimingLink {
  std::string name;
  double lhs;
  double rhs;
  bool pass;
  double margin;  // rhs / lhs
};

struct TimingReport {
  double t_tunnel;     // 1 / gamma_up_out
  double t_window;     // measurement window
  double t_no_tunnel;  // 1 / gamma_down_out, may be infinite
  double t1;
  std::vector<TimingLink> links;
  bool all_pass;
};

/// The readout ordering T_t < T_m < T1, T_nt, link by link with margins.
TimingReport timing_chain_check(const ReadoutConfig& config, const device::DotParams& dot);

/// Plug-in mutual information (bits) between true spin and declared outcome
/// over the empirical joint distribution. Needs at least 1000 records.
double outcome_spin_mutual_information(const std::vector<ReadoutRecord>& records);

/// A singlet-triplet splitting comfortably above both the Zeeman and thermal
/// scales makes the scheme's energy selectivity robust.
bool splitting_robust(const ReadoutConfig& config, const device::DotParams& dot);

}  // namespace spinsim::readout
