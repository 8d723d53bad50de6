#include "spinsim/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinsim/constants.hpp"
#include "spinsim/errors.hpp"

namespace spinsim::readout {
namespace {

using std::numbers::pi;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Gauss-Legendre nodes/weights on [-1, 1], Newton refinement from the
// Chebyshev guesses. Built once; 128 points resolve the smooth fidelity
// integrand to machine precision.
constexpr int kQuadPoints = 128;

struct Quadrature {
  std::array<double, kQuadPoints> x{};
  std::array<double, kQuadPoints> w{};
};

const Quadrature& quadrature() {
  static const Quadrature q = [] {
    Quadrature out;
    const int n = kQuadPoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double t = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0, p1 = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-15) break;
      }
      out.x[i] = -t;
      out.x[n - 1 - i] = t;
      out.w[i] = out.w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return out;
  }();
  return q;
}

// Time-average of the detector level over [0, window].
double window_average(const std::vector<ChargeEvent>& trajectory, double window,
                      const std::array<double, 3>& levels) {
  double acc = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    double start = std::min(trajectory[i].time, window);
    double stop = (i + 1 < trajectory.size()) ? std::min(trajectory[i + 1].time, window) : window;
    acc += levels[static_cast<std::size_t>(trajectory[i].charge)] * (stop - start);
  }
  return acc / window;
}

void check_probability(double p_up) {
  if (p_up < 0.0 || p_up > 1.0) throw ConfigError("simulate_shot: p_up outside [0, 1]");
}

// Pr[declared up] for an electron whose exit is exponential at `gamma`:
// the window-average signal for a tunnel at tau is min(tau, T_m)/T_m plus
// Gaussian noise, declared up below the threshold.
double prob_declared_up(double gamma, double t_m, double threshold, double sigma) {
  if (gamma <= 0.0) {
    return sigma > 0.0 ? normal_cdf((threshold - 1.0) / sigma) : 0.0;
  }
  if (sigma <= 0.0) {
    return -std::expm1(-gamma * threshold * t_m);
  }
  // Substituting y = exp(-gamma tau) turns the density into the uniform
  // measure on [exp(-gamma T_m), 1]; the survivor term handles tau > T_m.
  double y0 = std::exp(-gamma * t_m);
  const Quadrature& q = quadrature();
  double half = 0.5 * (1.0 - y0);
  double mid = 0.5 * (1.0 + y0);
  double acc = 0.0;
  for (int i = 0; i < kQuadPoints; ++i) {
    double y = mid + half * q.x[i];
    acc += q.w[i] * normal_cdf((threshold + std::log(y) / (gamma * t_m)) / sigma);
  }
  return half * acc + y0 * normal_cdf((threshold - 1.0) / sigma);
}

ReadoutRecord finish_record(ReadoutRecord record, const ReadoutConfig& config, const DetectorModel& detector,
                            rng::Stream& stream) {
  double sigma = detector.sigma_for_window(config.measurement_window);
  double signal = window_average(record.charge_trajectory, config.measurement_window, detector.charge_levels);
  if (sigma > 0.0) signal += sigma * stream.normal();
  record.window_avg_signal = signal;

  if (config.scheme == Scheme::SingletTriplet) {
    record.declared =
        (signal - detector.charge_levels[1]) >= detector.threshold ? Declared::Down : Declared::Up;
  } else {
    record.declared = (signal - detector.charge_levels[0]) < detector.threshold ? Declared::Up : Declared::Down;
  }
  return record;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::RateSelective: return "rate_selective";
    case Scheme::EnergyThreshold: return "energy_threshold";
    case Scheme::SingletTriplet: return "singlet_triplet";
    case Scheme::BrokenBothBelowEF: return "broken_both_below_ef";
    case Scheme::BrokenMidgapEF: return "broken_midgap_ef";
    case Scheme::BrokenUnselective: return "broken_unselective";
    case Scheme::Off: return "off";
  }
  return "unknown";
}

Scheme scheme_from_name(std::string_view name) {
  for (Scheme s : {Scheme::RateSelective, Scheme::EnergyThreshold, Scheme::SingletTriplet,
                   Scheme::BrokenBothBelowEF, Scheme::BrokenMidgapEF, Scheme::BrokenUnselective, Scheme::Off}) {
    if (scheme_name(s) == name) return s;
  }
  throw ConfigError("unknown readout scheme '" + std::string(name) + "'");
}

void ReadoutConfig::validate() const {
  if (gamma_up_out < 0.0 || gamma_down_out < 0.0 || gamma_in < 0.0) {
    throw ConfigError("readout: tunnel rates must be >= 0");
  }
  if (!(measurement_window > 0.0)) throw ConfigError("readout: measurement_window must be > 0");
  if (scheme == Scheme::RateSelective && !(gamma_up_out > gamma_down_out)) {
    throw ConfigError("readout: rate-selective scheme needs gamma_up_out > gamma_down_out");
  }
  if (scheme == Scheme::EnergyThreshold && gamma_down_out != 0.0) {
    throw ConfigError("readout: energy-threshold scheme forbids a down exit (gamma_down_out must be 0)");
  }
  if (scheme == Scheme::SingletTriplet) {
    if (!(singlet_triplet_splitting > 0.0)) {
      throw ConfigError("readout: singlet-triplet scheme needs a positive splitting");
    }
    if (!(gamma_in > 0.0)) throw ConfigError("readout: singlet-triplet scheme needs gamma_in > 0");
  }
}

ReadoutConfig ReadoutConfig::ideal() {
  ReadoutConfig config;
  config.scheme = Scheme::EnergyThreshold;
  config.gamma_up_out = 1e9;
  config.gamma_down_out = 0.0;
  config.gamma_in = 0.0;
  config.measurement_window = 1e-6;
  return config;
}

ReadoutConfig ReadoutConfig::reference_rate_selective() {
  ReadoutConfig config;
  config.scheme = Scheme::RateSelective;
  config.gamma_up_out = 1e7;    // T_t = 0.1 us
  config.gamma_down_out = 100;  // T_nt = 10 ms
  config.gamma_in = 1e7;
  config.measurement_window = 5e-6;
  return config;
}

ReadoutConfig ReadoutConfig::rate_selective_from_lengths(double wavefunction_offset, double decay_length,
                                                         double gamma_fast, double measurement_window) {
  if (!(wavefunction_offset > 0.0) || !(decay_length > 0.0)) {
    throw ConfigError("readout: wavefunction offset and decay length must be > 0");
  }
  if (!(gamma_fast > 0.0)) throw ConfigError("readout: gamma_fast must be > 0");
  ReadoutConfig config;
  config.scheme = Scheme::RateSelective;
  config.gamma_up_out = gamma_fast;
  config.gamma_down_out = gamma_fast * std::exp(-wavefunction_offset / decay_length);
  config.measurement_window = measurement_window;
  config.validate();
  return config;
}

void DetectorModel::validate() const {
  if (!(threshold > 0.0) || !(threshold < 1.0)) throw ConfigError("detector: threshold must be in (0, 1)");
  if (noise_sigma_at_1us < 0.0) throw ConfigError("detector: noise sigma must be >= 0");
  for (int i = 0; i + 1 < 3; ++i) {
    if (std::fabs(charge_levels[i + 1] - charge_levels[i] - 1.0) > 1e-9) {
      throw ConfigError("detector: charge_levels must step by exactly 1 per electron");
    }
  }
}

double DetectorModel::sigma_for_window(double t_m) const {
  if (!(t_m > 0.0)) throw ConfigError("detector: window must be > 0");
  return noise_sigma_at_1us * std::sqrt(1e-6 / t_m);
}

std::string_view to_string(Spin spin) { return spin == Spin::Up ? "up" : "down"; }

std::string_view to_string(Declared declared) {
  switch (declared) {
    case Declared::Up: return "up";
    case Declared::Down: return "down";
    case Declared::None: return "none";
  }
  return "unknown";
}

ReadoutRecord simulate_shot(double p_up, const ReadoutConfig& config, const DetectorModel& detector,
                            rng::Stream& stream) {
  config.validate();
  detector.validate();
  check_probability(p_up);
  if (config.scheme == Scheme::SingletTriplet) {
    return simulate_singlet_triplet_shot(p_up, config, detector, stream);
  }

  ReadoutRecord record;
  record.true_spin = stream.bernoulli(p_up) ? Spin::Up : Spin::Down;
  record.charge_trajectory.push_back({0.0, 1});

  switch (config.scheme) {
    case Scheme::Off: {
      // Coulomb blockade: nothing moves, nothing is learned.
      record.window_avg_signal = detector.charge_levels[1];
      record.declared = Declared::None;
      return record;
    }
    case Scheme::RateSelective:
    case Scheme::EnergyThreshold:
    case Scheme::BrokenUnselective: {
      // BrokenUnselective: both levels sit above E_F, so both species leave
      // through the same barrier at the common (up) rate.
      double rate = config.scheme == Scheme::BrokenUnselective
                        ? config.gamma_up_out
                        : (record.true_spin == Spin::Up ? config.gamma_up_out : config.gamma_down_out);
      if (rate > 0.0) {
        double tau = stream.exponential(rate);
        record.tunnel_out_time = tau;
        record.charge_trajectory.push_back({tau, 0});
      }
      break;
    }
    case Scheme::BrokenBothBelowEF:
      // Both levels below E_F: the electron is stuck regardless of spin.
      break;
    case Scheme::BrokenMidgapEF: {
      // E_F between the levels: a down electron leaves, but the empty dot is
      // immediately refilled by an up electron, erasing the signature.
      if (record.true_spin == Spin::Down && config.gamma_down_out > 0.0) {
        double tau = stream.exponential(config.gamma_down_out);
        record.tunnel_out_time = tau;
        record.charge_trajectory.push_back({tau, 0});
        if (config.gamma_in > 0.0) {
          double reload = tau + stream.exponential(config.gamma_in);
          record.reload_time = reload;
          record.charge_trajectory.push_back({reload, 1});
        }
      }
      break;
    }
    case Scheme::SingletTriplet:
      break;  // dispatched above
  }

  return finish_record(std::move(record), config, detector, stream);
}

ReadoutRecord simulate_singlet_triplet_shot(double p_up, const ReadoutConfig& config,
                                            const DetectorModel& detector, rng::Stream& stream) {
  if (config.scheme != Scheme::SingletTriplet) {
    throw ConfigError("simulate_singlet_triplet_shot: config scheme is not singlet_triplet");
  }
  config.validate();
  detector.validate();
  check_probability(p_up);

  ReadoutRecord record;
  record.true_spin = stream.bernoulli(p_up) ? Spin::Up : Spin::Down;
  record.charge_trajectory.push_back({0.0, 1});

  // The second electron can only enter by forming a singlet, which requires
  // the resident spin to be down; a triplet entry is blocked by the splitting.
  if (record.true_spin == Spin::Down) {
    double entry = stream.exponential(config.gamma_in);
    record.reload_time = entry;
    record.charge_trajectory.push_back({entry, 2});
  }

  return finish_record(std::move(record), config, detector, stream);
}

FidelityEstimate analytic_fidelity(const ReadoutConfig& config, const DetectorModel& detector) {
  config.validate();
  detector.validate();
  if (config.scheme != Scheme::RateSelective && config.scheme != Scheme::EnergyThreshold) {
    throw ConfigError("analytic_fidelity: only the spin-selective exit schemes have a closed form");
  }
  double sigma = detector.sigma_for_window(config.measurement_window);
  double up = prob_declared_up(config.gamma_up_out, config.measurement_window, detector.threshold, sigma);
  double down = prob_declared_up(config.gamma_down_out, config.measurement_window, detector.threshold, sigma);
  return FidelityEstimate{up, 1.0 - down};
}

TimingReport timing_chain_check(const ReadoutConfig& config, const device::DotParams& dot) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  TimingReport report;
  report.t_tunnel = config.gamma_up_out > 0.0 ? 1.0 / config.gamma_up_out : kInf;
  report.t_window = config.measurement_window;
  report.t_no_tunnel = config.gamma_down_out > 0.0 ? 1.0 / config.gamma_down_out : kInf;
  report.t1 = dot.t1;

  auto link = [](std::string name, double lhs, double rhs) {
    return TimingLink{std::move(name), lhs, rhs, lhs < rhs, rhs / lhs};
  };
  report.links.push_back(link("T_t < T_m", report.t_tunnel, report.t_window));
  report.links.push_back(link("T_m < T1", report.t_window, report.t1));
  report.links.push_back(link("T_m < T_nt", report.t_window, report.t_no_tunnel));
  report.all_pass = std::all_of(report.links.begin(), report.links.end(),
                                [](const TimingLink& l) { return l.pass; });
  return report;
}

double outcome_spin_mutual_information(const std::vector<ReadoutRecord>& records) {
  if (records.size() < 1000) {
    throw ConfigError("outcome_spin_mutual_information: need at least 1000 records");
  }
  double joint[2][3] = {};
  for (const ReadoutRecord& r : records) {
    joint[r.true_spin == Spin::Up ? 0 : 1][static_cast<int>(r.declared)] += 1.0;
  }
  double n = static_cast<double>(records.size());
  double p_spin[2] = {};
  double p_decl[3] = {};
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 3; ++d) {
      joint[s][d] /= n;
      p_spin[s] += joint[s][d];
      p_decl[d] += joint[s][d];
    }
  }
  double mi = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 3; ++d) {
      if (joint[s][d] > 0.0) mi += joint[s][d] * std::log2(joint[s][d] / (p_spin[s] * p_decl[d]));
    }
  }
  return std::max(mi, 0.0);
}

bool splitting_robust(const ReadoutConfig& config, const device::DotParams& dot) {
  double zeeman = device::zeeman_splitting(dot.g_factor, dot.b0_field);
  double thermal = 5.0 * constants::k_B * dot.temperature;
  return config.singlet_triplet_splitting > zeeman && config.singlet_triplet_splitting > thermal;
}

}  // namespace spinsim::readout
