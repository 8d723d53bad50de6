#include "spinsim/run_result.hpp"

#include <cmath>

#include "spinsim/errors.hpp"
#include "spinsim/version.hpp"

namespace spinsim::harness {

ProbabilityEstimate wilson_interval(std::uint64_t successes, std::uint64_t total) {
  if (total == 0) throw ConfigError("wilson_interval: empty sample");
  if (successes > total) throw ConfigError("wilson_interval: successes exceed total");

  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  double n = static_cast<double>(total);
  double p_hat = static_cast<double>(successes) / n;
  double z2n = z * z / n;
  double denom = 1.0 + z2n;
  double center = (p_hat + 0.5 * z2n) / denom;
  double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + 0.25 * z2n / n) / denom;

  ProbabilityEstimate est;
  est.p = p_hat;
  est.ci_low = std::max(0.0, center - half);
  est.ci_high = std::min(1.0, center + half);
  est.count = successes;
  return est;
}

nlohmann::ordered_json RunResult::to_json() const {
  nlohmann::ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["shots"] = shots;

  nlohmann::ordered_json counts;
  for (const auto& [key, value] : outcome_counts) counts[key] = value;
  out["outcome_counts"] = std::move(counts);

  auto estimates_json = [](const std::map<std::string, ProbabilityEstimate>& estimates) {
    nlohmann::ordered_json block;
    for (const auto& [key, est] : estimates) {
      block[key] = {{"p", est.p}, {"ci_low", est.ci_low}, {"ci_high", est.ci_high}, {"count", est.count}};
    }
    return block;
  };
  out["estimated_probabilities"] = estimates_json(estimated_probabilities);
  out["marginal_probabilities"] = estimates_json(marginal_probabilities);
  out["metadata"] = metadata;
  return out;
}

}  // namespace spinsim::harness
