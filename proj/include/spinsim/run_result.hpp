#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <string>

namespace spinsim::harness {

struct ProbabilityEstimate {
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t count = 0;
};

/// Wilson 95% score interval; contains the point estimate by construction.
ProbabilityEstimate wilson_interval(std::uint64_t successes, std::uint64_t total);

/// Aggregated outcome of a Monte Carlo run. Outcome keys list each measured
/// qubit's declaration in step order ("q0=up,q1=down"); marginals are keyed
/// per qubit ("q1=up"). JSON serialization has stable key order so identical
/// runs compare byte for byte.
struct RunResult {
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> outcome_counts;
  std::map<std::string, ProbabilityEstimate> estimated_probabilities;
  std::map<std::string, ProbabilityEstimate> marginal_probabilities;
  nlohmann::ordered_json metadata;

  nlohmann::ordered_json to_json() const;
};

}  // namespace spinsim::harness
