#include <doctest.h>

#include <nlohmann/json.hpp>

#include "spinsim/errors.hpp"
#include "spinsim/rng.hpp"
#include "spinsim/run_result.hpp"

using namespace spinsim;
using harness::ProbabilityEstimate;
using harness::RunResult;
using harness::wilson_interval;

TEST_CASE("wilson interval reference values") {
  ProbabilityEstimate even = wilson_interval(500, 1000);
  CHECK(even.p == doctest::Approx(0.5));
  CHECK(even.ci_low == doctest::Approx(0.4690696003681042).epsilon(1e-12));
  CHECK(even.ci_high == doctest::Approx(0.5309303996318958).epsilon(1e-12));
  CHECK(even.count == 500);

  ProbabilityEstimate none = wilson_interval(0, 100);
  CHECK(none.p == 0.0);
  CHECK(none.ci_low == doctest::Approx(0.0));
  CHECK(none.ci_high == doctest::Approx(0.03699349820698568).epsilon(1e-12));

  ProbabilityEstimate all = wilson_interval(100, 100);
  CHECK(all.p == 1.0);
  CHECK(all.ci_low == doctest::Approx(0.9630065017930143).epsilon(1e-12));
  CHECK(all.ci_high == doctest::Approx(1.0));

  ProbabilityEstimate skewed = wilson_interval(800, 1000);
  CHECK(skewed.ci_low == doctest::Approx(0.7740810353518655).epsilon(1e-12));
  CHECK(skewed.ci_high == doctest::Approx(0.8236229095568015).epsilon(1e-12));
}

TEST_CASE("interval always brackets the point estimate and stays in range") {
  rng::Stream stream(61);
  for (int i = 0; i < 50; ++i) {
    std::uint64_t total = 1 + static_cast<std::uint64_t>(stream.uniform() * 100000);
    std::uint64_t successes = static_cast<std::uint64_t>(stream.uniform() * (total + 1));
    if (successes > total) successes = total;
    ProbabilityEstimate e = wilson_interval(successes, total);
    CHECK(e.ci_low >= 0.0);
    CHECK(e.ci_high <= 1.0);
    CHECK(e.ci_low <= e.p);
    CHECK(e.p <= e.ci_high);
  }
}

TEST_CASE("interval narrows as counts grow") {
  double previous = 1.0;
  for (std::uint64_t n : {100ull, 1000ull, 10000ull, 100000ull}) {
    ProbabilityEstimate e = wilson_interval(n / 2, n);
    double width = e.ci_high - e.ci_low;
    CHECK(width < previous);
    previous = width;
  }
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(wilson_interval(1, 0), ConfigError);
  CHECK_THROWS_AS(wilson_interval(5, 4), ConfigError);
}

TEST_CASE("serialized results carry the full shape") {
  RunResult result;
  result.shots = 10;
  result.outcome_counts["q0=up"] = 7;
  result.outcome_counts["q0=down"] = 3;
  result.estimated_probabilities["q0=up"] = wilson_interval(7, 10);
  result.estimated_probabilities["q0=down"] = wilson_interval(3, 10);
  result.marginal_probabilities["q0=up"] = wilson_interval(7, 10);
  result.metadata["master_seed"] = 42;

  nlohmann::ordered_json doc = result.to_json();
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["shots"] == 10);
  CHECK(doc["outcome_counts"]["q0=up"] == 7);
  CHECK(doc["estimated_probabilities"]["q0=up"]["p"] == doctest::Approx(0.7));
  CHECK(doc["estimated_probabilities"]["q0=up"]["count"] == 7);
  CHECK(doc["estimated_probabilities"]["q0=up"].contains("ci_low"));
  CHECK(doc["estimated_probabilities"]["q0=up"].contains("ci_high"));
  CHECK(doc["marginal_probabilities"].contains("q0=up"));
  CHECK(doc["metadata"]["master_seed"] == 42);

  // Serialization is deterministic.
  CHECK(result.to_json().dump() == doc.dump());
}
