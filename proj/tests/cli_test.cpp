#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#ifndef SPINSIM_CLI_PATH
#error "SPINSIM_CLI_PATH must point at the built binary"
#endif
#ifndef SPINSIM_CONFIG_DIR
#error "SPINSIM_CONFIG_DIR must point at the bundled configs"
#endif

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + " \"" + SPINSIM_CLI_PATH + std::string("\" ") + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) result.out.append(buf, n);
  int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string config_path(const std::string& name) {
  return std::string(SPINSIM_CONFIG_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("calculators print machine-readable JSON on request") {
  CliResult r = run_cli("calc zeeman --g 0.44 --b0 \"5 T\" --json");
  REQUIRE(r.status == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["splitting"].get<double>() == doctest::Approx(127.344399732e-6).epsilon(1e-9));
  CHECK(doc["frequency"].get<double>() == doctest::Approx(30.791738866e9).epsilon(1e-9));

  CliResult text = run_cli("calc zeeman --g 0.44 --b0 \"5 T\"");
  REQUIRE(text.status == 0);
  CHECK(text.out.find("ueV") != std::string::npos);
}

TEST_CASE("bad quantities exit with the configuration error code") {
  CliResult r = run_cli("calc zeeman --g 0.44 --b0 \"5 s\"");
  CHECK(r.status == 2);
}

TEST_CASE("run executes an experiment file") {
  CliResult r = run_cli("run \"" + config_path("single_shot_readout.json") + "\" --shots 300");
  REQUIRE(r.status == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["shots"] == 300);
  CHECK(doc.contains("marginal_probabilities"));
}

TEST_CASE("run refuses a missing file") {
  CliResult r = run_cli("run /nonexistent/experiment.json");
  CHECK(r.status == 2);
}

TEST_CASE("run rejects malformed config files") {
  namespace fs = std::filesystem;
  fs::path bad = fs::temp_directory_path() / "spinsim_cli_bad_key.json";
  {
    std::ofstream out(bad);
    out << R"({"schema_version": 1, "protocol": [], "shotz": 5})";
  }
  CliResult r = run_cli("run \"" + bad.string() + "\"");
  CHECK(r.status == 2);
  fs::remove(bad);
}

TEST_CASE("ci mode demands an explicit seed") {
  // A seed inside the file counts as explicit, so the refusal case needs a
  // config without one.
  namespace fs = std::filesystem;
  fs::path seedless = fs::temp_directory_path() / "spinsim_cli_seedless.json";
  {
    std::ofstream out(seedless);
    out << R"({
      "schema_version": 1,
      "protocol": [
        {"type": "init", "qubit": 0, "method": "polarized_leads"},
        {"type": "measure", "qubit": 0}
      ]
    })";
  }
  std::string cfg = "\"" + seedless.string() + "\"";
  CHECK(run_cli("run " + cfg + " --ci --shots 50").status == 2);
  CHECK(run_cli("run " + cfg + " --ci --shots 50 --seed 12").status == 0);
  CHECK(run_cli("run \"" + config_path("single_shot_readout.json") + "\" --ci --shots 50").status == 0);
  fs::remove(seedless);
}

TEST_CASE("identical seeds reproduce identical bytes") {
  std::string cmd = "run \"" + config_path("swap_transfer.json") + "\" --shots 400 --seed 21";
  CliResult a = run_cli(cmd);
  CliResult b = run_cli(cmd + " --workers 4");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("validate reports the parsed shape") {
  CliResult r = run_cli("validate \"" + config_path("swap_transfer.json") + "\"");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("ok: 5 steps on 2 qubit(s)") != std::string::npos);
}

TEST_CASE("sweep prints the scan as CSV") {
  CliResult r = run_cli("sweep \"" + config_path("rabi_sweep.json") + "\"");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("parameter,value,p_estimate,ci_low,ci_high,shots\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}

TEST_CASE("relative output paths land in the requested directory") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "spinsim_cli_outdir";
  fs::create_directories(dir);
  fs::path expected = dir / "result.json";
  fs::remove(expected);

  CliResult r = run_cli("run \"" + config_path("single_shot_readout.json") +
                            "\" --shots 50 --seed 2 --out result.json",
                        "SPINSIM_OUTPUT_DIR=\"" + dir.string() + "\"");
  REQUIRE(r.status == 0);
  REQUIRE(fs::exists(expected));
  std::ifstream in(expected);
  nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc["shots"] == 50);
  fs::remove_all(dir);
}

TEST_CASE("demo-swap summarizes both phases") {
  CliResult r = run_cli("demo-swap --p-up 0.3 --shots 400 --seed 2");
  REQUIRE(r.status == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["shots"] == 800);
  CHECK(doc["metadata"]["shots_per_phase"] == 400);
  CHECK(doc["marginal_probabilities"].contains("pre:q0=up"));
  CHECK(doc["marginal_probabilities"].contains("post:q1=up"));
}
