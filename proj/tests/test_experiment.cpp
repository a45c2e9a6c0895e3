#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "antijam/experiment.hpp"
#include "antijam/output.hpp"
#include "support.hpp"

using namespace antijam;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("antijam_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentSpec tiny_compare_spec() {
  auto loaded = load_experiment(testsupport::scenario_path("tiny.scenario"));
  REQUIRE(loaded.ok());
  ExperimentSpec spec = *loaded.spec;
  spec.mode = Mode::Compare;
  spec.seeds = {7};
  spec.channel_sweep = {2, 3};
  spec.random_draws = 500;
  return spec;
}

}  // namespace

TEST_CASE("run_compare records") {
  ExperimentSpec spec = tiny_compare_spec();
  ExperimentArtifacts artifacts = run_compare(spec);
  SUBCASE("cardinality is points x seeds x algorithms") {
    CHECK(artifacts.records.size() == 2 * 1 * 5);
    CHECK(artifacts.errors.empty());
  }
  SUBCASE("algorithm labels come from the fixed set") {
    for (const auto& r : artifacts.records) {
      const bool known = r.algorithm == "proposed" || r.algorithm == "best_ne" ||
                         r.algorithm == "worst_ne" || r.algorithm == "random" ||
                         r.algorithm == "noncooperative";
      CHECK(known);
      CHECK(std::isfinite(r.total_loss));
    }
  }
  SUBCASE("oracle rows bracket the proposed row") {
    double best = 0, worst = 0, proposed = 0;
    for (const auto& r : artifacts.records) {
      if (r.channels != 2) continue;
      if (r.algorithm == "best_ne") best = r.total_loss;
      if (r.algorithm == "worst_ne") worst = r.total_loss;
      if (r.algorithm == "proposed") proposed = r.total_loss;
    }
    CHECK(best <= worst);
    CHECK(proposed >= best - 1e-12);
  }
}

TEST_CASE("experiment outputs") {
  ExperimentSpec spec = tiny_compare_spec();
  ExperimentArtifacts artifacts = run_compare(spec);
  SUBCASE("summary schema and golden content") {
    auto dir = fresh_dir("golden");
    emit_outputs(spec, artifacts, dir);
    const std::string written = read_file(dir / "summary.csv");
    CHECK(written.rfind(std::string(kSummaryHeader) + "\n", 0) == 0);
#ifdef ANTIJAM_GOLDEN_DIR
    const std::string golden =
        read_file(std::filesystem::path(ANTIJAM_GOLDEN_DIR) / "summary_tiny.csv");
    CHECK(written == golden);
#endif
  }
  SUBCASE("identical runs produce byte-identical files") {
    auto dir_a = fresh_dir("det_a");
    auto dir_b = fresh_dir("det_b");
    emit_outputs(spec, run_compare(spec), dir_a);
    emit_outputs(spec, run_compare(spec), dir_b);
    CHECK(read_file(dir_a / "summary.csv") == read_file(dir_b / "summary.csv"));
  }
  SUBCASE("manifest carries version, hash and echoes the configuration") {
    nlohmann::json manifest = experiment_manifest(spec, artifacts);
    CHECK(manifest["version"] == kVersion);
    CHECK(manifest["mode"] == "compare");
    CHECK(manifest["learning"]["b1"] == 0.2);
    CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  }
  SUBCASE("run mode writes simplex-valid traces") {
    ExperimentSpec run_spec = tiny_compare_spec();
    run_spec.mode = Mode::Run;
    ExperimentArtifacts run_artifacts = run_single(run_spec);
    auto dir = fresh_dir("traces");
    emit_outputs(run_spec, run_artifacts, dir);
    const std::string trace = read_file(dir / "trace_1_jammer.csv");
    std::istringstream lines(trace);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "iteration,prob_1,prob_2");
    int rows = 0;
    while (std::getline(lines, line)) {
      std::istringstream cells(line);
      std::string cell;
      std::getline(cells, cell, ',');
      double sum = 0.0;
      while (std::getline(cells, cell, ',')) sum += std::stod(cell);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      ++rows;
    }
    CHECK(rows >= 1);
    CHECK(std::filesystem::exists(dir / "trace_1_uav1.csv"));
    CHECK(std::filesystem::exists(dir / "trace_1_uav2.csv"));
    CHECK(std::filesystem::exists(dir / "result.json"));
  }
}

TEST_CASE("sweep points are isolated") {
  ExperimentSpec both = tiny_compare_spec();
  both.mode = Mode::SweepChannels;
  both.channel_sweep = {2, 3};
  ExperimentSpec only = both;
  only.channel_sweep = {3};
  ExperimentArtifacts a = run_sweep_channels(both);
  ExperimentArtifacts b = run_sweep_channels(only);
  REQUIRE(a.records.size() == 2);
  REQUIRE(b.records.size() == 1);
  CHECK(a.records[1].total_loss == b.records[0].total_loss);
  CHECK(a.records[1].se_channels == b.records[0].se_channels);
  CHECK(a.records[1].epochs == b.records[0].epochs);
}

TEST_CASE("worker count does not change results") {
  ExperimentSpec spec = tiny_compare_spec();
  spec.seeds = {7, 8, 9};
  ExperimentSpec parallel = spec;
  parallel.workers = 3;
  ExperimentArtifacts serial_out = run_compare(spec);
  ExperimentArtifacts parallel_out = run_compare(parallel);
  REQUIRE(serial_out.records.size() == parallel_out.records.size());
  for (std::size_t i = 0; i < serial_out.records.size(); ++i) {
    CHECK(serial_out.records[i].algorithm == parallel_out.records[i].algorithm);
    CHECK(serial_out.records[i].seed == parallel_out.records[i].seed);
    CHECK(serial_out.records[i].total_loss == parallel_out.records[i].total_loss);
  }
}

TEST_CASE("power sweep") {
  auto loaded = load_experiment(testsupport::scenario_path("tiny.scenario"));
  REQUIRE(loaded.ok());
  ExperimentSpec spec = *loaded.spec;
  spec.mode = Mode::SweepPower;
  spec.seeds = {3};
  spec.pj_grid = {0.0, 20.0};
  spec.pn_grid = {10.0};
  ExperimentArtifacts artifacts = run_power_sweep(spec);
  REQUIRE(artifacts.records.size() == 2);
  SUBCASE("a powerless jammer contributes nothing to any loss") {
    Scenario off = with_powers(spec.scenario, 0.0, std::nullopt);
    PeriodContext ctx = make_period_context(off, 1);
    for (int c1 = 1; c1 <= 2; ++c1) {
      for (int c2 = 1; c2 <= 2; ++c2) {
        for (int cj = 1; cj <= 2; ++cj) {
          JointAction a{{c1, c2}, cj};
          for (int i = 1; i <= 2; ++i) {
            CHECK(malicious_interference(ctx, a, i) == 0.0);
          }
          CHECK(jammer_utility(ctx, a) == 0.0);
          JointAction away{{c1, c2}, cj == 1 ? 2 : 1};
          // with no jamming power the jammer channel cannot matter
          CHECK(total_loss(ctx, a) == total_loss(ctx, away));
        }
      }
    }
  }
  SUBCASE("records carry the grid coordinates") {
    CHECK(artifacts.records[0].p_jammer == 0.0);
    CHECK(artifacts.records[1].p_jammer == 20.0);
    CHECK(artifacts.records[0].p_uav == 10.0);
  }
}

TEST_CASE("oracle mode") {
  auto loaded = load_experiment(testsupport::scenario_path("tiny.scenario"));
  REQUIRE(loaded.ok());
  ExperimentSpec spec = *loaded.spec;
  spec.mode = Mode::Oracle;
  ExperimentArtifacts artifacts = run_oracle(spec);
  REQUIRE(artifacts.records.size() == 2);
  CHECK(artifacts.records[0].algorithm == "best_ne");
  CHECK(artifacts.records[1].algorithm == "worst_ne");
  CHECK(artifacts.records[0].total_loss <= artifacts.records[1].total_loss);
  CHECK(artifacts.records[0].converged);
  SUBCASE("cap errors surface as the dedicated exception") {
    ExperimentSpec capped = spec;
    capped.oracle_cap = 1;
    CHECK_THROWS_AS(run_oracle(capped), oracle_cap_error);
  }
}
