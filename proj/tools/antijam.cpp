// Command-line front end: loads a scenario, runs one of the experiment
// modes and writes summary.csv / trace CSVs / result.json to the output
// directory.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "antijam/experiment.hpp"
#include "antijam/output.hpp"
#include "antijam/version.hpp"

namespace {

struct CliOptions {
  std::string scenario;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;
  std::vector<int> channels;
  std::vector<double> pj_grid;
  std::vector<double> pn_grid;
  double b1 = -1.0;
  double b2 = -1.0;
  double q = -1.0;
  int max_epochs = -1;
  int max_slots = -1;
  int workers = 1;
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--scenario", o.scenario, "scenario file")->required();
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seeds", o.seeds, "comma-separated seed list")->delimiter(',');
  cmd->add_option("--b1", o.b1, "UAV learning step size");
  cmd->add_option("--b2", o.b2, "jammer learning step size");
  cmd->add_option("--q", o.q, "convergence probability threshold");
  cmd->add_option("--max-epochs", o.max_epochs, "jammer epoch cap");
  cmd->add_option("--max-slots", o.max_slots, "UAV slot cap per epoch");
  cmd->add_option("--workers", o.workers, "concurrent workers");
}

int fail_validation(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << '\n';
  return 1;
}

int run_mode(antijam::Mode mode, const CliOptions& o) {
  auto loaded = antijam::load_experiment(o.scenario);
  if (!loaded.ok()) return fail_validation(loaded.errors);
  antijam::ExperimentSpec spec = std::move(*loaded.spec);
  spec.mode = mode;
  spec.out_dir = o.out_dir;
  spec.workers = o.workers;
  if (!o.seeds.empty()) spec.seeds = o.seeds;
  if (!o.channels.empty()) spec.channel_sweep = o.channels;
  if (!o.pj_grid.empty()) spec.pj_grid = o.pj_grid;
  if (!o.pn_grid.empty()) spec.pn_grid = o.pn_grid;
  if (o.b1 >= 0.0) spec.learning.b1 = o.b1;
  if (o.b2 >= 0.0) spec.learning.b2 = o.b2;
  if (o.q >= 0.0) {
    spec.learning.q_threshold = o.q;
    spec.learning.inner_q_threshold = o.q;
  }
  if (o.max_epochs >= 0) spec.learning.max_epochs = o.max_epochs;
  if (o.max_slots >= 0) spec.learning.max_slots = o.max_slots;

  auto violations = antijam::validate_experiment(spec);
  if (!violations.empty()) return fail_validation(violations);

  try {
    antijam::ExperimentArtifacts artifacts = antijam::run_experiment(spec);
    auto written = antijam::emit_outputs(spec, artifacts, spec.out_dir);
    std::cout << artifacts.records.size() << " records";
    for (const auto& e : artifacts.errors) std::cout << "\nnote: " << e;
    std::cout << '\n';
    for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  } catch (const antijam::oracle_cap_error& e) {
    std::cerr << "oracle error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-UAV anti-jamming channel-selection simulator"};
  app.set_version_flag("--version", antijam::kVersion);
  app.require_subcommand(1);

  CliOptions options;
  struct ModeCmd {
    const char* name;
    const char* help;
    antijam::Mode mode;
  };
  const ModeCmd modes[] = {
      {"run", "single learning runs with probability traces", antijam::Mode::Run},
      {"oracle", "exhaustive equilibrium analysis", antijam::Mode::Oracle},
      {"sweep-channels", "learning outcome versus channel count", antijam::Mode::SweepChannels},
      {"sweep-power", "learning outcome over the power grid", antijam::Mode::SweepPower},
      {"compare", "learning versus oracle and baselines", antijam::Mode::Compare},
  };
  for (const ModeCmd& m : modes) {
    CLI::App* cmd = app.add_subcommand(m.name, m.help);
    add_common(cmd, options);
    if (m.mode == antijam::Mode::SweepChannels || m.mode == antijam::Mode::Compare) {
      cmd->add_option("--channels", options.channels, "channel counts to sweep")
          ->delimiter(',');
    }
    if (m.mode == antijam::Mode::SweepPower) {
      cmd->add_option("--pj-grid", options.pj_grid, "jammer power grid")->delimiter(',');
      cmd->add_option("--pn-grid", options.pn_grid, "UAV power grid")->delimiter(',');
    }
    cmd->callback([&options, m] { std::exit(run_mode(m.mode, options)); });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}
