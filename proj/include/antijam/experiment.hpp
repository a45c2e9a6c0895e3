#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "antijam/oracle.hpp"
#include "antijam/scenario.hpp"
#include "antijam/scenario_io.hpp"
#include "antijam/sla.hpp"

namespace antijam {

enum class Mode { Run, Oracle, SweepChannels, SweepPower, Compare };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Run: return "run";
    case Mode::Oracle: return "oracle";
    case Mode::SweepChannels: return "sweep-channels";
    case Mode::SweepPower: return "sweep-power";
    case Mode::Compare: return "compare";
  }
  return "?";
}

/// A fully resolved experiment: scenario, mode, seeds, sweep grids and
/// learning configuration.
struct ExperimentSpec {
  Mode mode = Mode::Run;
  std::string scenario_path;
  Scenario scenario;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<int> channel_sweep = {2, 3, 4, 5, 6};
  std::vector<double> pj_grid = {10, 20, 30, 40, 50};
  std::vector<double> pn_grid = {5, 10, 15, 20};
  std::string out_dir = "out";
  LearningConfig learning;
  int workers = 1;
  int random_draws = 10'000;
  std::uint64_t oracle_cap = 10'000'000;
};

struct ExperimentLoadResult {
  std::optional<ExperimentSpec> spec;
  std::vector<std::string> errors;

  bool ok() const { return spec.has_value() && errors.empty(); }
};

/// Loads the scenario behind an experiment and returns a spec with default
/// settings. Scenario parse errors and validation violations are all
/// reported together.
inline ExperimentLoadResult load_experiment(const std::string& scenario_path) {
  ExperimentLoadResult out;
  ScenarioParseResult parsed = parse_scenario_file(scenario_path);
  out.errors = parsed.errors;
  if (!parsed.scenario) return out;
  auto violations = validate_scenario(*parsed.scenario);
  out.errors.insert(out.errors.end(), violations.begin(), violations.end());
  if (!out.errors.empty()) return out;
  ExperimentSpec spec;
  spec.scenario_path = scenario_path;
  spec.scenario = std::move(*parsed.scenario);
  out.spec = std::move(spec);
  return out;
}

/// Mode-aware validation of a resolved spec; empty result means runnable.
inline std::vector<std::string> validate_experiment(const ExperimentSpec& spec) {
  std::vector<std::string> v = validate_learning_config(spec.learning);
  const bool stochastic = spec.mode != Mode::Oracle;
  if (stochastic && spec.seeds.empty()) {
    v.push_back("seed list must not be empty for stochastic modes");
  }
  if ((spec.mode == Mode::SweepChannels || spec.mode == Mode::Compare) &&
      spec.channel_sweep.empty()) {
    v.push_back("channel sweep list must not be empty");
  }
  for (int m : spec.channel_sweep) {
    if (m < 2) v.push_back("channel sweep values must be at least 2");
  }
  if (spec.mode == Mode::SweepPower && (spec.pj_grid.empty() || spec.pn_grid.empty())) {
    v.push_back("power grids must not be empty");
  }
  for (double p : spec.pj_grid) {
    if (p < 0.0) v.push_back("jammer power grid values must be nonnegative");
  }
  for (double p : spec.pn_grid) {
    if (!(p > 0.0)) v.push_back("UAV power grid values must be positive");
  }
  if (spec.workers < 1) v.push_back("workers must be at least 1");
  if (spec.random_draws < 1) v.push_back("random_draws must be at least 1");
  return v;
}

/// One summary row: a (sweep point, seed, algorithm) outcome. total_loss is
/// the mission total (summed over periods).
struct SummaryRecord {
  std::string mode;
  int channels = 0;
  double p_jammer = 0.0;
  double p_uav = 0.0;
  std::uint64_t seed = 0;
  std::string algorithm;
  double total_loss = 0.0;
  int epochs = 0;
  int slots = 0;
  bool converged = false;
  std::string se_channels;
};

struct ExperimentArtifacts {
  std::vector<SummaryRecord> records;
  std::optional<RunResult> traced_run;  // run mode: traces of the first seed
  std::vector<std::string> errors;      // per-point notes (e.g. oracle cap hits)
};

namespace detail {

constexpr std::uint64_t kDomainRandomBaseline = 0x72616e64;  // per-period streams
constexpr std::uint64_t kDomainNoncooperative = 0x6e636f70;

inline std::string join_channels(const std::vector<int>& channels) {
  std::string out;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(channels[i]);
  }
  return out;
}

inline double first_uav_power(const Scenario& s) {
  return s.p_uav.empty() ? 0.0 : s.p_uav.front();
}

/// Runs `task(i)` for i in [0, count) on `workers` threads. Tasks must write
/// only to their own result slots.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      task(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(workers)));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline SummaryRecord proposed_record(const ExperimentSpec& spec, const Scenario& scn,
                                     std::uint64_t seed) {
  LearningConfig cfg = spec.learning;
  cfg.seed = seed;
  cfg.record_traces = false;
  RunResult run = run_all_periods(scn, cfg);
  SummaryRecord rec;
  rec.mode = mode_name(spec.mode);
  rec.channels = scn.n_channels;
  rec.p_jammer = scn.p_jammer;
  rec.p_uav = first_uav_power(scn);
  rec.seed = seed;
  rec.algorithm = "proposed";
  rec.total_loss = run.total_loss_sum();
  rec.epochs = run.epochs_sum();
  rec.slots = run.slots_sum();
  bool converged = run.all_jammer_converged();
  std::vector<int> jammer_channels;
  for (const auto& p : run.periods) {
    jammer_channels.push_back(p.final_action.jammer_channel);
    converged = converged && p.response_converged;
  }
  rec.converged = converged;
  rec.se_channels = join_channels(jammer_channels);
  return rec;
}

/// Mission-total mean loss of uniform random play, averaged over draws
/// period by period.
inline double random_baseline_loss(const Scenario& scn, std::uint64_t seed, int draws) {
  double mission = 0.0;
  for (int z = 1; z <= scn.n_periods; ++z) {
    PeriodContext ctx = make_period_context(scn, z);
    Rng rng(derive_seed(seed, kDomainRandomBaseline, static_cast<std::uint64_t>(z)));
    double sum = 0.0;
    for (int d = 0; d < draws; ++d) {
      sum += total_loss(ctx, random_policy(ctx, rng));
    }
    mission += sum / draws;
  }
  return mission;
}

struct OraclePointSummary {
  bool ok = false;
  std::string error;
  double best_loss_sum = 0.0;
  double worst_loss_sum = 0.0;
  bool checks_pass = true;
  std::vector<int> se_channels;
};

inline OraclePointSummary oracle_point(const ExperimentSpec& spec, const Scenario& scn) {
  OraclePointSummary out;
  try {
    for (int z = 1; z <= scn.n_periods; ++z) {
      PeriodContext ctx = make_period_context(scn, z);
      StackelbergReport rep = solve_stackelberg(ctx, NeSelector::BestNe, spec.oracle_cap);
      const StackelbergChannelEval& at_se =
          rep.per_channel[static_cast<std::size_t>(rep.se_channel - 1)];
      out.best_loss_sum += at_se.best_loss;
      out.worst_loss_sum += at_se.worst_loss;
      out.checks_pass = out.checks_pass && rep.leader_cannot_improve &&
                        rep.followers_deviation_proof;
      out.se_channels.push_back(rep.se_channel);
    }
    out.ok = true;
  } catch (const oracle_cap_error& e) {
    out.error = e.what();
  }
  return out;
}

inline double noncoop_loss(const Scenario& scn, const std::vector<int>& se_channels,
                           std::uint64_t seed, bool& converged) {
  double mission = 0.0;
  converged = true;
  for (int z = 1; z <= scn.n_periods; ++z) {
    PeriodContext ctx = make_period_context(scn, z);
    Rng rng(derive_seed(seed, kDomainNoncooperative, static_cast<std::uint64_t>(z)));
    SelfishResult selfish =
        noncooperative_reference(ctx, se_channels[static_cast<std::size_t>(z - 1)], rng);
    converged = converged && selfish.converged;
    mission += total_loss(ctx, JointAction{selfish.uav_channels,
                                           se_channels[static_cast<std::size_t>(z - 1)]});
  }
  return mission;
}

}  // namespace detail

/// `run` mode: one learning run per seed; the first seed also carries traces.
inline ExperimentArtifacts run_single(const ExperimentSpec& spec) {
  ExperimentArtifacts out;
  out.records.resize(spec.seeds.size());
  detail::parallel_for(spec.seeds.size(), spec.workers, [&](std::size_t i) {
    out.records[i] = detail::proposed_record(spec, spec.scenario, spec.seeds[i]);
  });
  LearningConfig cfg = spec.learning;
  cfg.seed = spec.seeds.front();
  cfg.record_traces = true;
  out.traced_run = run_all_periods(spec.scenario, cfg);
  return out;
}

/// `oracle` mode: equilibrium structure of the scenario as-is. Throws
/// oracle_cap_error when the profile space exceeds the cap.
inline ExperimentArtifacts run_oracle(const ExperimentSpec& spec) {
  ExperimentArtifacts out;
  detail::OraclePointSummary oracle = detail::oracle_point(spec, spec.scenario);
  if (!oracle.ok) throw oracle_cap_error(oracle.error);
  for (const char* algo : {"best_ne", "worst_ne"}) {
    SummaryRecord rec;
    rec.mode = mode_name(spec.mode);
    rec.channels = spec.scenario.n_channels;
    rec.p_jammer = spec.scenario.p_jammer;
    rec.p_uav = detail::first_uav_power(spec.scenario);
    rec.seed = 0;
    rec.algorithm = algo;
    rec.total_loss = std::string(algo) == "best_ne" ? oracle.best_loss_sum
                                                    : oracle.worst_loss_sum;
    rec.converged = oracle.checks_pass;
    rec.se_channels = detail::join_channels(oracle.se_channels);
    out.records.push_back(std::move(rec));
  }
  return out;
}

/// `sweep-channels` mode: learning outcome per channel count and seed.
inline ExperimentArtifacts run_sweep_channels(const ExperimentSpec& spec) {
  ExperimentArtifacts out;
  const std::size_t points = spec.channel_sweep.size();
  const std::size_t seeds = spec.seeds.size();
  out.records.resize(points * seeds);
  detail::parallel_for(points * seeds, spec.workers, [&](std::size_t i) {
    const std::size_t p = i / seeds;
    const std::size_t s = i % seeds;
    Scenario scn = spec.scenario.with_channels(spec.channel_sweep[p]);
    out.records[i] = detail::proposed_record(spec, scn, spec.seeds[s]);
  });
  return out;
}

/// `sweep-power` mode: learning outcome over the (jammer power, UAV power)
/// grid, jammer power as the outer axis.
inline ExperimentArtifacts run_power_sweep(const ExperimentSpec& spec) {
  ExperimentArtifacts out;
  const std::size_t nj = spec.pj_grid.size();
  const std::size_t nn = spec.pn_grid.size();
  const std::size_t seeds = spec.seeds.size();
  out.records.resize(nj * nn * seeds);
  detail::parallel_for(nj * nn * seeds, spec.workers, [&](std::size_t i) {
    const std::size_t cell = i / seeds;
    const std::size_t s = i % seeds;
    const std::size_t j = cell / nn;
    const std::size_t n = cell % nn;
    Scenario scn = with_powers(spec.scenario, spec.pj_grid[j], spec.pn_grid[n]);
    out.records[i] = detail::proposed_record(spec, scn, spec.seeds[s]);
  });
  return out;
}

/// `compare` mode: per channel count and seed, the learned outcome next to
/// the equilibrium oracle, the uniform-random baseline and the selfish
/// reference. Oracle cap failures are recorded per point and skip only the
/// rows that need the oracle.
inline ExperimentArtifacts run_compare(const ExperimentSpec& spec) {
  ExperimentArtifacts out;
  const std::size_t points = spec.channel_sweep.size();
  const std::size_t seeds = spec.seeds.size();

  std::vector<Scenario> scenarios;
  scenarios.reserve(points);
  for (int m : spec.channel_sweep) scenarios.push_back(spec.scenario.with_channels(m));

  std::vector<detail::OraclePointSummary> oracle(points);
  detail::parallel_for(points, spec.workers, [&](std::size_t p) {
    oracle[p] = detail::oracle_point(spec, scenarios[p]);
  });

  struct Cell {
    std::vector<SummaryRecord> rows;
  };
  std::vector<Cell> cells(points * seeds);
  detail::parallel_for(points * seeds, spec.workers, [&](std::size_t i) {
    const std::size_t p = i / seeds;
    const std::size_t s = i % seeds;
    const Scenario& scn = scenarios[p];
    const std::uint64_t seed = spec.seeds[s];
    Cell& cell = cells[i];

    cell.rows.push_back(detail::proposed_record(spec, scn, seed));
    SummaryRecord base = cell.rows.front();
    base.algorithm.clear();
    base.total_loss = 0.0;
    base.epochs = 0;
    base.slots = 0;
    base.converged = true;
    base.se_channels.clear();

    if (oracle[p].ok) {
      SummaryRecord rec = base;
      rec.algorithm = "best_ne";
      rec.total_loss = oracle[p].best_loss_sum;
      rec.converged = oracle[p].checks_pass;
      rec.se_channels = detail::join_channels(oracle[p].se_channels);
      cell.rows.push_back(rec);
      rec.algorithm = "worst_ne";
      rec.total_loss = oracle[p].worst_loss_sum;
      cell.rows.push_back(rec);
    }
    {
      SummaryRecord rec = base;
      rec.algorithm = "random";
      rec.total_loss = detail::random_baseline_loss(scn, seed, spec.random_draws);
      cell.rows.push_back(rec);
    }
    if (oracle[p].ok) {
      SummaryRecord rec = base;
      rec.algorithm = "noncooperative";
      bool converged = false;
      rec.total_loss = detail::noncoop_loss(scn, oracle[p].se_channels, seed, converged);
      rec.converged = converged;
      rec.se_channels = detail::join_channels(oracle[p].se_channels);
      cell.rows.push_back(rec);
    }
  });

  for (std::size_t p = 0; p < points; ++p) {
    if (!oracle[p].ok) {
      out.errors.push_back("channels=" + std::to_string(spec.channel_sweep[p]) + ": " +
                           oracle[p].error);
    }
  }
  for (auto& cell : cells) {
    for (auto& row : cell.rows) out.records.push_back(std::move(row));
  }
  return out;
}

inline ExperimentArtifacts run_experiment(const ExperimentSpec& spec) {
  switch (spec.mode) {
    case Mode::Run: return run_single(spec);
    case Mode::Oracle: return run_oracle(spec);
    case Mode::SweepChannels: return run_sweep_channels(spec);
    case Mode::SweepPower: return run_power_sweep(spec);
    case Mode::Compare: return run_compare(spec);
  }
  return {};
}

}  // namespace antijam
