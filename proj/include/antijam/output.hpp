#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "antijam/experiment.hpp"
#include "antijam/sla.hpp"
#include "antijam/version.hpp"

namespace antijam {

/// Round-trip-safe decimal form; gives byte-stable files for identical runs.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline constexpr const char* kSummaryHeader =
    "mode,channels,p_jammer,p_uav,seed,algorithm,total_loss,epochs,slots,converged,se_channels";

namespace detail {

inline std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  return out;
}

}  // namespace detail

/// Writes summary.csv with the fixed column order above, one record per row,
/// in record order.
inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<SummaryRecord>& records) {
  std::ofstream out = detail::open_or_throw(path);
  out << kSummaryHeader << '\n';
  for (const SummaryRecord& r : records) {
    out << r.mode << ',' << r.channels << ',' << format_double(r.p_jammer) << ','
        << format_double(r.p_uav) << ',' << r.seed << ',' << r.algorithm << ','
        << format_double(r.total_loss) << ',' << r.epochs << ',' << r.slots << ','
        << (r.converged ? 1 : 0) << ',' << r.se_channels << '\n';
  }
}

/// Writes trace_<period>_<learner>.csv files for every traced period of a
/// run: iteration-indexed probability rows, jammer rows per epoch, UAV rows
/// per slot.
inline std::vector<std::filesystem::path> write_traces(const std::filesystem::path& dir,
                                                       const RunResult& run) {
  std::vector<std::filesystem::path> written;
  auto write_learner = [&](const std::filesystem::path& path, const LearnerTrace& trace) {
    std::ofstream out = detail::open_or_throw(path);
    out << "iteration";
    const std::size_t m = trace.rows.empty() ? 0 : trace.rows.front().size();
    for (std::size_t c = 1; c <= m; ++c) out << ",prob_" << c;
    out << '\n';
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
      out << (i + 1);
      for (double p : trace.rows[i]) out << ',' << format_double(p);
      out << '\n';
    }
    written.push_back(path);
  };
  for (const PeriodResult& period : run.periods) {
    if (!period.trace) continue;
    const std::string z = std::to_string(period.period);
    write_learner(dir / ("trace_" + z + "_jammer.csv"), period.trace->jammer);
    for (std::size_t i = 0; i < period.trace->uavs.size(); ++i) {
      write_learner(dir / ("trace_" + z + "_uav" + std::to_string(i + 1) + ".csv"),
                    period.trace->uavs[i]);
    }
  }
  return written;
}

/// FNV-1a over the canonical parameter string; stable across runs so outputs
/// can be matched to the configuration that produced them.
inline std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json experiment_manifest(const ExperimentSpec& spec,
                                          const ExperimentArtifacts& artifacts) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["mode"] = mode_name(spec.mode);
  j["scenario"] = spec.scenario_path;
  j["seeds"] = spec.seeds;
  j["channels"] = spec.channel_sweep;
  j["pj_grid"] = spec.pj_grid;
  j["pn_grid"] = spec.pn_grid;
  j["workers"] = spec.workers;
  j["random_draws"] = spec.random_draws;
  j["oracle_cap"] = spec.oracle_cap;
  j["learning"] = {
      {"b1", spec.learning.b1},
      {"b2", spec.learning.b2},
      {"q_threshold", spec.learning.q_threshold},
      {"inner_q_threshold", spec.learning.inner_q_threshold},
      {"max_epochs", spec.learning.max_epochs},
      {"max_slots", spec.learning.max_slots},
      {"reset_per_epoch", spec.learning.reset_per_epoch},
      {"final_response_phase", spec.learning.final_response_phase},
  };
  j["errors"] = artifacts.errors;
  j["records"] = artifacts.records.size();
  j["config_hash"] = config_hash(j.dump());
  return j;
}

/// Writes summary.csv, trace files (run mode) and result.json under outdir;
/// returns the paths written.
inline std::vector<std::filesystem::path> emit_outputs(const ExperimentSpec& spec,
                                                       const ExperimentArtifacts& artifacts,
                                                       const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> written;
  const auto summary = outdir / "summary.csv";
  write_summary_csv(summary, artifacts.records);
  written.push_back(summary);
  if (artifacts.traced_run) {
    auto traces = write_traces(outdir, *artifacts.traced_run);
    written.insert(written.end(), traces.begin(), traces.end());
  }
  const auto manifest = outdir / "result.json";
  std::ofstream out = detail::open_or_throw(manifest);
  out << experiment_manifest(spec, artifacts).dump(2) << '\n';
  written.push_back(manifest);
  return written;
}

}  // namespace antijam
