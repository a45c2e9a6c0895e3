#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "antijam/game.hpp"
#include "antijam/rng.hpp"
#include "antijam/scenario.hpp"

namespace antijam {

/// Probability vector over channels for one learner. probs[m-1] is the
/// probability of selecting channel m.
struct MixedStrategy {
  std::vector<double> probs;

  static MixedStrategy uniform(int m) {
    return MixedStrategy{std::vector<double>(static_cast<std::size_t>(m), 1.0 / m)};
  }

  /// Highest-probability channel; ties resolve to the lowest index.
  int argmax() const {
    int best = 1;
    for (std::size_t i = 1; i < probs.size(); ++i) {
      if (probs[i] > probs[static_cast<std::size_t>(best - 1)]) {
        best = static_cast<int>(i) + 1;
      }
    }
    return best;
  }

  double max_prob() const {
    double best = 0.0;
    for (double p : probs) {
      if (p > best) best = p;
    }
    return best;
  }

  bool valid(double tol = 1e-12) const {
    double sum = 0.0;
    for (double p : probs) {
      if (p < -tol || p > 1.0 + tol) return false;
      sum += p;
    }
    return std::abs(sum - 1.0) <= tol;
  }
};

/// Step sizes, convergence thresholds, iteration caps and the run seed.
///
/// The leader learns over epochs, the followers over slots nested inside each
/// epoch. Follower strategies persist across epochs by default; after the
/// leader's strategy settles, a response pass re-settles the followers
/// against the committed channel by sequential channel re-selection (see
/// run_period).
struct LearningConfig {
  double b1 = 0.2;   // follower step size, in (0,1)
  double b2 = 0.3;   // leader step size, in (0,1)
  double q_threshold = 0.999;        // leader convergence probability
  double inner_q_threshold = 0.999;  // follower convergence probability
  int max_epochs = 500;
  int max_slots = 300;
  std::uint64_t seed = 1;
  bool reset_per_epoch = false;      // restart follower strategies every epoch
  bool final_response_phase = true;  // re-settle followers on the committed channel
  bool record_traces = false;
};

inline std::vector<std::string> validate_learning_config(const LearningConfig& c) {
  std::vector<std::string> v;
  if (!(c.b1 > 0.0 && c.b1 < 1.0)) v.push_back("b1 must be in (0,1)");
  if (!(c.b2 > 0.0 && c.b2 < 1.0)) v.push_back("b2 must be in (0,1)");
  if (!(c.q_threshold > 0.5 && c.q_threshold < 1.0)) {
    v.push_back("q_threshold must be in (0.5,1)");
  }
  if (!(c.inner_q_threshold > 0.5 && c.inner_q_threshold < 1.0)) {
    v.push_back("inner_q_threshold must be in (0.5,1)");
  }
  if (c.max_epochs < 1) v.push_back("max_epochs must be at least 1");
  if (c.max_slots < 1) v.push_back("max_slots must be at least 1");
  return v;
}

/// Draws a channel index according to the strategy; consumes exactly one
/// uniform draw.
inline int sample_channel(const MixedStrategy& strategy, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  const int m = static_cast<int>(strategy.probs.size());
  for (int c = 1; c <= m; ++c) {
    cum += strategy.probs[static_cast<std::size_t>(c - 1)];
    if (u < cum) return c;
  }
  return m;  // guards the u ~ 1 - eps edge when the sum rounds below 1
}

/// Maps a raw payoff into [0,1] against its declared bound.
inline double normalize_utility(double raw, double bound) {
  if (bound <= 0.0) return 0.0;  // degenerate payoff scale (e.g. jamming disabled)
  if (raw < -1e-9 * bound || raw > bound * (1.0 + 1e-9)) {
    throw std::domain_error("utility " + std::to_string(raw) +
                            " violates its declared bound " + std::to_string(bound));
  }
  const double u = raw / bound;
  return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
}

/// Reward-inaction update: the chosen channel's probability moves toward 1
/// proportionally to the normalized payoff, every other channel shrinks by
/// the same factor. Preserves the simplex exactly in real arithmetic.
inline MixedStrategy sla_update(const MixedStrategy& strategy, int chosen,
                                double normalized_utility, double step_size) {
  MixedStrategy out = strategy;
  const double scale = step_size * normalized_utility;
  for (std::size_t i = 0; i < out.probs.size(); ++i) {
    if (static_cast<int>(i) + 1 == chosen) {
      out.probs[i] += scale * (1.0 - out.probs[i]);
    } else {
      out.probs[i] -= scale * out.probs[i];
    }
  }
  return out;
}

namespace detail {
inline void sla_update_inplace(MixedStrategy& strategy, int chosen,
                               double normalized_utility, double step_size) {
  const double scale = step_size * normalized_utility;
  for (std::size_t i = 0; i < strategy.probs.size(); ++i) {
    if (static_cast<int>(i) + 1 == chosen) {
      strategy.probs[i] += scale * (1.0 - strategy.probs[i]);
    } else {
      strategy.probs[i] -= scale * strategy.probs[i];
    }
  }
}
}  // namespace detail

/// Per-iteration probability rows for one learner.
struct LearnerTrace {
  std::vector<std::vector<double>> rows;
};

/// Everything the trace CSVs need for one period.
struct PeriodTrace {
  LearnerTrace jammer;               // one row per epoch, post-update
  std::vector<LearnerTrace> uavs;    // one row per slot, post-update
  std::vector<double> slot_utility;  // common follower utility per slot
  std::vector<double> epoch_jammer_utility;
  std::vector<double> epoch_loss;    // system loss at the epoch's realized action
};

struct PhaseStat {
  int slots = 0;
  bool converged = false;
};

struct UavPhaseResult {
  std::vector<MixedStrategy> strategies;
  std::vector<int> channels;  // per-UAV argmax after the phase
  int slots_used = 0;
  bool converged = false;
};

/// Runs follower slots against a fixed jammer channel: every UAV samples a
/// channel, the common utility is evaluated, and every UAV reinforces its
/// choice. Stops once every UAV's top probability exceeds the threshold or
/// the slot cap is hit. Always runs at least one slot.
inline UavPhaseResult run_uav_phase(const PeriodContext& ctx, int jammer_channel,
                                    std::vector<MixedStrategy> strategies,
                                    double step, double inner_q, int max_slots,
                                    std::span<Rng> rngs, PeriodTrace* trace = nullptr) {
  const int n = ctx.scenario->n_uavs;
  const double offset = ctx.scenario->utility_offset;
  JointAction action;
  action.uav_channels.assign(static_cast<std::size_t>(n), 1);
  action.jammer_channel = jammer_channel;

  UavPhaseResult out;
  bool converged = false;
  int slots = 0;
  while (!converged && slots < max_slots) {
    ++slots;
    for (int i = 0; i < n; ++i) {
      action.uav_channels[static_cast<std::size_t>(i)] =
          sample_channel(strategies[static_cast<std::size_t>(i)], rngs[static_cast<std::size_t>(i)]);
    }
    const double utility = uav_utility(ctx, action, 1);
    const double norm = normalize_utility(utility, offset);
    for (int i = 0; i < n; ++i) {
      detail::sla_update_inplace(strategies[static_cast<std::size_t>(i)],
                                 action.uav_channels[static_cast<std::size_t>(i)], norm, step);
    }
    if (trace) {
      for (int i = 0; i < n; ++i) {
        trace->uavs[static_cast<std::size_t>(i)].rows.push_back(
            strategies[static_cast<std::size_t>(i)].probs);
      }
      trace->slot_utility.push_back(utility);
    }
    converged = true;
    for (int i = 0; i < n && converged; ++i) {
      converged = strategies[static_cast<std::size_t>(i)].max_prob() > inner_q;
    }
  }

  out.channels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.channels.push_back(strategies[static_cast<std::size_t>(i)].argmax());
  }
  out.strategies = std::move(strategies);
  out.slots_used = slots;
  out.converged = converged;
  return out;
}

/// Fixed point of sequential channel re-selection under the common utility.
/// Every strict move lowers the system loss, and the loss takes finitely many
/// values, so the rounds terminate; the cap only guards the degenerate case.
struct SettleResult {
  std::vector<int> uav_channels;
  bool converged = false;
  int rounds = 0;
};

inline SettleResult settle_followers(const PeriodContext& ctx,
                                     std::vector<int> uav_channels, int jammer_channel,
                                     int max_rounds = 1000) {
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  SettleResult out;
  JointAction a{std::move(uav_channels), jammer_channel};
  for (int round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int current = a.uav_channels[static_cast<std::size_t>(i)];
      double best = total_loss(ctx, a);
      int best_channel = current;
      for (int c = 1; c <= m; ++c) {
        if (c == current) continue;
        a.uav_channels[static_cast<std::size_t>(i)] = c;
        const double loss = total_loss(ctx, a);
        if (loss < best) {
          best = loss;
          best_channel = c;
        }
      }
      a.uav_channels[static_cast<std::size_t>(i)] = best_channel;
      if (best_channel != current) changed = true;
    }
    if (!changed) {
      out.converged = true;
      out.rounds = round;
      break;
    }
    out.rounds = round;
  }
  out.uav_channels = std::move(a.uav_channels);
  return out;
}

/// Converged outcome of one period plus convergence statistics and optional
/// traces.
struct PeriodResult {
  int period = 0;
  JointAction final_action;
  double final_total_loss = 0.0;
  int epochs_used = 0;
  bool jammer_converged = false;
  bool response_converged = true;
  int response_rounds = 0;
  int slots_total = 0;
  std::vector<PhaseStat> phase_stats;  // one entry per epoch's follower phase
  MixedStrategy jammer_strategy;
  std::vector<MixedStrategy> uav_strategies;  // learned strategies at termination
  std::optional<PeriodTrace> trace;
};

/// Leader-epoch loop. Each epoch the jammer draws the channel the followers
/// face, the followers run their slot loop, and the jammer reinforces a
/// second draw scored against the followers' settled channels. After the
/// leader terminates, the followers re-settle against the committed channel
/// through best-response rounds; the exact-potential structure of their
/// subgame makes those rounds land on a pure equilibrium.
inline PeriodResult run_period(const PeriodContext& ctx, const LearningConfig& cfg,
                               Rng& jammer_rng, std::span<Rng> uav_rngs) {
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  PeriodResult out;
  out.period = ctx.period;
  if (cfg.record_traces) {
    out.trace.emplace();
    out.trace->uavs.resize(static_cast<std::size_t>(n));
  }
  PeriodTrace* trace = out.trace ? &*out.trace : nullptr;

  MixedStrategy jammer = MixedStrategy::uniform(m);
  std::vector<MixedStrategy> uavs(static_cast<std::size_t>(n), MixedStrategy::uniform(m));
  const double jammer_bound = jammer_utility_max(ctx);

  std::vector<int> settled(static_cast<std::size_t>(n), 1);
  int epoch = 0;
  bool jammer_converged = false;
  while (epoch < cfg.max_epochs && !jammer_converged) {
    ++epoch;
    const int faced = sample_channel(jammer, jammer_rng);
    UavPhaseResult phase =
        run_uav_phase(ctx, faced, std::move(uavs), cfg.b1, cfg.inner_q_threshold,
                      cfg.max_slots, uav_rngs, trace);
    uavs = std::move(phase.strategies);
    settled = phase.channels;
    out.phase_stats.push_back({phase.slots_used, phase.converged});
    out.slots_total += phase.slots_used;

    const int probe = sample_channel(jammer, jammer_rng);
    JointAction scored{settled, probe};
    const double ju = jammer_utility(ctx, scored);
    detail::sla_update_inplace(jammer, probe, normalize_utility(ju, jammer_bound), cfg.b2);
    if (trace) {
      trace->jammer.rows.push_back(jammer.probs);
      trace->epoch_jammer_utility.push_back(ju);
      trace->epoch_loss.push_back(total_loss(ctx, JointAction{settled, faced}));
    }
    jammer_converged = jammer.max_prob() > cfg.q_threshold;
    if (cfg.reset_per_epoch && !jammer_converged) {
      uavs.assign(static_cast<std::size_t>(n), MixedStrategy::uniform(m));
    }
  }

  const int committed = jammer.argmax();
  if (cfg.final_response_phase) {
    SettleResult response = settle_followers(ctx, settled, committed);
    settled = response.uav_channels;
    out.response_converged = response.converged;
    out.response_rounds = response.rounds;
  }

  out.final_action = JointAction{settled, committed};
  out.final_total_loss = total_loss(ctx, out.final_action);
  out.epochs_used = epoch;
  out.jammer_converged = jammer_converged;
  out.jammer_strategy = std::move(jammer);
  out.uav_strategies = std::move(uavs);
  return out;
}

/// Aggregated outcome over all periods of a run.
struct RunResult {
  LearningConfig config;
  std::vector<PeriodResult> periods;

  double total_loss_sum() const {
    double sum = 0.0;
    for (const auto& p : periods) sum += p.final_total_loss;
    return sum;
  }
  int epochs_sum() const {
    int sum = 0;
    for (const auto& p : periods) sum += p.epochs_used;
    return sum;
  }
  int slots_sum() const {
    int sum = 0;
    for (const auto& p : periods) sum += p.slots_total;
    return sum;
  }
  bool all_jammer_converged() const {
    for (const auto& p : periods) {
      if (!p.jammer_converged) return false;
    }
    return true;
  }
};

/// Stream ids inside one period: the jammer is learner 0, UAV n is learner n.
inline Rng learner_rng(std::uint64_t seed, int period, int learner) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(period),
                         static_cast<std::uint64_t>(learner)));
}

/// Runs every period independently on substreams derived from the config
/// seed, so period results do not depend on each other's draw counts.
inline RunResult run_all_periods(const Scenario& scenario, const LearningConfig& cfg) {
  {
    auto issues = validate_scenario(scenario);
    auto cfg_issues = validate_learning_config(cfg);
    issues.insert(issues.end(), cfg_issues.begin(), cfg_issues.end());
    if (!issues.empty()) {
      std::string joined;
      for (const auto& i : issues) {
        if (!joined.empty()) joined += "; ";
        joined += i;
      }
      throw std::invalid_argument(joined);
    }
  }
  RunResult result;
  result.config = cfg;
  result.periods.reserve(static_cast<std::size_t>(scenario.n_periods));
  for (int z = 1; z <= scenario.n_periods; ++z) {
    PeriodContext ctx = make_period_context(scenario, z);
    Rng jammer = learner_rng(cfg.seed, z, 0);
    std::vector<Rng> uav_rngs;
    uav_rngs.reserve(static_cast<std::size_t>(scenario.n_uavs));
    for (int n = 1; n <= scenario.n_uavs; ++n) {
      uav_rngs.push_back(learner_rng(cfg.seed, z, n));
    }
    result.periods.push_back(run_period(ctx, cfg, jammer, uav_rngs));
  }
  return result;
}

}  // namespace antijam
