#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "antijam/game.hpp"
#include "antijam/rng.hpp"

namespace antijam {

/// Raised when an exhaustive enumeration would exceed its profile cap. The
/// oracle never falls back to sampling; answers are exact or absent.
class oracle_cap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NeEntry {
  std::vector<int> uav_channels;
  double total_loss = 0.0;
  double potential_value = 0.0;
};

/// Pure equilibria of the follower game for one fixed jammer channel,
/// together with the unconstrained system-loss minimizer.
struct NeReport {
  int jammer_channel = 1;
  std::vector<NeEntry> equilibria;  // in enumeration order
  std::size_t best_index = 0;       // lowest total loss
  std::size_t worst_index = 0;      // highest total loss
  NeEntry global_optimum;

  const NeEntry& best() const { return equilibria[best_index]; }
  const NeEntry& worst() const { return equilibria[worst_index]; }
};

namespace detail {

/// Number of follower profiles, guarded against the cap (and overflow).
inline std::uint64_t profile_count_or_throw(int n, int m, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > cap / static_cast<std::uint64_t>(m)) {
      throw oracle_cap_error("profile space " + std::to_string(m) + "^" +
                             std::to_string(n) + " exceeds the enumeration cap " +
                             std::to_string(cap));
    }
    count *= static_cast<std::uint64_t>(m);
  }
  if (count > cap) {
    throw oracle_cap_error("profile space exceeds the enumeration cap " +
                           std::to_string(cap));
  }
  return count;
}

/// Profiles are ranked with UAV 1 as the most significant digit, so rank
/// order is lexicographic order of the channel vector.
inline std::vector<int> profile_of_rank(std::uint64_t rank, int n, int m) {
  std::vector<int> channels(static_cast<std::size_t>(n), 1);
  for (int i = n - 1; i >= 0; --i) {
    channels[static_cast<std::size_t>(i)] = static_cast<int>(rank % m) + 1;
    rank /= static_cast<std::uint64_t>(m);
  }
  return channels;
}

}  // namespace detail

/// Enumerates every follower profile, marking a profile as an equilibrium
/// when no single UAV can strictly lower the system loss by switching
/// channels. Losses for the profile and each deviation come from the same
/// total_loss evaluation, so the loss minimizer is deviation-proof by
/// construction, with no floating-point ambiguity.
inline NeReport enumerate_follower_ne(const PeriodContext& ctx, int jammer_channel,
                                      std::uint64_t cap = 10'000'000) {
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  const std::uint64_t count = detail::profile_count_or_throw(n, m, cap);

  std::vector<double> losses(count);
  JointAction action;
  action.uav_channels.assign(static_cast<std::size_t>(n), 1);
  action.jammer_channel = jammer_channel;
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    losses[rank] = total_loss(ctx, action);
    // odometer increment, last UAV fastest
    for (int i = n - 1; i >= 0; --i) {
      int& c = action.uav_channels[static_cast<std::size_t>(i)];
      if (c < m) {
        ++c;
        break;
      }
      c = 1;
    }
  }

  // digit weight of each UAV in the rank
  std::vector<std::uint64_t> weight(static_cast<std::size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i) {
    weight[static_cast<std::size_t>(i)] =
        weight[static_cast<std::size_t>(i + 1)] * static_cast<std::uint64_t>(m);
  }

  NeReport report;
  report.jammer_channel = jammer_channel;
  std::uint64_t best_rank = 0;
  for (std::uint64_t rank = 0; rank < count; ++rank) {
    if (losses[rank] < losses[best_rank]) best_rank = rank;
    bool equilibrium = true;
    std::uint64_t rest = rank;
    for (int i = 0; i < n && equilibrium; ++i) {
      const std::uint64_t w = weight[static_cast<std::size_t>(i)];
      const int own = static_cast<int>(rest / w) % m + 1;
      rest %= w;
      const std::uint64_t base = rank - static_cast<std::uint64_t>(own - 1) * w;
      for (int c = 1; c <= m; ++c) {
        if (c == own) continue;
        if (losses[base + static_cast<std::uint64_t>(c - 1) * w] < losses[rank]) {
          equilibrium = false;
          break;
        }
      }
    }
    if (equilibrium) {
      NeEntry entry;
      entry.uav_channels = detail::profile_of_rank(rank, n, m);
      entry.total_loss = losses[rank];
      JointAction a{entry.uav_channels, jammer_channel};
      entry.potential_value = potential(ctx, a);
      report.equilibria.push_back(std::move(entry));
    }
  }

  for (std::size_t i = 1; i < report.equilibria.size(); ++i) {
    if (report.equilibria[i].total_loss < report.equilibria[report.best_index].total_loss) {
      report.best_index = i;
    }
    if (report.equilibria[i].total_loss > report.equilibria[report.worst_index].total_loss) {
      report.worst_index = i;
    }
  }
  report.global_optimum.uav_channels = detail::profile_of_rank(best_rank, n, m);
  report.global_optimum.total_loss = losses[best_rank];
  report.global_optimum.potential_value =
      potential(ctx, JointAction{report.global_optimum.uav_channels, jammer_channel});
  return report;
}

/// Channel maximizing the jammer's payoff against a fixed follower profile;
/// ties resolve to the lowest index.
inline int jammer_best_response(const PeriodContext& ctx,
                                const std::vector<int>& uav_channels) {
  int best = 1;
  double best_utility = -std::numeric_limits<double>::infinity();
  for (int c = 1; c <= ctx.scenario->n_channels; ++c) {
    const double u = jammer_utility(ctx, JointAction{uav_channels, c});
    if (u > best_utility) {
      best_utility = u;
      best = c;
    }
  }
  return best;
}

/// Which follower equilibrium the leader is assumed to anticipate.
enum class NeSelector { BestNe, WorstNe };

struct StackelbergChannelEval {
  int jammer_channel = 1;
  std::size_t ne_count = 0;
  NeEntry selected;               // per the selector
  double jammer_utility = 0.0;    // at the selected follower response
  double best_loss = 0.0;
  double worst_loss = 0.0;
};

/// Leader-commitment solution: the channel maximizing the jammer's payoff
/// given that followers re-equilibrate against each committed channel.
struct StackelbergReport {
  NeSelector selector = NeSelector::BestNe;
  std::vector<StackelbergChannelEval> per_channel;
  int se_channel = 1;
  std::vector<int> se_uav_channels;
  double se_jammer_utility = 0.0;
  double se_total_loss = 0.0;
  // Verified on the result: the leader cannot improve over its committed
  // channel (followers re-equilibrating), and no follower can improve
  // unilaterally at the equilibrium pair.
  bool leader_cannot_improve = false;
  bool followers_deviation_proof = false;
};

inline StackelbergReport solve_stackelberg(const PeriodContext& ctx,
                                           NeSelector selector = NeSelector::BestNe,
                                           std::uint64_t cap = 10'000'000) {
  StackelbergReport report;
  report.selector = selector;
  for (int c = 1; c <= ctx.scenario->n_channels; ++c) {
    NeReport ne = enumerate_follower_ne(ctx, c, cap);
    StackelbergChannelEval eval;
    eval.jammer_channel = c;
    eval.ne_count = ne.equilibria.size();
    eval.selected = selector == NeSelector::BestNe ? ne.best() : ne.worst();
    eval.jammer_utility = jammer_utility(ctx, JointAction{eval.selected.uav_channels, c});
    eval.best_loss = ne.best().total_loss;
    eval.worst_loss = ne.worst().total_loss;
    report.per_channel.push_back(std::move(eval));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < report.per_channel.size(); ++i) {
    if (report.per_channel[i].jammer_utility > report.per_channel[best].jammer_utility) {
      best = i;
    }
  }
  const StackelbergChannelEval& chosen = report.per_channel[best];
  report.se_channel = chosen.jammer_channel;
  report.se_uav_channels = chosen.selected.uav_channels;
  report.se_jammer_utility = chosen.jammer_utility;
  report.se_total_loss = chosen.selected.total_loss;

  report.leader_cannot_improve = true;
  for (const auto& eval : report.per_channel) {
    if (eval.jammer_utility > report.se_jammer_utility) {
      report.leader_cannot_improve = false;
    }
  }
  report.followers_deviation_proof = true;
  JointAction se_action{report.se_uav_channels, report.se_channel};
  const double se_utility = uav_utility(ctx, se_action, 1);
  for (int n = 1; n <= ctx.scenario->n_uavs && report.followers_deviation_proof; ++n) {
    JointAction moved = se_action;
    for (int c = 1; c <= ctx.scenario->n_channels; ++c) {
      if (c == se_action.uav_channels[static_cast<std::size_t>(n - 1)]) continue;
      moved.uav_channels[static_cast<std::size_t>(n - 1)] = c;
      if (uav_utility(ctx, moved, n) > se_utility) {
        report.followers_deviation_proof = false;
        break;
      }
    }
  }
  return report;
}

/// Uniform independent channel draws for every player, UAVs first.
inline JointAction random_policy(const PeriodContext& ctx, Rng& rng) {
  JointAction a;
  a.uav_channels.reserve(static_cast<std::size_t>(ctx.scenario->n_uavs));
  for (int n = 1; n <= ctx.scenario->n_uavs; ++n) {
    a.uav_channels.push_back(rng.uniform_int(1, ctx.scenario->n_channels));
  }
  a.jammer_channel = rng.uniform_int(1, ctx.scenario->n_channels);
  return a;
}

struct SelfishResult {
  std::vector<int> uav_channels;
  bool converged = false;
  int rounds = 0;
};

/// Selfish reference: each UAV minimizes its own loss by best-response
/// rounds from a random start. The selfish game carries no potential
/// guarantee, so cycling is possible and reported via the converged flag.
inline SelfishResult noncooperative_reference(const PeriodContext& ctx,
                                              int jammer_channel, Rng& rng,
                                              int max_rounds = 500) {
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  SelfishResult out;
  out.uav_channels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.uav_channels.push_back(rng.uniform_int(1, m));
  }
  JointAction a{out.uav_channels, jammer_channel};
  for (int round = 1; round <= max_rounds; ++round) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int current = a.uav_channels[static_cast<std::size_t>(i)];
      double best_loss = uav_loss(ctx, a, i + 1);
      int best_channel = current;
      for (int c = 1; c <= m; ++c) {
        if (c == current) continue;
        a.uav_channels[static_cast<std::size_t>(i)] = c;
        const double loss = uav_loss(ctx, a, i + 1);
        if (loss < best_loss) {
          best_loss = loss;
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
  }
  if (!out.converged) out.rounds = max_rounds;
  out.uav_channels = a.uav_channels;
  return out;
}

}  // namespace antijam
