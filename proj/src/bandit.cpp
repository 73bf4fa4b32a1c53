#include "jrc/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jrc {

double ucb_index(const BanditState& state, int arm, long long t) {
  long long n = state.pulls[arm];
  if (n < 1) throw ValidationError("ucb_index: arm has no pulls yet");
  if (t < 1) throw ValidationError("ucb_index: clock must be positive");
  double mean = state.reward_sums[arm] / static_cast<double>(n);
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                          static_cast<double>(n));
}

int select_arm(const BanditState& state) {
  for (int arm : state.active_arms)
    if (state.pulls[arm] == 0) return arm;
  long long t = state.clock + 1;
  int best = state.active_arms.front();
  double best_score = ucb_index(state, best, t);
  for (size_t i = 1; i < state.active_arms.size(); ++i) {
    int arm = state.active_arms[i];
    double score = ucb_index(state, arm, t);
    if (score > best_score) {
      best_score = score;
      best = arm;
    }
  }
  return best;
}

void update(BanditState& state, int arm, double reward) {
  if (reward < 0.0 || reward > 1.0)
    throw ValidationError("update: reward outside [0,1]");
  state.pulls[arm] += 1;
  state.reward_sums[arm] += reward;
  state.clock += 1;
}

namespace {

BanditState fresh_state(int num_arms, long long horizon,
                        std::vector<int> active, int gate_cost) {
  BanditState st;
  st.pulls.assign(num_arms, 0);
  st.reward_sums.assign(num_arms, 0.0);
  st.horizon = horizon;
  st.gate_cost = gate_cost;
  st.active_arms = std::move(active);
  return st;
}

std::vector<int> full_grid(int num_arms) {
  std::vector<int> arms(num_arms);
  std::iota(arms.begin(), arms.end(), 0);
  return arms;
}

std::vector<SlotRecord> run_ucb_loop(BanditEnv& env, long long horizon,
                                     std::vector<int> arms, int gate_slots,
                                     bool fallback) {
  if (horizon < gate_slots + static_cast<long long>(arms.size()))
    throw ConfigError("horizon too short to initialize every active arm");
  BanditState st =
      fresh_state(env.num_arms(), horizon, std::move(arms), gate_slots);
  std::vector<SlotRecord> records;
  records.reserve(horizon);
  for (int s = 1; s <= gate_slots; ++s) {
    SlotRecord rec;
    rec.slot = s;
    rec.gate_fallback = fallback;
    records.push_back(rec);
    st.clock += 1;
  }
  for (long long slot = gate_slots + 1; slot <= horizon; ++slot) {
    int arm = select_arm(st);
    LinkReport rep = env.play(arm, static_cast<int>(slot));
    records.push_back({static_cast<int>(slot), arm, rep.reward, rep.ber, false});
    update(st, arm, rep.reward);
  }
  return records;
}

}  // namespace

std::vector<SlotRecord> run_ucb_snr(BanditEnv& env, long long horizon) {
  return run_ucb_loop(env, horizon, full_grid(env.num_arms()), 0, false);
}

std::vector<SlotRecord> run_ucb_gated(BanditEnv& env, long long horizon,
                                      const std::vector<int>& gated_arms,
                                      int gate_slots) {
  bool fallback = gated_arms.empty();
  std::vector<int> arms = fallback ? full_grid(env.num_arms()) : gated_arms;
  for (int arm : arms)
    if (arm < 0 || arm >= env.num_arms())
      throw ConfigError("gated arm outside the grid");
  if (!std::is_sorted(arms.begin(), arms.end()))
    throw ConfigError("gated arms must be sorted ascending");
  if (horizon <= gate_slots + static_cast<long long>(arms.size()))
    throw ConfigError("horizon leaves no slots after the gate and init");
  return run_ucb_loop(env, horizon, std::move(arms), gate_slots, fallback);
}

std::vector<SlotRecord> run_random(BanditEnv& env, long long horizon,
                                   std::uint64_t pick_seed) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  int k = env.num_arms();
  std::vector<SlotRecord> records;
  records.reserve(horizon);
  for (long long slot = 1; slot <= horizon; ++slot) {
    double u = unit_uniform_at(
        seed_of(pick_seed, kDomainPick, static_cast<std::uint64_t>(slot)));
    int arm = std::min(k - 1, static_cast<int>(u * k));
    LinkReport rep = env.play(arm, static_cast<int>(slot));
    records.push_back({static_cast<int>(slot), arm, rep.reward, rep.ber, false});
  }
  return records;
}

std::vector<SlotRecord> run_dbf(BanditEnv& env, long long horizon) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  const auto& means = env.true_means();
  int best = static_cast<int>(
      std::max_element(means.begin(), means.end()) - means.begin());
  std::vector<SlotRecord> records;
  records.reserve(horizon);
  for (long long slot = 1; slot <= horizon; ++slot) {
    LinkReport rep = env.play(best, static_cast<int>(slot));
    records.push_back({static_cast<int>(slot), best, rep.reward, rep.ber, false});
  }
  return records;
}

std::vector<SlotRecord> run_lucb(BanditEnv& env, long long horizon,
                                 double delta) {
  int k = env.num_arms();
  if (horizon < 2LL * k)
    throw ConfigError("LUCB needs a horizon of at least 2 * num_arms");
  if (delta <= 0 || delta >= 1) throw ConfigError("LUCB confidence in (0,1)");

  std::vector<long long> pulls(k, 0);
  std::vector<double> sums(k, 0.0);
  std::vector<SlotRecord> records;
  records.reserve(horizon);
  long long slot = 0;

  auto pull = [&](int arm) {
    ++slot;
    LinkReport rep = env.play(arm, static_cast<int>(slot));
    records.push_back({static_cast<int>(slot), arm, rep.reward, rep.ber, false});
    pulls[arm] += 1;
    sums[arm] += rep.reward;
  };

  for (int arm = 0; arm < k && slot < horizon; ++arm) pull(arm);

  auto mean = [&](int arm) {
    return sums[arm] / static_cast<double>(pulls[arm]);
  };
  int committed = -1;
  long long round = 0;
  while (slot < horizon) {
    if (committed >= 0) {
      pull(committed);
      continue;
    }
    ++round;
    double radius_scale =
        std::log(1.25 * k * std::pow(static_cast<double>(round), 4) / delta);
    auto radius = [&](int arm) {
      return std::sqrt(radius_scale / (2.0 * static_cast<double>(pulls[arm])));
    };
    int best = 0;
    for (int arm = 1; arm < k; ++arm)
      if (mean(arm) > mean(best)) best = arm;
    int challenger = -1;
    double challenger_ucb = -std::numeric_limits<double>::infinity();
    for (int arm = 0; arm < k; ++arm) {
      if (arm == best) continue;
      double ucb = mean(arm) + radius(arm);
      if (ucb > challenger_ucb) {
        challenger_ucb = ucb;
        challenger = arm;
      }
    }
    if (k == 1 || mean(best) - radius(best) >= challenger_ucb) {
      committed = best;
      continue;
    }
    pull(best);
    if (slot < horizon) pull(challenger);
  }
  return records;
}

double regret(const std::vector<SlotRecord>& records,
              const std::vector<double>& true_means) {
  std::vector<double> cum = cumulative_regret(records, true_means);
  return cum.empty() ? 0.0 : cum.back();
}

std::vector<double> cumulative_regret(const std::vector<SlotRecord>& records,
                                      const std::vector<double>& true_means) {
  double best = *std::max_element(true_means.begin(), true_means.end());
  std::vector<double> cum;
  cum.reserve(records.size());
  double acc = 0.0;
  for (const auto& rec : records) {
    double mean = rec.arm == kGateSlotArm ? 0.0 : true_means[rec.arm];
    acc += best - mean;
    cum.push_back(acc);
  }
  return cum;
}

}  // namespace jrc
