#pragma once

#include <cstdint>
#include <vector>

#include "jrc/comm.hpp"
#include "jrc/scene.hpp"

namespace jrc {

// Reward source for one trial: the bandit only sees arm count, per-slot
// reward/BER observations, and (for the genie baseline and regret) the true
// arm means.
class BanditEnv {
 public:
  virtual ~BanditEnv() = default;
  virtual int num_arms() const = 0;
  virtual LinkReport play(int arm, int slot) = 0;
  virtual const std::vector<double>& true_means() const = 0;
};

struct BanditState {
  std::vector<long long> pulls;     // N_k over the full grid
  std::vector<double> reward_sums;  // S_k, cumulative
  long long clock = 0;              // completed slots, gate included
  long long horizon = 0;
  int gate_cost = 0;              // T_RSP slots charged up front
  std::vector<int> active_arms;   // ascending arm ids
};

constexpr int kGateSlotArm = -1;

struct SlotRecord {
  int slot = 0;  // 1-based
  int arm = kGateSlotArm;
  double reward = 0.0;
  double ber = 0.5;
  bool gate_fallback = false;  // gate came back empty; full grid restored
};

double ucb_index(const BanditState& state, int arm, long long t);
int select_arm(const BanditState& state);
void update(BanditState& state, int arm, double reward);

std::vector<SlotRecord> run_ucb_snr(BanditEnv& env, long long horizon);

// Gated variant: charges gate_slots slots of dead time, then runs the UCB
// loop over gated_arms. An empty gated set falls back to the full grid and
// marks the trace.
std::vector<SlotRecord> run_ucb_gated(BanditEnv& env, long long horizon,
                                      const std::vector<int>& gated_arms,
                                      int gate_slots);

std::vector<SlotRecord> run_random(BanditEnv& env, long long horizon,
                                   std::uint64_t pick_seed);
std::vector<SlotRecord> run_dbf(BanditEnv& env, long long horizon);

// Best-arm identification baseline: samples empirical-best plus the
// strongest challenger each round until the confidence split, then commits.
std::vector<SlotRecord> run_lucb(BanditEnv& env, long long horizon,
                                 double delta = 0.1);

// Cumulative expected-reward loss versus always playing the best arm; gate
// slots count as pulls of a zero-mean arm.
double regret(const std::vector<SlotRecord>& records,
              const std::vector<double>& true_means);
std::vector<double> cumulative_regret(const std::vector<SlotRecord>& records,
                                      const std::vector<double>& true_means);

}  // namespace jrc
