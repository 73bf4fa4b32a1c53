#pragma once

#include <cstdint>
#include <vector>

#include "jrc/rng.hpp"
#include "jrc/scene.hpp"

namespace jrc {

struct LinkParams {
  double snr_lo_db = -10.0;  // reward-map window
  double snr_hi_db = 40.0;
  int payload_bits = 4096;      // D, bits per downlink slot
  double slot_duration = 4e-3;  // T_d, seconds
  bool fading = true;           // per-slot Rayleigh power on the link
  double no_path_floor_db = -30.0;
};

struct LinkReport {
  int slot = 0;
  int beam_index = 0;
  double snr_linear = 0.0;
  double snr_db = 0.0;
  double reward = 0.0;  // normalized SNR in [0,1]
  double ber = 0.5;
};

// Per-beam downlink ground truth for one scene: mean SNR with the fading
// factor averaged out, and the induced mean reward (the bandit's true arm
// means).
struct LinkTruth {
  std::vector<double> mean_snr;  // linear; 0 where no path reaches the MU
  std::vector<bool> has_path;
  std::vector<double> mean_reward;
  int best_arm = -1;
};

double snr_to_reward(double snr_db, double lo_db, double hi_db);
double ber_16qam(double snr_linear);
double throughput(const std::vector<double>& bers, int bits_per_slot,
                  double slot_duration);

// Mean downlink SNR (fading averaged out) through the given beam.
double mean_downlink_snr(const Scene& scene, const BeamGrid& grid,
                         int beam_index, const ArrayConfig& arrays,
                         const WaveformConfig& wf);

// One fading realization of the downlink SNR when transmitting on the beam
// pointed at theta (must be a grid angle).
double downlink_snr(const Scene& scene, const BeamGrid& grid, double theta,
                    const ArrayConfig& arrays, const WaveformConfig& wf,
                    RandomStream& rng);

// Noise power that places the MU beam's mean SNR at snr_db.
double comm_noise_for_snr(const Scene& scene, const BeamGrid& grid,
                          const ArrayConfig& arrays, const WaveformConfig& wf,
                          double snr_db);

// Builds the truth table and checks that the MU's own beam is the strict
// SNR maximizer.
LinkTruth link_truth(const Scene& scene, const BeamGrid& grid,
                     const ArrayConfig& arrays, const WaveformConfig& wf,
                     const LinkParams& params);

// One downlink slot on the chosen beam. The fading draw is keyed by
// (fading_seed, slot) only, so algorithms compared at equal slots see the
// same channel realization.
LinkReport link_slot(const LinkTruth& truth, const LinkParams& params,
                     int beam_index, int slot, std::uint64_t fading_seed);

}  // namespace jrc
