#pragma once
#include <optional>

#include "jrc/rng.hpp"
#include "jrc/waveform.hpp"

namespace jrc {

// Fast-time x packet samples for one beam, column per packet.
struct RadarCube {
  int beam_index = 0;
  int fast_len = 0;  // M_rx
  int num_packets = 0;
  std::vector<cd> data;  // column-major, data[q*fast_len + m]

  cd& at(int m, int q) { return data[q * fast_len + m]; }
  const cd& at(int m, int q) const { return data[q * fast_len + m]; }
};

struct CfarParams {
  int num_training = 16;
  int num_guard = 2;
  int os_rank = 12;    // k-th smallest of the training cells, 1-based
  double scale = 0.0;  // alpha; 0 means calibrate from pfa at startup
  double pfa = 1e-3;
};

struct MusicParams {
  int subarray = 0;  // 0 means ceil(Q/2)+1
  int model_order = 1;
  int oversample = 8;  // search-grid refinement under the readout step
};

struct RadarConfig {
  CfarParams cfar;
  MusicParams music;
  int gate_slots = 9;  // T_RSP charged by both gates
};

struct Peak {
  int range_bin = 0;
  double range_m = 0.0;
  double amplitude = 0.0;
  std::optional<double> doppler_hz;  // filled by the Doppler gate readout
};

struct DetectionReport {
  int beam_index = 0;
  std::vector<Peak> peaks;
};

struct GateResult {
  std::vector<int> arms;  // ascending beam indices
  int gate_slots = 0;
  std::vector<DetectionReport> reports;  // one per beam with detections
};

int range_bins(const Scene& scene, const WaveformConfig& wf);

// Post-matched-filter MU-return SNR of `snr_db` back-computed to a per-sample
// noise power. Infinite snr_db maps to exactly zero noise.
double radar_noise_for_snr(const Scene& scene, const BeamGrid& grid,
                           const WaveformConfig& wf, const ArrayConfig& arrays,
                           double snr_db);

RadarCube simulate_radar_return(const Scene& scene, const BeamGrid& grid,
                                int beam_index, const GolayPair& pair,
                                const WaveformConfig& wf,
                                const ArrayConfig& arrays, RandomStream& rng);

// Cross-correlation with the conjugated reference per packet; rows are range
// cells 0..fast_len-M, columns packets.
struct RangeProfiles {
  int num_cells = 0;
  int num_packets = 0;
  std::vector<cd> data;  // data[q*num_cells + n]
  cd& at(int n, int q) { return data[q * num_cells + n]; }
  const cd& at(int n, int q) const { return data[q * num_cells + n]; }
};

RangeProfiles matched_filter(const RadarCube& cube, const Packet& reference);

// Detection statistic: root mean square across packets per cell.
std::vector<double> integrate_packets(const RangeProfiles& profiles);

struct CfarDetection {
  int bin = 0;
  double amplitude = 0.0;
};

std::vector<CfarDetection> os_cfar(const std::vector<double>& profile,
                                   const CfarParams& params);

double music_doppler(const std::vector<cd>& slow_time,
                     const WaveformConfig& wf, double grid_resolution_hz,
                     int model_order, int subarray_len = 0);

GateResult amplitude_gate(const Scene& scene, const BeamGrid& grid,
                          const WaveformConfig& wf, const ArrayConfig& arrays,
                          const RadarConfig& cfg, std::uint64_t gate_seed);

GateResult doppler_gate(const Scene& scene, const BeamGrid& grid,
                        const WaveformConfig& wf, const ArrayConfig& arrays,
                        const RadarConfig& cfg, double velocity_resolution,
                        std::uint64_t gate_seed);

// Monte Carlo threshold calibration on pure-noise cells so that
// P(cell >= scale * order statistic) = pfa for the deployed statistic.
double calibrate_cfar_scale(const CfarParams& params, int num_packets,
                            double pfa, long long num_cells,
                            std::uint64_t seed);

// Empirical false-alarm rate of a calibrated detector on fresh noise.
double cfar_false_alarm_rate(const CfarParams& params, int num_packets,
                             long long num_cells, std::uint64_t seed);

}  // namespace jrc
