#include "jrc/radar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace jrc {

int range_bins(const Scene& scene, const WaveformConfig& wf) {
  double roundtrip = 2.0 * scene.max_range / kSpeedOfLight;
  return static_cast<int>(std::floor(roundtrip / wf.sample_period)) + 1;
}

namespace {

cd beam_echo_amplitude(const PathEcho& path, double theta,
                       const WaveformConfig& wf, const ArrayConfig& arrays) {
  double d = spacing_or_default(arrays.element_spacing_bs, wf);
  cd tx = array_response(theta, path.tx_azimuth, arrays.num_elements_bs, d,
                         wf.propagation_const);
  cd rx = array_response(theta, path.rx_azimuth, arrays.num_elements_bs, d,
                         wf.propagation_const);
  return path.two_way_gain * tx * rx;
}

}  // namespace

double radar_noise_for_snr(const Scene& scene, const BeamGrid& grid,
                           const WaveformConfig& wf, const ArrayConfig& arrays,
                           double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  const Target& mu = scene.mobile_user();
  int beam = target_beam(mu, grid);
  auto paths = path_params(scene, grid, beam, wf);
  double gain = 0.0;
  for (const auto& p : paths) {
    if (p.doppler_hz != 0.0 || paths.size() == 1) {
      gain = std::abs(beam_echo_amplitude(p, grid.angles[beam], wf, arrays));
      break;
    }
  }
  if (gain <= 0.0) throw ValidationError("cannot reference radar SNR: no MU return");
  double snr_lin = std::pow(10.0, snr_db / 10.0);
  double m_es = wf.samples_per_packet * wf.tx_energy;
  return gain * gain * m_es / snr_lin;
}

RadarCube simulate_radar_return(const Scene& scene, const BeamGrid& grid,
                                int beam_index, const GolayPair& pair,
                                const WaveformConfig& wf,
                                const ArrayConfig& arrays, RandomStream& rng) {
  int m_len = wf.samples_per_packet;
  int fast = m_len + range_bins(scene, wf) - 1 + 1;
  RadarCube cube;
  cube.beam_index = beam_index;
  cube.fast_len = fast;
  cube.num_packets = wf.num_packets;
  cube.data.assign(static_cast<size_t>(fast) * wf.num_packets, cd(0, 0));

  double amp_scale = std::sqrt(wf.tx_energy);
  auto paths = path_params(scene, grid, beam_index, wf);
  for (const auto& path : paths) {
    cd amp = beam_echo_amplitude(path, grid.angles[beam_index], wf, arrays);
    if (path.sample_index + m_len > fast)
      throw ValidationError("echo beyond the processed range window");
    for (int q = 0; q < wf.num_packets; ++q) {
      cd rot = std::polar(1.0, -2.0 * kPi * path.doppler_hz * (q + 1) *
                                   wf.pulse_rep_interval);
      cd scale = amp * rot * amp_scale;
      for (int m = 0; m < m_len; ++m)
        cube.at(path.sample_index + m, q) +=
            scale * static_cast<double>(pair.seq_a[m]);
    }
  }

  if (scene.noise_power_radar > 0.0) {
    double s = std::sqrt(scene.noise_power_radar / 2.0);
    for (int q = 0; q < wf.num_packets; ++q)
      for (int m = 0; m < fast; ++m)
        cube.at(m, q) += cd(s * rng.gaussian(), s * rng.gaussian());
  }
  return cube;
}

RangeProfiles matched_filter(const RadarCube& cube, const Packet& reference) {
  int m_len = static_cast<int>(reference.samples.size());
  if (m_len > cube.fast_len)
    throw ConfigError("matched_filter: reference longer than fast-time window");
  RangeProfiles out;
  out.num_cells = cube.fast_len - m_len + 1;
  out.num_packets = cube.num_packets;
  out.data.assign(static_cast<size_t>(out.num_cells) * out.num_packets,
                  cd(0, 0));
  for (int q = 0; q < cube.num_packets; ++q) {
    const cd* col = &cube.data[static_cast<size_t>(q) * cube.fast_len];
    for (int n = 0; n < out.num_cells; ++n) {
      cd acc(0, 0);
      for (int m = 0; m < m_len; ++m)
        acc += col[n + m] * std::conj(reference.samples[m]);
      out.at(n, q) = acc;
    }
  }
  return out;
}

std::vector<double> integrate_packets(const RangeProfiles& profiles) {
  std::vector<double> mag(profiles.num_cells, 0.0);
  for (int q = 0; q < profiles.num_packets; ++q)
    for (int n = 0; n < profiles.num_cells; ++n)
      mag[n] += std::norm(profiles.at(n, q));
  for (auto& v : mag) v = std::sqrt(v / profiles.num_packets);
  return mag;
}

namespace {

// Training cells for cell i: nearest non-guard cells on both sides, spilling
// to the far side when the window hits a profile edge.
void gather_training(const std::vector<double>& profile, int i,
                     const CfarParams& p, std::vector<double>& out) {
  out.clear();
  int n = static_cast<int>(profile.size());
  for (int d = p.num_guard + 1; static_cast<int>(out.size()) < p.num_training;
       ++d) {
    int lo = i - d, hi = i + d;
    bool any = false;
    if (lo >= 0) {
      out.push_back(profile[lo]);
      any = true;
    }
    if (hi < n && static_cast<int>(out.size()) < p.num_training) {
      out.push_back(profile[hi]);
      any = true;
    }
    if (!any && lo < 0 && hi >= n) break;
  }
}

double os_threshold(std::vector<double>& training, const CfarParams& p) {
  int k = std::min(p.os_rank, static_cast<int>(training.size()));
  std::nth_element(training.begin(), training.begin() + (k - 1),
                   training.end());
  return p.scale * training[k - 1];
}

}  // namespace

std::vector<CfarDetection> os_cfar(const std::vector<double>& profile,
                                   const CfarParams& params) {
  int n = static_cast<int>(profile.size());
  if (n <= params.num_training + 2 * params.num_guard + 1)
    throw ConfigError("os_cfar: profile shorter than the CFAR window");
  if (params.os_rank < 1 || params.os_rank > params.num_training)
    throw ConfigError("os_cfar: os_rank out of range");
  if (params.scale <= 0) throw ConfigError("os_cfar: scale not calibrated");

  std::vector<CfarDetection> hits;
  std::vector<double> training;
  training.reserve(params.num_training);
  for (int i = 0; i < n; ++i) {
    gather_training(profile, i, params, training);
    double gamma = os_threshold(training, params);
    if (profile[i] > 0.0 && profile[i] >= gamma)
      hits.push_back({i, profile[i]});
  }
  return hits;
}

double music_doppler(const std::vector<cd>& slow_time,
                     const WaveformConfig& wf, double grid_resolution_hz,
                     int model_order, int subarray_len) {
  int q = static_cast<int>(slow_time.size());
  if (model_order < 1) throw ConfigError("music_doppler: model_order must be >= 1");
  if (q < model_order + 2)
    throw ConfigError("music_doppler: need at least model_order + 2 packets");
  if (grid_resolution_hz <= 0)
    throw ConfigError("music_doppler: grid resolution must be positive");

  int sub = subarray_len > 0 ? subarray_len : (q + 1) / 2 + 1;
  sub = std::clamp(sub, model_order + 1, q);
  int snapshots = q - sub + 1;

  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(sub, sub);
  Eigen::VectorXcd x(sub);
  for (int s = 0; s < snapshots; ++s) {
    for (int l = 0; l < sub; ++l) x(l) = slow_time[s + l];
    r += x * x.adjoint();
  }
  r /= static_cast<double>(snapshots);

  // forward-backward averaging: R <- (R + J conj(R) J) / 2
  Eigen::MatrixXcd rb(sub, sub);
  for (int i = 0; i < sub; ++i)
    for (int j = 0; j < sub; ++j)
      rb(i, j) = std::conj(r(sub - 1 - i, sub - 1 - j));
  r = 0.5 * (r + rb);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  int noise_dim = sub - model_order;
  Eigen::MatrixXcd en = es.eigenvectors().leftCols(noise_dim);

  double f_max = 1.0 / (2.0 * wf.pulse_rep_interval);
  long k_max = static_cast<long>(std::floor(f_max / grid_resolution_hz));
  double best_f = 0.0;
  double best_null = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd a(sub);
  for (long k = -k_max; k <= k_max; ++k) {
    double f = k * grid_resolution_hz;
    for (int l = 0; l < sub; ++l)
      a(l) = std::polar(1.0, -2.0 * kPi * f * l * wf.pulse_rep_interval);
    double null_power = (en.adjoint() * a).squaredNorm();
    if (null_power < best_null) {
      best_null = null_power;
      best_f = f;
    }
  }
  return best_f;
}

namespace {

struct BeamScan {
  RangeProfiles profiles;
  std::vector<CfarDetection> detections;
};

BeamScan scan_beam(const Scene& scene, const BeamGrid& grid, int beam,
                   const GolayPair& pair, const Packet& reference,
                   const WaveformConfig& wf, const ArrayConfig& arrays,
                   const CfarParams& cfar, std::uint64_t gate_seed) {
  RandomStream rng(seed_of(gate_seed, kDomainRadarBeam, beam));
  RadarCube cube =
      simulate_radar_return(scene, grid, beam, pair, wf, arrays, rng);
  BeamScan scan;
  scan.profiles = matched_filter(cube, reference);
  scan.detections = os_cfar(integrate_packets(scan.profiles), cfar);
  return scan;
}

}  // namespace

GateResult amplitude_gate(const Scene& scene, const BeamGrid& grid,
                          const WaveformConfig& wf, const ArrayConfig& arrays,
                          const RadarConfig& cfg, std::uint64_t gate_seed) {
  GolayPair pair = golay_pair(wf.samples_per_packet);
  Packet reference = build_packet(pair, 1, wf, true);
  GateResult result;
  result.gate_slots = cfg.gate_slots;
  for (int beam = 0; beam < grid.count(); ++beam) {
    BeamScan scan = scan_beam(scene, grid, beam, pair, reference, wf, arrays,
                              cfg.cfar, gate_seed);
    if (scan.detections.empty()) continue;
    result.arms.push_back(beam);
    DetectionReport report;
    report.beam_index = beam;
    for (const auto& det : scan.detections) {
      Peak peak;
      peak.range_bin = det.bin;
      peak.range_m = det.bin * wf.sample_period * kSpeedOfLight / 2.0;
      peak.amplitude = det.amplitude;
      report.peaks.push_back(peak);
    }
    result.reports.push_back(std::move(report));
  }
  return result;
}

GateResult doppler_gate(const Scene& scene, const BeamGrid& grid,
                        const WaveformConfig& wf, const ArrayConfig& arrays,
                        const RadarConfig& cfg, double velocity_resolution,
                        std::uint64_t gate_seed) {
  if (velocity_resolution <= 0)
    throw ConfigError("doppler_gate: velocity resolution must be positive");
  GolayPair pair = golay_pair(wf.samples_per_packet);
  Packet reference = build_packet(pair, 1, wf, true);
  double step = doppler_shift(velocity_resolution, wf.wavelength);
  double fine = step / std::max(1, cfg.music.oversample);

  GateResult result;
  result.gate_slots = cfg.gate_slots;
  for (int beam = 0; beam < grid.count(); ++beam) {
    BeamScan scan = scan_beam(scene, grid, beam, pair, reference, wf, arrays,
                              cfg.cfar, gate_seed);
    if (scan.detections.empty()) continue;
    DetectionReport report;
    report.beam_index = beam;
    bool moving = false;
    std::vector<cd> slow(wf.num_packets);
    for (const auto& det : scan.detections) {
      for (int q = 0; q < wf.num_packets; ++q)
        slow[q] = scan.profiles.at(det.bin, q);
      double f_fine = music_doppler(slow, wf, fine, cfg.music.model_order,
                                    cfg.music.subarray);
      // Doppler readout at the configured velocity resolution: counts of
      // whole resolution steps contained in the estimate. A shift smaller
      // than one step reads as zero.
      double steps_contained =
          std::trunc((std::abs(f_fine) + 0.25 * fine) / step);
      double f_read = std::copysign(steps_contained * step, f_fine);
      Peak peak;
      peak.range_bin = det.bin;
      peak.range_m = det.bin * wf.sample_period * kSpeedOfLight / 2.0;
      peak.amplitude = det.amplitude;
      peak.doppler_hz = f_read;
      report.peaks.push_back(peak);
      if (std::abs(f_read) >= step / 2.0) moving = true;
    }
    if (moving) {
      result.arms.push_back(beam);
      result.reports.push_back(std::move(report));
    }
  }
  return result;
}

namespace {

// Pure-noise cell statistics with the deployed integration, plus the
// per-cell ratio to its OS threshold base.
std::vector<double> noise_cell_ratios(const CfarParams& params,
                                      int num_packets, long long num_cells,
                                      std::uint64_t seed) {
  RandomStream rng(seed_of(seed, kDomainNoiseCal));
  int margin = params.num_training + params.num_guard + 2;
  long long total = num_cells + 2 * margin;
  std::vector<double> profile(total);
  for (auto& cellv : profile) {
    double acc = 0.0;
    for (int q = 0; q < num_packets; ++q) {
      double re = rng.gaussian(), im = rng.gaussian();
      acc += re * re + im * im;
    }
    cellv = std::sqrt(acc / (2.0 * num_packets));
  }
  CfarParams unit = params;
  unit.scale = 1.0;
  std::vector<double> ratios;
  ratios.reserve(num_cells);
  std::vector<double> training;
  training.reserve(params.num_training);
  for (long long i = margin; i < margin + num_cells; ++i) {
    gather_training(profile, static_cast<int>(i), unit, training);
    double base = os_threshold(training, unit);
    ratios.push_back(profile[i] / base);
  }
  return ratios;
}

}  // namespace

double calibrate_cfar_scale(const CfarParams& params, int num_packets,
                            double pfa, long long num_cells,
                            std::uint64_t seed) {
  if (pfa <= 0 || pfa >= 1) throw ConfigError("calibrate-cfar: pfa in (0,1)");
  if (num_cells < 1000) throw ConfigError("calibrate-cfar: too few cells");
  auto ratios = noise_cell_ratios(params, num_packets, num_cells, seed);
  std::sort(ratios.begin(), ratios.end());
  long long idx = static_cast<long long>(
      std::llround((1.0 - pfa) * static_cast<double>(ratios.size())));
  idx = std::clamp<long long>(idx, 0, static_cast<long long>(ratios.size()) - 1);
  return ratios[idx];
}

double cfar_false_alarm_rate(const CfarParams& params, int num_packets,
                             long long num_cells, std::uint64_t seed) {
  if (params.scale <= 0) throw ConfigError("cfar_false_alarm_rate: scale unset");
  auto ratios = noise_cell_ratios(params, num_packets, num_cells, seed);
  long long hits = 0;
  for (double r : ratios)
    if (r >= params.scale) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ratios.size());
}

}  // namespace jrc
