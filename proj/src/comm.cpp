#include "jrc/comm.hpp"

#include <algorithm>
#include <cmath>

namespace jrc {

namespace {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double db_of(double linear) { return 10.0 * std::log10(linear); }

// Mean SNR contributions per beam with unit comm noise. The MU hears the
// beam either directly (its own beam) or relayed by a multipath scatterer
// occupying the probed beam; its receive weights stay matched to the direct
// BS arrival.
double unit_noise_mean_snr(const Scene& scene, const BeamGrid& grid,
                           int beam_index, const ArrayConfig& arrays,
                           const WaveformConfig& wf) {
  if (beam_index < 0 || beam_index >= grid.count())
    throw ConfigError("beam index outside the grid");
  const Target& mu = scene.mobile_user();
  double d_bs = spacing_or_default(arrays.element_spacing_bs, wf);
  double d_mu = spacing_or_default(arrays.element_spacing_mu, wf);
  double theta = grid.angles[beam_index];

  // Arrival azimuths in the MU's frame (its array sits parallel to the
  // BS's, so the same atan2 convention applies).
  double az_bs_at_mu = std::atan2(-mu.position[1], -mu.position[0]);

  for (const auto& t : scene.targets) {
    if (target_beam(t, grid) != beam_index) continue;
    if (t.kind == TargetKind::MobileUser) {
      double af_bs = std::abs(array_response(theta, t.azimuth(),
                                             arrays.num_elements_bs, d_bs,
                                             wf.propagation_const));
      double r = t.range();
      double af_mu = arrays.num_elements_mu;  // genie alignment, exact match
      return af_bs * af_bs * af_mu * af_mu * wf.tx_energy / (r * r);
    }
    if (t.kind == TargetKind::ClutterMultipath) {
      double af_bs = std::abs(array_response(theta, t.azimuth(),
                                             arrays.num_elements_bs, d_bs,
                                             wf.propagation_const));
      double dx = mu.position[0] - t.position[0];
      double dy = mu.position[1] - t.position[1];
      double dz = mu.position[2] - t.position[2];
      double hop = std::sqrt(dx * dx + dy * dy + dz * dz);
      double az_scs_at_mu = std::atan2(-dy, -dx);
      double af_mu = std::abs(array_response(az_bs_at_mu, az_scs_at_mu,
                                             arrays.num_elements_mu, d_mu,
                                             wf.propagation_const));
      double gain = t.reflectivity / (t.range() * hop);
      return af_bs * af_bs * gain * gain * af_mu * af_mu * wf.tx_energy;
    }
    return 0.0;  // plain clutter reflects nothing toward the MU
  }
  return 0.0;
}

}  // namespace

double snr_to_reward(double snr_db, double lo_db, double hi_db) {
  if (!(lo_db < hi_db)) throw ConfigError("reward window requires lo < hi");
  double clipped = std::clamp(snr_db, lo_db, hi_db);
  return (clipped - lo_db) / (hi_db - lo_db);
}

double ber_16qam(double snr_linear) {
  if (snr_linear < 0) throw ConfigError("ber_16qam: negative SNR");
  double ber = 0.75 * q_function(std::sqrt(snr_linear / 5.0));
  return std::clamp(ber, 0.0, 0.5);
}

double throughput(const std::vector<double>& bers, int bits_per_slot,
                  double slot_duration) {
  if (bers.empty()) throw ConfigError("throughput: empty BER list");
  if (bits_per_slot <= 0 || slot_duration <= 0)
    throw ConfigError("throughput: D and T_d must be positive");
  double sum = 0.0;
  for (double b : bers) sum += b;
  double mean = sum / static_cast<double>(bers.size());
  return (1.0 - mean) * bits_per_slot / slot_duration;
}

double mean_downlink_snr(const Scene& scene, const BeamGrid& grid,
                         int beam_index, const ArrayConfig& arrays,
                         const WaveformConfig& wf) {
  return unit_noise_mean_snr(scene, grid, beam_index, arrays, wf) /
         scene.noise_power_comm;
}

double downlink_snr(const Scene& scene, const BeamGrid& grid, double theta,
                    const ArrayConfig& arrays, const WaveformConfig& wf,
                    RandomStream& rng) {
  int beam = -1;
  for (int i = 0; i < grid.count(); ++i)
    if (std::abs(grid.angles[i] - theta) <= 1e-12) beam = i;
  if (beam < 0) throw ConfigError("downlink_snr: theta is not a grid angle");
  return mean_downlink_snr(scene, grid, beam, arrays, wf) * rng.exponential();
}

double comm_noise_for_snr(const Scene& scene, const BeamGrid& grid,
                          const ArrayConfig& arrays, const WaveformConfig& wf,
                          double snr_db) {
  const Target& mu = scene.mobile_user();
  double numerator =
      unit_noise_mean_snr(scene, grid, target_beam(mu, grid), arrays, wf);
  if (numerator <= 0) throw ValidationError("MU beam carries no signal");
  return numerator / std::pow(10.0, snr_db / 10.0);
}

namespace {

// E[reward] under Rayleigh fading power F ~ Exp(1): Simpson integration of
// reward(mean * F) with F = -ln(u), u uniform on (0,1).
double expected_reward_fading(double mean_snr, const LinkParams& p) {
  auto g = [&](double u) {
    double f = -std::log(u);
    double snr = mean_snr * f;
    double db = snr > 0 ? db_of(snr) : p.snr_lo_db - 1.0;
    return snr_to_reward(db, p.snr_lo_db, p.snr_hi_db);
  };
  const int n = 1 << 16;
  double h = 1.0 / n;
  double acc = 1.0 + g(1.0);  // u = 0 endpoint: F = inf, reward clamps to 1
  for (int i = 1; i < n; ++i) acc += g(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

LinkTruth link_truth(const Scene& scene, const BeamGrid& grid,
                     const ArrayConfig& arrays, const WaveformConfig& wf,
                     const LinkParams& params) {
  LinkTruth truth;
  int n = grid.count();
  truth.mean_snr.resize(n);
  truth.has_path.resize(n);
  truth.mean_reward.resize(n);
  for (int k = 0; k < n; ++k) {
    double snr = mean_downlink_snr(scene, grid, k, arrays, wf);
    truth.mean_snr[k] = snr;
    truth.has_path[k] = snr > 0.0;
    if (snr <= 0.0) {
      truth.mean_reward[k] = 0.0;
    } else if (params.fading) {
      truth.mean_reward[k] = expected_reward_fading(snr, params);
    } else {
      truth.mean_reward[k] =
          snr_to_reward(db_of(snr), params.snr_lo_db, params.snr_hi_db);
    }
  }
  truth.best_arm = target_beam(scene.mobile_user(), grid);
  for (int k = 0; k < n; ++k) {
    if (k == truth.best_arm) continue;
    if (truth.mean_snr[k] >= truth.mean_snr[truth.best_arm])
      throw ValidationError(
          "scene violates the link model: a beam other than the MU's "
          "carries at least as much mean SNR");
  }
  return truth;
}

LinkReport link_slot(const LinkTruth& truth, const LinkParams& params,
                     int beam_index, int slot, std::uint64_t fading_seed) {
  if (beam_index < 0 ||
      beam_index >= static_cast<int>(truth.mean_snr.size()))
    throw ConfigError("link_slot: beam index outside the grid");
  LinkReport rep;
  rep.slot = slot;
  rep.beam_index = beam_index;
  if (!truth.has_path[beam_index]) {
    rep.snr_linear = std::pow(10.0, params.no_path_floor_db / 10.0);
    rep.snr_db = params.no_path_floor_db;
    rep.reward = snr_to_reward(rep.snr_db, params.snr_lo_db, params.snr_hi_db);
    rep.ber = 0.5;
    return rep;
  }
  double fade =
      params.fading
          ? exponential_at(seed_of(fading_seed, static_cast<std::uint64_t>(slot)))
          : 1.0;
  rep.snr_linear = truth.mean_snr[beam_index] * fade;
  rep.snr_db = db_of(rep.snr_linear);
  rep.reward = snr_to_reward(rep.snr_db, params.snr_lo_db, params.snr_hi_db);
  rep.ber = ber_16qam(rep.snr_linear);
  return rep;
}

}  // namespace jrc
