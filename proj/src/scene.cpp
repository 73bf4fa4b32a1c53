#include "jrc/scene.hpp"

#include <algorithm>
#include <set>

namespace jrc {

void WaveformConfig::finalize() {
  if (carrier_freq <= 0) throw ConfigError("carrier_freq must be positive");
  if (samples_per_packet < 1) throw ConfigError("samples_per_packet must be >= 1");
  if (num_packets < 1) throw ConfigError("num_packets must be >= 1");
  if (sample_period <= 0) throw ConfigError("sample_period must be positive");
  wavelength = kSpeedOfLight / carrier_freq;
  propagation_const = 2.0 * kPi / wavelength;
  if (pulse_rep_interval < samples_per_packet * sample_period)
    throw ConfigError("pulse_rep_interval shorter than one packet");
}

const Target& Scene::mobile_user() const {
  for (const auto& t : targets)
    if (t.kind == TargetKind::MobileUser) return t;
  throw ValidationError("scene has no mobile user");
}

std::vector<cd> steering_vector(double theta, int n, double spacing,
                                double k_c) {
  if (n < 1) throw ConfigError("steering_vector: n must be >= 1");
  std::vector<cd> u(n);
  double phase_step = k_c * spacing * std::sin(theta);
  for (int p = 0; p < n; ++p)
    u[p] = std::polar(1.0, phase_step * p);
  return u;
}

BeamGrid make_beam_grid(double min_angle, double max_angle, double resolution) {
  if (!(min_angle < max_angle) || resolution <= 0)
    throw ConfigError("make_beam_grid: need min < max and resolution > 0");
  double steps = (max_angle - min_angle) / resolution;
  double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)) ||
      rounded < 1.0)
    throw ConfigError("make_beam_grid: span " + std::to_string(max_angle - min_angle) +
                      " rad not divisible by resolution " +
                      std::to_string(resolution) + " rad");
  BeamGrid grid;
  grid.angular_resolution = resolution;
  int count = static_cast<int>(rounded) + 1;
  grid.angles.resize(count);
  for (int i = 0; i < count; ++i) grid.angles[i] = min_angle + i * resolution;
  return grid;
}

double doppler_shift(double velocity, double wavelength) {
  if (wavelength <= 0) throw ConfigError("doppler_shift: wavelength must be > 0");
  return 2.0 * velocity / wavelength;
}

int target_beam(const Target& target, const BeamGrid& grid) {
  double az = target.azimuth();
  double lo = grid.angles.front(), hi = grid.angles.back();
  double tol = 1e-9;
  if (az < lo - tol || az > hi + tol)
    throw ValidationError("target azimuth outside beam grid span");
  double pos = (az - lo) / grid.angular_resolution;
  long below = static_cast<long>(std::floor(pos));
  below = std::clamp(below, 0L, static_cast<long>(grid.count() - 1));
  long above = std::min(below + 1, static_cast<long>(grid.count() - 1));
  double d_below = std::abs(az - grid.angles[below]);
  double d_above = std::abs(az - grid.angles[above]);
  return static_cast<int>(d_above < d_below ? above : below);  // tie: lower
}

cd array_response(double theta_point, double az, int n, double spacing,
                  double k_c) {
  double phase_step = k_c * spacing * (std::sin(az) - std::sin(theta_point));
  cd acc(0.0, 0.0);
  for (int p = 0; p < n; ++p) acc += std::polar(1.0, phase_step * p);
  return acc;
}

double spacing_or_default(double spacing, const WaveformConfig& wf) {
  if (spacing > 0) return spacing;
  if (wf.wavelength <= 0)
    throw ConfigError("waveform not finalized: wavelength is unset");
  return wf.wavelength / 2.0;
}

std::vector<PathEcho> path_params(const Scene& scene, const BeamGrid& grid,
                                  int beam_index, const WaveformConfig& wf) {
  std::vector<PathEcho> paths;
  const Target* mu = nullptr;
  for (const auto& t : scene.targets)
    if (t.kind == TargetKind::MobileUser) mu = &t;

  for (const auto& t : scene.targets) {
    if (target_beam(t, grid) != beam_index) continue;
    double r = t.range();
    PathEcho direct;
    direct.delay_s = r / kSpeedOfLight;
    direct.sample_index =
        static_cast<int>(std::llround(2.0 * direct.delay_s / wf.sample_period));
    direct.two_way_gain = t.reflectivity / (r * r);
    direct.doppler_hz =
        t.kind == TargetKind::MobileUser
            ? doppler_shift(t.radial_velocity, wf.wavelength)
            : 0.0;
    direct.tx_azimuth = direct.rx_azimuth = t.azimuth();
    paths.push_back(direct);

    // A scatterer near the MU also relays the transmit beam to the MU and
    // back: BS -> SCS -> MU -> BS and its reverse traversal. Both routes
    // share one total length, so they fold into a single entry with twice
    // the gain, carrying the MU Doppler.
    if (t.kind == TargetKind::ClutterMultipath && mu != nullptr) {
      double dx = mu->position[0] - t.position[0];
      double dy = mu->position[1] - t.position[1];
      double dz = mu->position[2] - t.position[2];
      double hop = std::sqrt(dx * dx + dy * dy + dz * dz);
      double r_mu = mu->range();
      double total = r + hop + r_mu;
      PathEcho multi;
      multi.delay_s = total / (2.0 * kSpeedOfLight);
      multi.sample_index =
          static_cast<int>(std::llround(2.0 * multi.delay_s / wf.sample_period));
      multi.two_way_gain =
          2.0 * t.reflectivity * mu->reflectivity / (r * hop * r_mu);
      multi.doppler_hz = doppler_shift(mu->radial_velocity, wf.wavelength);
      multi.tx_azimuth = t.azimuth();
      multi.rx_azimuth = mu->azimuth();
      paths.push_back(multi);
    }
  }
  return paths;
}

void validate_scene(const Scene& scene, const BeamGrid& grid) {
  int mu_count = 0;
  std::set<int> occupied;
  for (const auto& t : scene.targets) {
    if (t.kind == TargetKind::MobileUser) {
      ++mu_count;
      if (t.radial_velocity == 0.0)
        throw ValidationError("mobile user must have nonzero radial velocity");
    } else if (t.radial_velocity != 0.0) {
      throw ValidationError("static scatterers must have zero velocity");
    }
    if (t.reflectivity <= 0)
      throw ValidationError("target reflectivity must be positive");
    if (t.range() >= scene.max_range)
      throw ValidationError("target beyond the processed range window");
    int beam = target_beam(t, grid);  // throws if outside span
    if (!occupied.insert(beam).second)
      throw ValidationError("two targets share beam " + std::to_string(beam));
  }
  if (mu_count != 1)
    throw ValidationError("scene must contain exactly one mobile user");
}

}  // namespace jrc
