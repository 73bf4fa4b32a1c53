#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jrc {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

using cd = std::complex<double>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArrayConfig {
  int num_elements_bs = 32;
  int num_elements_mu = 32;
  double element_spacing_bs = 0.0;  // meters; 0 means half wavelength
  double element_spacing_mu = 0.0;
};

struct WaveformConfig {
  double carrier_freq = 60e9;       // Hz
  double wavelength = 0.0;          // m, c/f_c
  double propagation_const = 0.0;   // rad/m, 2*pi/wavelength
  double sample_period = 8e-9;      // s, simulation range-bin grid
  int samples_per_packet = 128;     // M
  double pulse_rep_interval = 1e-4; // s, T_P
  int num_packets = 10;             // Q
  double tx_energy = 1.0;           // E_s, linear
  double bandwidth = 1.76e9;        // Hz, nominal signal bandwidth

  void finalize();  // derive wavelength / propagation_const, check invariants
};

enum class TargetKind { MobileUser, ClutterDirect, ClutterMultipath };

struct Target {
  TargetKind kind = TargetKind::ClutterDirect;
  std::array<double, 3> position{0, 0, 0};
  double radial_velocity = 0.0;  // m/s, toward the BS positive
  double reflectivity = 1.0;     // linear amplitude

  double range() const {
    return std::sqrt(position[0] * position[0] + position[1] * position[1] +
                     position[2] * position[2]);
  }
  double azimuth() const { return std::atan2(position[1], position[0]); }
};

struct BeamGrid {
  std::vector<double> angles;  // radians, strictly increasing
  double angular_resolution = 0.0;
  int count() const { return static_cast<int>(angles.size()); }
};

struct Scene {
  std::vector<Target> targets;
  std::array<double, 3> bs_position{0, 0, 0};
  double noise_power_radar = 0.0;  // linear, per complex sample after combining
  double noise_power_comm = 1.0;   // linear
  double radar_snr_db = 10.0;      // post-matched-filter SNR of the MU return
  double max_range = 80.0;         // m, processed range window

  const Target& mobile_user() const;
};

// One echo contribution for a beam. delay_s is the one-way delay (half the
// total traversal). tx/rx azimuths let the simulator apply the array factor
// of each end of the bounce separately; they differ only for the multipath
// entry, whose outbound and return directions are not the same.
struct PathEcho {
  double delay_s = 0.0;
  int sample_index = 0;  // round(2*delay/T_s)
  double two_way_gain = 0.0;
  double doppler_hz = 0.0;
  double tx_azimuth = 0.0;
  double rx_azimuth = 0.0;
};

std::vector<cd> steering_vector(double theta, int n, double spacing, double k_c);
BeamGrid make_beam_grid(double min_angle, double max_angle, double resolution);
double doppler_shift(double velocity, double wavelength);
int target_beam(const Target& target, const BeamGrid& grid);
std::vector<PathEcho> path_params(const Scene& scene, const BeamGrid& grid,
                                  int beam_index, const WaveformConfig& wf);

// Geometric checks: exactly one MU, targets inside the grid span and the
// range window, at most one target per beam. Throws ValidationError.
void validate_scene(const Scene& scene, const BeamGrid& grid);

// Scalar array factor sum_p exp(j*k*d*p*(sin(az) - sin(theta_point))):
// the response of a beam pointed at theta_point to a plane wave at az.
cd array_response(double theta_point, double az, int n, double spacing,
                  double k_c);

double spacing_or_default(double spacing, const WaveformConfig& wf);

}  // namespace jrc
