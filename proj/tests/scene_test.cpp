#include <cmath>

#include "doctest.h"
#include "jrc/scene.hpp"

using namespace jrc;

namespace {

WaveformConfig test_waveform() {
  WaveformConfig wf;
  wf.finalize();
  return wf;
}

Scene baseline_scene() {
  Scene scene;
  Target mu;
  mu.kind = TargetKind::MobileUser;
  mu.position = {50, 20, 0};
  mu.radial_velocity = 3.0;
  scene.targets.push_back(mu);
  Target scs1;
  scs1.kind = TargetKind::ClutterDirect;
  scs1.position = {34.472, -28.925, 0};
  scene.targets.push_back(scs1);
  Target scs2;
  scs2.kind = TargetKind::ClutterMultipath;
  scs2.position = {49.5, 21.9, 0};
  scene.targets.push_back(scs2);
  return scene;
}

BeamGrid grid41() {
  double deg = kPi / 180.0;
  return make_beam_grid(-80 * deg, 80 * deg, 4 * deg);
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("steering vector boresight is all ones") {
  WaveformConfig wf = test_waveform();
  auto v = steering_vector(0.0, 4, wf.wavelength / 2, wf.propagation_const);
  REQUIRE(v.size() == 4);
  for (const auto& e : v) {
    CHECK(e.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("steering vector at 30 degrees, half-wavelength spacing") {
  WaveformConfig wf = test_waveform();
  auto v = steering_vector(30 * kPi / 180.0, 2, wf.wavelength / 2,
                           wf.propagation_const);
  CHECK(std::abs(v[0] - cd(1, 0)) < 1e-12);
  CHECK(std::abs(v[1] - cd(0, 1)) < 1e-12);
}

TEST_CASE("steering vector of negated angle is the conjugate") {
  WaveformConfig wf = test_waveform();
  double theta = 0.6143;
  auto a = steering_vector(theta, 8, wf.wavelength / 2, wf.propagation_const);
  auto b = steering_vector(-theta, 8, wf.wavelength / 2, wf.propagation_const);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - std::conj(b[i])) < 1e-12);
}

TEST_CASE("steering vector entries are unit modulus") {
  WaveformConfig wf = test_waveform();
  auto v = steering_vector(-1.1, 32, wf.wavelength / 2, wf.propagation_const);
  for (const auto& e : v) CHECK(std::abs(std::abs(e) - 1.0) < 1e-12);
}

TEST_CASE("beam grid counts") {
  double deg = kPi / 180.0;
  CHECK(make_beam_grid(-80 * deg, 80 * deg, 4 * deg).count() == 41);
  CHECK(make_beam_grid(-80 * deg, 80 * deg, 2 * deg).count() == 81);
}

TEST_CASE("beam grid spacing is uniform") {
  BeamGrid grid = grid41();
  for (int i = 0; i + 1 < grid.count(); ++i)
    CHECK(grid.angles[i + 1] - grid.angles[i] ==
          doctest::Approx(grid.angular_resolution).epsilon(1e-12));
}

TEST_CASE("degenerate span is rejected") {
  double deg = kPi / 180.0;
  CHECK_THROWS_AS(make_beam_grid(0, 1 * deg, 4 * deg), ConfigError);
}

TEST_CASE("doppler shift") {
  CHECK(doppler_shift(0, 0.005) == 0.0);
  CHECK(doppler_shift(3, 0.005) == doctest::Approx(1200.0));
  CHECK(doppler_shift(-3, 0.005) == doctest::Approx(-1200.0));
  CHECK(doppler_shift(7 * 2.5, 0.005) ==
        doctest::Approx(2.5 * doppler_shift(7, 0.005)));
}

TEST_CASE("target beam assignment") {
  BeamGrid grid = grid41();
  Target t;
  t.position = {50, 0, 0};
  CHECK(target_beam(t, grid) == 20);  // the 0-degree beam
  t.position = {50, 20, 0};           // azimuth ~21.8 degrees
  CHECK(target_beam(t, grid) == 25);  // the 20-degree beam
}

TEST_CASE("target beam midway tie goes to the lower index") {
  BeamGrid grid = grid41();
  double az = -78.0 * kPi / 180.0;  // exactly between beams 0 and 1
  Target t;
  t.position = {50 * std::cos(az), 50 * std::sin(az), 0};
  CHECK(target_beam(t, grid) == 0);
}

TEST_CASE("path params: empty beam gives no paths") {
  WaveformConfig wf = test_waveform();
  CHECK(path_params(baseline_scene(), grid41(), 0, wf).empty());
}

TEST_CASE("path params: MU direct return") {
  WaveformConfig wf = test_waveform();
  auto paths = path_params(baseline_scene(), grid41(), 25, wf);
  REQUIRE(paths.size() == 1);
  double r = std::sqrt(50.0 * 50 + 20 * 20);
  CHECK(paths[0].delay_s == doctest::Approx(r / kSpeedOfLight).epsilon(1e-12));
  CHECK(paths[0].sample_index == 45);  // round(2r / (c Ts)), Ts = 8 ns
  CHECK(paths[0].two_way_gain == doctest::Approx(1.0 / (r * r)));
  CHECK(paths[0].doppler_hz ==
        doctest::Approx(doppler_shift(3.0, wf.wavelength)));
}

TEST_CASE("path params: multipath beam carries direct plus MU-Doppler echo") {
  WaveformConfig wf = test_waveform();
  Scene scene = baseline_scene();
  auto paths = path_params(scene, grid41(), 26, wf);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].doppler_hz == 0.0);
  CHECK(paths[1].doppler_hz ==
        doctest::Approx(doppler_shift(3.0, wf.wavelength)));
  double r_s = std::sqrt(49.5 * 49.5 + 21.9 * 21.9);
  double hop = std::sqrt(0.5 * 0.5 + 1.9 * 1.9);
  double r_mu = std::sqrt(50.0 * 50 + 20 * 20);
  CHECK(paths[1].delay_s ==
        doctest::Approx((r_s + hop + r_mu) / (2 * kSpeedOfLight)));
  CHECK(paths[1].two_way_gain ==
        doctest::Approx(2.0 / (r_s * hop * r_mu)));
  CHECK(paths[1].tx_azimuth == doctest::Approx(std::atan2(21.9, 49.5)));
  CHECK(paths[1].rx_azimuth == doctest::Approx(std::atan2(20.0, 50.0)));
}

TEST_CASE("path params: no Doppler on clutter-only beams, Doppler on the MU beam") {
  WaveformConfig wf = test_waveform();
  Scene scene = baseline_scene();
  for (const auto& p : path_params(scene, grid41(), 10, wf))
    CHECK(p.doppler_hz == 0.0);
  bool mu_doppler = false;
  for (const auto& p : path_params(scene, grid41(), 25, wf))
    mu_doppler |= p.doppler_hz != 0.0;
  CHECK(mu_doppler);
}

TEST_CASE("scene validation") {
  BeamGrid grid = grid41();
  Scene ok = baseline_scene();
  CHECK_NOTHROW(validate_scene(ok, grid));

  Scene no_mu = ok;
  no_mu.targets.erase(no_mu.targets.begin());
  CHECK_THROWS_AS(validate_scene(no_mu, grid), ValidationError);

  Scene static_mu = ok;
  static_mu.targets[0].radial_velocity = 0.0;
  CHECK_THROWS_AS(validate_scene(static_mu, grid), ValidationError);

  Scene moving_clutter = ok;
  moving_clutter.targets[1].radial_velocity = 1.0;
  CHECK_THROWS_AS(validate_scene(moving_clutter, grid), ValidationError);

  Scene shared_beam = ok;
  shared_beam.targets[1].position = {50, 19.2, 0};  // lands in the MU beam
  CHECK_THROWS_AS(validate_scene(shared_beam, grid), ValidationError);

  Scene out_of_range = ok;
  out_of_range.targets[1].position = {90, -70, 0};
  CHECK_THROWS_AS(validate_scene(out_of_range, grid), ValidationError);
}

TEST_CASE("waveform config consistency checks") {
  WaveformConfig wf;
  wf.finalize();
  CHECK(wf.wavelength * wf.carrier_freq ==
        doctest::Approx(kSpeedOfLight).epsilon(1e-9));
  WaveformConfig bad;
  bad.pulse_rep_interval = 1e-7;  // shorter than M * Ts
  CHECK_THROWS_AS(bad.finalize(), ConfigError);
}

}  // TEST_SUITE
