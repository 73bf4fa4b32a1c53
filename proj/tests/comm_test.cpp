#include <cmath>

#include "doctest.h"
#include "jrc/comm.hpp"

using namespace jrc;

namespace {

WaveformConfig test_waveform() {
  WaveformConfig wf;
  wf.finalize();
  return wf;
}

BeamGrid grid41() {
  double deg = kPi / 180.0;
  return make_beam_grid(-80 * deg, 80 * deg, 4 * deg);
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

// Gray-coded 16-QAM over AWGN, counting hard-decision bit errors.
double monte_carlo_ber(double snr_linear, long long symbols,
                       std::uint64_t seed) {
  const double levels[4] = {-3, -1, 1, 3};
  const int gray[4] = {0, 1, 3, 2};  // bits for levels[i]
  double scale = 1.0 / std::sqrt(10.0);
  double sigma = std::sqrt(1.0 / snr_linear / 2.0);  // per real dimension
  RandomStream rng(seed);
  long long bit_errors = 0;
  for (long long s = 0; s < symbols; ++s) {
    for (int dim = 0; dim < 2; ++dim) {
      int tx = static_cast<int>(rng.integer(4));
      double y = levels[tx] * scale + sigma * rng.gaussian();
      int rx = 0;
      double best = std::abs(y - levels[0] * scale);
      for (int i = 1; i < 4; ++i) {
        double d = std::abs(y - levels[i] * scale);
        if (d < best) {
          best = d;
          rx = i;
        }
      }
      int diff = gray[tx] ^ gray[rx];
      bit_errors += (diff & 1) + ((diff >> 1) & 1);
    }
  }
  return static_cast<double>(bit_errors) / (4.0 * symbols);
}

}  // namespace

TEST_SUITE("comm") {

TEST_CASE("reward map endpoints and midpoint") {
  CHECK(snr_to_reward(-10, -10, 40) == 0.0);
  CHECK(snr_to_reward(40, -10, 40) == 1.0);
  CHECK(snr_to_reward(15, -10, 40) == doctest::Approx(0.5));
  CHECK(snr_to_reward(-50, -10, 40) == 0.0);
  CHECK(snr_to_reward(90, -10, 40) == 1.0);
  CHECK_THROWS_AS(snr_to_reward(0, 10, 10), ConfigError);
}

TEST_CASE("reward map is nondecreasing") {
  double prev = -1;
  for (double db = -20; db <= 50; db += 0.5) {
    double r = snr_to_reward(db, -10, 40);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("16-qam ber limits") {
  CHECK(ber_16qam(1e9) < 1e-12);
  CHECK(ber_16qam(0.0) == doctest::Approx(0.375));
  CHECK_THROWS_AS(ber_16qam(-1.0), ConfigError);
  double prev = 1.0;
  for (double snr_db = -10; snr_db <= 30; snr_db += 1) {
    double b = ber_16qam(std::pow(10.0, snr_db / 10.0));
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("16-qam ber matches a monte carlo at 10 dB") {
  double formula = ber_16qam(10.0);
  double mc = monte_carlo_ber(10.0, 1000000, 777);
  CHECK(std::abs(formula - mc) / mc < 0.2);
}

TEST_CASE("16-qam ber matches a monte carlo at 20 dB") {
  double formula = ber_16qam(100.0);
  double mc = monte_carlo_ber(100.0, 1000000, 777);
  CHECK(std::abs(formula - mc) / mc < 0.2);
}

TEST_CASE("throughput formula") {
  std::vector<double> zeros(100, 0.0);
  CHECK(throughput(zeros, 4096, 4e-3) == doctest::Approx(1.024e6));
  std::vector<double> half(10, 0.5);
  CHECK(throughput(half, 4096, 4e-3) == doctest::Approx(0.512e6));
  std::vector<double> one(1, 1.0);
  CHECK(throughput(one, 4096, 4e-3) == 0.0);
  CHECK_THROWS_AS(throughput({}, 4096, 4e-3), ConfigError);
}

TEST_CASE("boresight mean snr matches the closed form") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene;
  Target mu;
  mu.kind = TargetKind::MobileUser;
  mu.position = {60, 0, 0};
  mu.radial_velocity = 3.0;
  scene.targets.push_back(mu);
  scene.noise_power_comm = 1.0;
  double snr = mean_downlink_snr(scene, grid, 20, ArrayConfig{}, wf);
  double expect = 32.0 * 32 * 32 * 32 / (60.0 * 60);
  CHECK(snr == doctest::Approx(expect).epsilon(1e-9));
  CHECK(mean_downlink_snr(scene, grid, 0, ArrayConfig{}, wf) == 0.0);
}

TEST_CASE("comm noise reference places the mu beam at the requested snr") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm =
      comm_noise_for_snr(scene, grid, ArrayConfig{}, wf, 25.0);
  double snr = mean_downlink_snr(scene, grid, 25, ArrayConfig{}, wf);
  CHECK(10 * std::log10(snr) == doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("multipath beam stays below the mu beam") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm =
      comm_noise_for_snr(scene, grid, ArrayConfig{}, wf, 25.0);
  double mu_snr = mean_downlink_snr(scene, grid, 25, ArrayConfig{}, wf);
  double scs2_snr = mean_downlink_snr(scene, grid, 26, ArrayConfig{}, wf);
  CHECK(scs2_snr > 0.0);
  CHECK(scs2_snr < mu_snr / 100.0);
  LinkTruth truth = link_truth(scene, grid, ArrayConfig{}, wf, LinkParams{});
  CHECK(truth.best_arm == 25);
}

TEST_CASE("a relay outshining the mu is rejected at truth build") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene;
  Target mu;
  mu.kind = TargetKind::MobileUser;
  mu.position = {79, 0, 0};
  mu.radial_velocity = 3.0;
  scene.targets.push_back(mu);
  Target relay;
  relay.kind = TargetKind::ClutterMultipath;
  relay.position = {40, 2, 0};  // nearly in line with the MU
  relay.reflectivity = 1e4;     // relayed power dwarfs the direct path
  scene.targets.push_back(relay);
  CHECK_THROWS_AS(link_truth(scene, grid, ArrayConfig{}, wf, LinkParams{}),
                  ValidationError);
}

TEST_CASE("link slots: no-path beams are floored, fading is slot-keyed") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm =
      comm_noise_for_snr(scene, grid, ArrayConfig{}, wf, 25.0);
  LinkParams params;
  LinkTruth truth = link_truth(scene, grid, ArrayConfig{}, wf, params);

  LinkReport dead = link_slot(truth, params, 0, 17, 123);
  CHECK(dead.reward == 0.0);
  CHECK(dead.ber == 0.5);

  LinkReport a = link_slot(truth, params, 25, 17, 123);
  LinkReport b = link_slot(truth, params, 26, 17, 123);
  CHECK(a.snr_linear / truth.mean_snr[25] ==
        doctest::Approx(b.snr_linear / truth.mean_snr[26]).epsilon(1e-12));
  LinkReport again = link_slot(truth, params, 25, 17, 123);
  CHECK(a.snr_linear == again.snr_linear);
  LinkReport other = link_slot(truth, params, 25, 18, 123);
  CHECK(a.snr_linear != other.snr_linear);
}

TEST_CASE("mean reward integral agrees with a monte carlo") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm =
      comm_noise_for_snr(scene, grid, ArrayConfig{}, wf, 25.0);
  LinkParams params;
  LinkTruth truth = link_truth(scene, grid, ArrayConfig{}, wf, params);
  long long n = 200000;
  double acc = 0.0;
  for (long long slot = 1; slot <= n; ++slot)
    acc += link_slot(truth, params, 25, static_cast<int>(slot), 5).reward;
  double mc = acc / static_cast<double>(n);
  CHECK(std::abs(mc - truth.mean_reward[25]) < 0.005);
}

TEST_CASE("fading off gives the deterministic reward map of the mean") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm =
      comm_noise_for_snr(scene, grid, ArrayConfig{}, wf, 25.0);
  LinkParams params;
  params.fading = false;
  LinkTruth truth = link_truth(scene, grid, ArrayConfig{}, wf, params);
  LinkReport rep = link_slot(truth, params, 25, 1, 99);
  CHECK(rep.reward == doctest::Approx(truth.mean_reward[25]).epsilon(1e-12));
  CHECK(rep.snr_db == doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("single fading draw through the grid-angle interface") {
  WaveformConfig wf = test_waveform();
  BeamGrid grid = grid41();
  Scene scene = baseline_scene();
  scene.noise_power_comm = 1.0;
  RandomStream rng(3);
  double snr = downlink_snr(scene, grid, grid.angles[25], ArrayConfig{}, wf,
                            rng);
  CHECK(snr > 0.0);
  CHECK_THROWS_AS(
      downlink_snr(scene, grid, 0.5, ArrayConfig{}, wf, rng), ConfigError);
}

}  // TEST_SUITE
