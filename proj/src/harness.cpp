#include "jrc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>

namespace jrc {

namespace {

struct PolarSpot {
  double az_deg;
  double range_m;
};

// Static-scatterer positions handed out by the scatterer-count sweeps, in
// order. Azimuths avoid the baseline MU and multipath beams at every
// resolution the sweeps use.
constexpr PolarSpot kScsPool[] = {
    {-40, 45}, {-60, 50}, {-21, 55}, {1, 48},  {41, 52},
    {61, 46},  {-69, 42}, {9, 58},   {69, 44}, {-9, 50},
};
constexpr int kScsPoolSize = static_cast<int>(std::size(kScsPool));

constexpr std::uint64_t kCfarCalSeed = 271828182845;
constexpr long long kCfarCalCells = 1000000;

TargetSpec polar_scs1(const PolarSpot& spot) {
  TargetSpec t;
  t.kind = TargetKind::ClutterDirect;
  double az = spot.az_deg * kPi / 180.0;
  t.x = spot.range_m * std::cos(az);
  t.y = spot.range_m * std::sin(az);
  t.z = 0.0;
  return t;
}

TargetKind kind_from_name(const std::string& name) {
  if (name == "mu") return TargetKind::MobileUser;
  if (name == "scs1") return TargetKind::ClutterDirect;
  if (name == "scs2") return TargetKind::ClutterMultipath;
  throw ConfigError("unknown target kind: " + name +
                    " (expected mu, scs1, or scs2)");
}

const std::set<std::string>& known_algorithms() {
  static const std::set<std::string> names = {"ucb",    "ucb-ag", "ucb-dg",
                                              "random", "lucb",   "dbf"};
  return names;
}

const std::set<std::string>& known_sweeps() {
  static const std::set<std::string> names = {
      "num_scs", "angular_resolution", "velocity_resolution", "radar_snr_db",
      "num_scs1"};
  return names;
}

class LinkEnv : public BanditEnv {
 public:
  LinkEnv(const LinkTruth& truth, const LinkParams& params,
          std::uint64_t fading_seed)
      : truth_(truth), params_(params), fading_seed_(fading_seed) {}

  int num_arms() const override {
    return static_cast<int>(truth_.mean_snr.size());
  }
  LinkReport play(int arm, int slot) override {
    return link_slot(truth_, params_, arm, slot, fading_seed_);
  }
  const std::vector<double>& true_means() const override {
    return truth_.mean_reward;
  }

 private:
  const LinkTruth& truth_;
  const LinkParams& params_;
  std::uint64_t fading_seed_;
};

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

void run_point(const ExperimentConfig& swept, const std::string& label,
               RunResult& result) {
  BuiltScene built = build_scene(swept);
  const Scene& scene = built.scene;
  const BeamGrid& grid = built.grid;
  if (swept.horizon <= grid.count() + swept.radar.gate_slots)
    throw ConfigError("horizon too short for the grid and gate cost");

  LinkTruth truth =
      link_truth(scene, grid, swept.arrays, swept.waveform, swept.link);

  bool needs_ag = false, needs_dg = false;
  for (const auto& name : swept.algorithms) {
    if (!known_algorithms().count(name))
      throw ConfigError("unknown algorithm: " + name);
    needs_ag |= name == "ucb-ag";
    needs_dg |= name == "ucb-dg";
  }

  size_t num_algs = swept.algorithms.size();
  std::vector<std::vector<TrialTrace>> per_alg(num_algs);
  std::vector<std::vector<double>> ys(num_algs), regrets(num_algs);

  for (int trial = 0; trial < swept.trials; ++trial) {
    std::uint64_t trial_seed =
        seed_of(swept.base_seed, kDomainTrial, static_cast<std::uint64_t>(trial));
    std::uint64_t fading_seed = seed_of(trial_seed, kDomainFading);
    GateResult ag, dg;
    if (needs_ag)
      ag = amplitude_gate(scene, grid, swept.waveform, swept.arrays,
                          swept.radar, trial_seed);
    if (needs_dg)
      dg = doppler_gate(scene, grid, swept.waveform, swept.arrays, swept.radar,
                        swept.velocity_resolution, trial_seed);

    for (size_t a = 0; a < num_algs; ++a) {
      const std::string& name = swept.algorithms[a];
      LinkEnv env(truth, swept.link, fading_seed);
      std::vector<SlotRecord> records;
      if (name == "ucb") {
        records = run_ucb_snr(env, swept.horizon);
      } else if (name == "ucb-ag") {
        records = run_ucb_gated(env, swept.horizon, ag.arms, ag.gate_slots);
      } else if (name == "ucb-dg") {
        records = run_ucb_gated(env, swept.horizon, dg.arms, dg.gate_slots);
      } else if (name == "random") {
        records = run_random(env, swept.horizon, trial_seed);
      } else if (name == "dbf") {
        records = run_dbf(env, swept.horizon);
      } else {
        records = run_lucb(env, swept.horizon);
      }

      TrialTrace trace;
      trace.sweep_label = label;
      trace.algorithm = name;
      trace.trial = trial;
      trace.cum_regret = cumulative_regret(records, truth.mean_reward);
      std::vector<double> bers;
      bers.reserve(records.size());
      bool fell_back = false;
      for (const auto& rec : records) {
        bers.push_back(rec.ber);
        fell_back |= rec.gate_fallback;
      }
      trace.throughput_bps =
          throughput(bers, swept.link.payload_bits, swept.link.slot_duration);
      trace.records = std::move(records);
      if (fell_back) ++result.gate_fallbacks;
      ys[a].push_back(trace.throughput_bps);
      regrets[a].push_back(trace.cum_regret.back());
      per_alg[a].push_back(std::move(trace));
    }
  }

  for (size_t a = 0; a < num_algs; ++a) {
    for (auto& trace : per_alg[a]) result.traces.push_back(std::move(trace));
    AggregateRow row;
    row.sweep_label = label;
    row.algorithm = swept.algorithms[a];
    row.mean_throughput_bps = sample_mean(ys[a]);
    row.se_throughput = standard_error(ys[a]);
    row.mean_regret = sample_mean(regrets[a]);
    row.se_regret = standard_error(regrets[a]);
    result.summary.push_back(row);
  }
}

ExperimentConfig with_calibrated_cfar(const ExperimentConfig& cfg) {
  ExperimentConfig out = cfg;
  out.waveform.finalize();
  bool gated = false;
  for (const auto& name : out.algorithms)
    gated |= name == "ucb-ag" || name == "ucb-dg";
  if (gated && out.radar.cfar.scale <= 0.0)
    out.radar.cfar.scale =
        calibrate_cfar_scale(out.radar.cfar, out.waveform.num_packets,
                             out.radar.cfar.pfa, kCfarCalCells, kCfarCalSeed);
  return out;
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  TargetSpec mu;
  mu.kind = TargetKind::MobileUser;
  mu.x = 50;
  mu.y = 20;
  mu.z = 0;
  mu.velocity = 3.0;
  cfg.targets.push_back(mu);
  cfg.targets.push_back(polar_scs1(kScsPool[0]));
  TargetSpec scs2;
  scs2.kind = TargetKind::ClutterMultipath;
  scs2.x = 49.5;
  scs2.y = 21.9;
  scs2.z = 0;
  cfg.targets.push_back(scs2);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  ConfigFile file = ConfigFile::load(path);
  ExperimentConfig cfg = default_config();

  cfg.horizon = file.get_int("experiment", "horizon", cfg.horizon);
  cfg.trials = static_cast<int>(file.get_int("experiment", "trials", cfg.trials));
  cfg.base_seed = static_cast<std::uint64_t>(
      file.get_int("experiment", "seed", static_cast<long long>(cfg.base_seed)));
  if (file.has("experiment", "algorithms"))
    cfg.algorithms =
        ConfigFile::split_list(file.get("experiment", "algorithms", ""));

  cfg.span_deg = file.get_double("grid", "span_deg", cfg.span_deg);
  cfg.resolution_deg =
      file.get_double("grid", "resolution_deg", cfg.resolution_deg);

  WaveformConfig& wf = cfg.waveform;
  wf.carrier_freq = file.get_double("waveform", "carrier_hz", wf.carrier_freq);
  wf.sample_period =
      file.get_double("waveform", "sample_period_s", wf.sample_period);
  wf.samples_per_packet = static_cast<int>(
      file.get_int("waveform", "samples_per_packet", wf.samples_per_packet));
  wf.num_packets =
      static_cast<int>(file.get_int("waveform", "num_packets", wf.num_packets));
  wf.pulse_rep_interval =
      file.get_double("waveform", "pulse_rep_interval_s", wf.pulse_rep_interval);
  wf.tx_energy = file.get_double("waveform", "tx_energy", wf.tx_energy);
  wf.bandwidth = file.get_double("waveform", "bandwidth_hz", wf.bandwidth);

  cfg.arrays.num_elements_bs = static_cast<int>(
      file.get_int("arrays", "bs_elements", cfg.arrays.num_elements_bs));
  cfg.arrays.num_elements_mu = static_cast<int>(
      file.get_int("arrays", "mu_elements", cfg.arrays.num_elements_mu));

  cfg.max_range = file.get_double("scene", "max_range_m", cfg.max_range);
  cfg.radar_snr_db = file.get_double("scene", "radar_snr_db", cfg.radar_snr_db);
  cfg.comm_snr_db = file.get_double("scene", "comm_snr_db", cfg.comm_snr_db);
  if (file.has("scene", "target")) {
    cfg.targets.clear();
    for (const auto& line : file.get_all("scene", "target")) {
      auto fields = ConfigFile::split_list(line);
      if (fields.size() != 6)
        throw ConfigError(
            "target expects: kind, x, y, z, velocity, reflectivity");
      TargetSpec t;
      t.kind = kind_from_name(fields[0]);
      char* end = nullptr;
      double* slots[5] = {&t.x, &t.y, &t.z, &t.velocity, &t.reflectivity};
      for (int i = 0; i < 5; ++i) {
        *slots[i] = std::strtod(fields[i + 1].c_str(), &end);
        if (end == fields[i + 1].c_str() || *end != '\0')
          throw ConfigError("target field is not a number: " + fields[i + 1]);
      }
      cfg.targets.push_back(t);
    }
  }

  cfg.velocity_resolution = file.get_double("radar", "velocity_resolution_mps",
                                            cfg.velocity_resolution);
  cfg.radar.gate_slots = static_cast<int>(
      file.get_int("radar", "gate_slots", cfg.radar.gate_slots));
  cfg.radar.cfar.num_training = static_cast<int>(
      file.get_int("radar", "cfar_training", cfg.radar.cfar.num_training));
  cfg.radar.cfar.num_guard = static_cast<int>(
      file.get_int("radar", "cfar_guard", cfg.radar.cfar.num_guard));
  cfg.radar.cfar.os_rank =
      static_cast<int>(file.get_int("radar", "cfar_rank", cfg.radar.cfar.os_rank));
  cfg.radar.cfar.pfa = file.get_double("radar", "cfar_pfa", cfg.radar.cfar.pfa);
  cfg.radar.cfar.scale =
      file.get_double("radar", "cfar_scale", cfg.radar.cfar.scale);
  cfg.radar.music.oversample = static_cast<int>(
      file.get_int("radar", "music_oversample", cfg.radar.music.oversample));
  cfg.radar.music.subarray = static_cast<int>(
      file.get_int("radar", "music_subarray", cfg.radar.music.subarray));

  cfg.link.snr_lo_db = file.get_double("link", "snr_lo_db", cfg.link.snr_lo_db);
  cfg.link.snr_hi_db = file.get_double("link", "snr_hi_db", cfg.link.snr_hi_db);
  cfg.link.payload_bits = static_cast<int>(
      file.get_int("link", "payload_bits", cfg.link.payload_bits));
  cfg.link.slot_duration =
      file.get_double("link", "slot_duration_s", cfg.link.slot_duration);
  cfg.link.fading = file.get_bool("link", "fading", cfg.link.fading);

  if (file.has_section("sweep")) {
    cfg.sweep_parameter = file.require("sweep", "parameter");
    for (const auto& v :
         ConfigFile::split_list(file.require("sweep", "values"))) {
      char* end = nullptr;
      double parsed = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0')
        throw ConfigError("sweep value is not a number: " + v);
      cfg.sweep_values.push_back(parsed);
    }
  }
  return cfg;
}

ExperimentConfig apply_sweep(const ExperimentConfig& cfg,
                             const std::string& parameter, double value) {
  if (!known_sweeps().count(parameter))
    throw ConfigError("unknown sweep parameter: " + parameter);
  ExperimentConfig out = cfg;
  if (parameter == "angular_resolution") {
    out.resolution_deg = value;
    return out;
  }
  if (parameter == "velocity_resolution") {
    out.velocity_resolution = value;
    return out;
  }
  if (parameter == "radar_snr_db") {
    out.radar_snr_db = value;
    return out;
  }
  // Scatterer-count sweeps: keep the MU and every multipath scatterer from
  // the config, then deal static scatterers from the pool.
  long long n = static_cast<long long>(value);
  if (static_cast<double>(n) != value || n < 0)
    throw ConfigError("scatterer counts must be nonnegative integers");
  std::vector<TargetSpec> kept;
  long long multipath = 0;
  for (const auto& t : cfg.targets) {
    if (t.kind == TargetKind::ClutterDirect) continue;
    if (t.kind == TargetKind::ClutterMultipath) ++multipath;
    kept.push_back(t);
  }
  long long want_scs1 = parameter == "num_scs1" ? n : n - multipath;
  if (want_scs1 < 0)
    throw ConfigError("num_scs smaller than the configured multipath count");
  if (want_scs1 > kScsPoolSize)
    throw ConfigError("scatterer pool exhausted");
  for (long long i = 0; i < want_scs1; ++i)
    kept.push_back(polar_scs1(kScsPool[i]));
  out.targets = std::move(kept);
  return out;
}

BuiltScene build_scene(const ExperimentConfig& cfg) {
  BuiltScene built;
  ExperimentConfig local = cfg;
  local.waveform.finalize();

  double span = cfg.span_deg * kPi / 180.0;
  double res = cfg.resolution_deg * kPi / 180.0;
  built.grid = make_beam_grid(-span, span, res);

  Scene& scene = built.scene;
  scene.max_range = cfg.max_range;
  scene.radar_snr_db = cfg.radar_snr_db;
  for (const auto& entry : cfg.targets) {
    Target t;
    t.kind = entry.kind;
    t.position = {entry.x, entry.y, entry.z};
    t.radial_velocity = entry.velocity;
    t.reflectivity = entry.reflectivity;
    scene.targets.push_back(t);
  }
  validate_scene(scene, built.grid);
  scene.noise_power_comm = comm_noise_for_snr(scene, built.grid, cfg.arrays,
                                              local.waveform, cfg.comm_snr_db);
  scene.noise_power_radar = radar_noise_for_snr(
      scene, built.grid, local.waveform, cfg.arrays, cfg.radar_snr_db);
  return built;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig local = with_calibrated_cfar(cfg);
  RunResult result;
  if (local.sweep_parameter.empty()) {
    run_point(local, "-", result);
    return result;
  }
  return run_sweep(cfg);
}

RunResult run_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep_parameter.empty() || cfg.sweep_values.empty())
    throw ConfigError("sweep requested without a sweep section");
  ExperimentConfig local = with_calibrated_cfar(cfg);
  RunResult result;
  for (double value : local.sweep_values) {
    ExperimentConfig swept =
        apply_sweep(local, local.sweep_parameter, value);
    swept.waveform.finalize();
    run_point(swept, format_number(value), result);
  }
  return result;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void emit_csv(const RunResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  const fs::path trace_path = fs::path(out_dir) / "trace.csv";
  std::ofstream trace(trace_path);
  if (!trace)
    throw std::runtime_error("cannot write " + trace_path.string());
  trace << "trial,slot,algorithm,beam,reward,ber,cum_regret\n";
  for (const auto& t : result.traces) {
    for (size_t i = 0; i < t.records.size(); ++i) {
      const SlotRecord& rec = t.records[i];
      trace << t.trial << ',' << rec.slot << ',' << t.algorithm << ','
            << rec.arm << ',' << format_number(rec.reward) << ','
            << format_number(rec.ber) << ',' << format_number(t.cum_regret[i])
            << '\n';
    }
  }
  if (!trace.flush())
    throw std::runtime_error("cannot write " + trace_path.string());

  const fs::path summary_path = fs::path(out_dir) / "summary.csv";
  std::ofstream summary(summary_path);
  if (!summary)
    throw std::runtime_error("cannot write " + summary_path.string());
  summary << "sweep_value,algorithm,mean_throughput_bps,se_throughput,"
             "mean_regret,se_regret\n";
  for (const auto& row : result.summary) {
    summary << row.sweep_label << ',' << row.algorithm << ','
            << format_number(row.mean_throughput_bps) << ','
            << format_number(row.se_throughput) << ','
            << format_number(row.mean_regret) << ','
            << format_number(row.se_regret) << '\n';
  }
  if (!summary.flush())
    throw std::runtime_error("cannot write " + summary_path.string());
}

}  // namespace jrc
