#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jrc/bandit.hpp"
#include "jrc/comm.hpp"
#include "jrc/config_file.hpp"
#include "jrc/radar.hpp"
#include "jrc/scene.hpp"

namespace jrc {

struct TargetSpec {
  TargetKind kind = TargetKind::ClutterDirect;
  double x = 0, y = 0, z = 0;
  double velocity = 0.0;
  double reflectivity = 1.0;
};

struct ExperimentConfig {
  long long horizon = 2000;
  int trials = 15;
  std::uint64_t base_seed = 1;
  std::vector<std::string> algorithms = {"dbf",    "ucb-dg", "ucb-ag",
                                         "ucb",    "random", "lucb"};
  double span_deg = 80.0;
  double resolution_deg = 4.0;
  WaveformConfig waveform;
  ArrayConfig arrays;
  double max_range = 80.0;
  double radar_snr_db = 10.0;
  double comm_snr_db = 25.0;
  std::vector<TargetSpec> targets;
  RadarConfig radar;
  double velocity_resolution = 1.0;  // m/s, Doppler-gate threshold scale
  LinkParams link;
  std::string sweep_parameter;  // empty = plain run
  std::vector<double> sweep_values;
};

// Baseline: 41-beam 4-degree grid, MU at [50,20,0] with 3 m/s, one direct
// clutter scatterer and one multipath scatterer near the MU.
ExperimentConfig default_config();
ExperimentConfig load_config(const std::string& path);

// The swept copies of the config. Scatterer-count sweeps draw extra static
// scatterers from a fixed pool of positions.
ExperimentConfig apply_sweep(const ExperimentConfig& cfg,
                             const std::string& parameter, double value);

struct BuiltScene {
  Scene scene;
  BeamGrid grid;
};
BuiltScene build_scene(const ExperimentConfig& cfg);

struct TrialTrace {
  std::string sweep_label;
  std::string algorithm;
  int trial = 0;
  std::vector<SlotRecord> records;
  std::vector<double> cum_regret;
  double throughput_bps = 0.0;
};

struct AggregateRow {
  std::string sweep_label;
  std::string algorithm;
  double mean_throughput_bps = 0.0;
  double se_throughput = 0.0;
  double mean_regret = 0.0;
  double se_regret = 0.0;
};

struct RunResult {
  std::vector<TrialTrace> traces;  // ordered: sweep value, algorithm, trial
  std::vector<AggregateRow> summary;
  int gate_fallbacks = 0;  // traces that reverted to the full grid
};

RunResult run_experiment(const ExperimentConfig& cfg);
RunResult run_sweep(const ExperimentConfig& cfg);

// Writes trace.csv and summary.csv into out_dir (created if needed).
void emit_csv(const RunResult& result, const std::string& out_dir);

// %.17g rendering used for every numeric CSV field.
std::string format_number(double v);

}  // namespace jrc
