#pragma once
// Experiment front end: JSON config loading, named presets reproducing the
// reference figures, rate calibration against an outage anchor, CSV/report
// emission and the embedded pass/fail checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relay/markov.hpp"
#include "relay/simulate.hpp"

namespace relay {

struct ExperimentSeries {
  std::string csv_name;  // curve group; series sharing a name append rows
  PolicyKind policy = PolicyKind::Proposed;
  bool analytical = false;
  bool simulated = true;
  NetworkConfig config;
  std::vector<double> snr_db;
  std::vector<std::uint64_t> slots;  // one entry or one per SNR point

  friend bool operator==(const ExperimentSeries&, const ExperimentSeries&) = default;
};

struct CalibrationSpec {
  double snr_db = 8.0;
  double p_target = 0.1;
  std::vector<double> eta_grid{0.5, 1.0, 1.5, 2.0};

  friend bool operator==(const CalibrationSpec&, const CalibrationSpec&) = default;
};

struct ExperimentPreset {
  std::string name = "custom";
  std::uint64_t seed = 1;
  std::uint64_t warmup_slots = 10'000;
  int num_streams = 32;
  std::optional<CalibrationSpec> calibration;  // applied to every series config
  std::vector<ExperimentSeries> series;

  friend bool operator==(const ExperimentPreset&, const ExperimentPreset&) = default;
};

// Built-in presets: fig3, fig4, fig5, fig6, table3.
ExperimentPreset make_preset(const std::string& name);
std::vector<std::string> preset_names();

// Strict JSON form: unknown keys rejected, missing fields named. Defaults
// are mean gain 1 and unit noise power; slot duration is fixed at 1.
ExperimentPreset load_config(const std::string& path);
void save_config(const ExperimentPreset& preset, const std::string& path);

struct CalibrationResult {
  double eta = 0.0;
  double p_at_anchor = 0.0;
  double residual_log10 = 0.0;
  bool achievable = false;  // target inside the candidates' outage range
  std::vector<std::pair<double, double>> evaluated;  // (eta, p_out at anchor)
};

// Picks the candidate target rate whose analytical outage at the anchor SNR
// is closest to the target on a log10 scale.
CalibrationResult calibrate_rate(double anchor_snr_db, double p_target,
                                 const NetworkConfig& cfg, const std::vector<double>& candidates,
                                 std::uint64_t cap = kDefaultStateCap);

struct ExperimentOutcome {
  int exit_code = 0;
  std::vector<std::string> csv_files;
  std::string report_file;
  std::optional<CalibrationResult> calibration;
};

// Runs every series, writes one CSV per (curve, source) plus a text report,
// and evaluates the preset's embedded checks. The row schema is
// snr_db,p_out,source,policy,K,LD,LE,rho,alpha,eta,ci with LF endings.
ExperimentOutcome run_experiment(const ExperimentPreset& preset, const std::string& outdir);

// Diversity estimates from a previously written CSV.
struct DiversityQuery {
  std::string csv_path;
  double snr_lo = 0.0;
  double snr_hi = 0.0;
  std::string policy;  // optional filters
  std::string source;
};
std::vector<std::pair<std::string, double>> diversity_from_csv(const DiversityQuery& q);

}  // namespace relay
