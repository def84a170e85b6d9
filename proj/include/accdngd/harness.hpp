#pragma once

#include <accdngd/algorithms.hpp>
#include <accdngd/analysis.hpp>
#include <accdngd/graphs.hpp>
#include <accdngd/objectives.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace accdngd {

enum class WeightMethod { Laplacian, Metropolis };
std::string_view to_string(WeightMethod m);

/// How a preset's step size is mapped onto the generated instance.
/// Relative keeps eta * L of the preset; Absolute uses its numbers verbatim.
enum class PresetScaling { Relative, Absolute };
std::string_view to_string(PresetScaling s);

/// Tuned step sizes for the bundled experiments.
struct Preset {
  std::string name;
  AlgoKind kind;
  StepSchedule::Kind schedule;
  double eta;    // step, or numerator for harmonic / inv_sqrt schedules
  double beta;   // vanishing only
  std::optional<double> alpha;  // alpha (SC) or alpha_0 (NSC)
  double L_ref;  // smoothness constant of the instance the value was tuned on
};

const std::vector<Preset>& presets();
/// Throws ValidationError for unknown names.
const Preset& find_preset(std::string_view name);

struct AlgorithmSpec {
  std::string label;
  AlgoKind kind = AlgoKind::AccDngdSC;
  std::optional<std::string> preset;
  PresetScaling preset_scaling = PresetScaling::Relative;
  std::optional<StepSchedule::Kind> schedule;
  std::optional<double> eta;
  std::optional<double> eta_l;  // eta = eta_l / L
  std::optional<double> bound_fraction;
  std::optional<double> beta;
  std::optional<double> t0;
  std::optional<double> alpha0;
  std::optional<InitMode> init;
  std::optional<int> tau;  // constant D-NC rounds; unset means logarithmic

  bool operator==(const AlgorithmSpec&) const = default;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  long iterations = 1000;
  long record_every = 1;
  std::string output;

  std::string graph = "grid2d:5x5";
  WeightMethod weights = WeightMethod::Laplacian;

  CaseKind objective = CaseKind::LeastSquares;
  int samples_per_agent = 0;  // 0 picks the case default
  int dim = 0;

  std::optional<double> remove_fraction;  // set iff the graph is time varying

  std::vector<AlgorithmSpec> algorithms;

  bool operator==(const ExperimentConfig&) const = default;
};

/// INI-style text, see docs/config.md. Throws ParseError ("line N: ...") for
/// malformed text or unknown keys and ValidationError ("section.key: ...") for
/// values outside their domain.
ExperimentConfig parse_config(std::string_view text);
std::string emit_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Constructs the initial state for one algorithm. Centralized methods start
/// from the row mean of x0.
AlgoState init_algorithm(const AlgorithmSpec& spec, const ObjectiveSuite& suite, double sigma, const Matrix& x0);

struct AlgorithmSummary {
  long final_t = 0;
  double final_avg_obj_err = 0.0;
  double final_max_individual_err = 0.0;
  double loglog_slope = 0.0;  // NaN when the fit window is empty or errors hit zero
  double linear_rate = 0.0;
  double linear_r2 = 0.0;
  bool diverged = false;
};

/// Fits over max(100, iterations / 10) <= t <= iterations.
AlgorithmSummary summarize(const std::vector<TraceRecord>& trace, long iterations, bool diverged);

struct AlgorithmRun {
  std::string label;
  AlgoKind kind;
  std::vector<TraceRecord> trace;
  AlgorithmSummary summary;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<AlgorithmRun> runs;
  int n = 0;
  int dim = 0;
  double sigma = 0.0;  // of the fixed weights, or of the ground graph when time varying
  double L = 0.0;
  double mu = 0.0;
  double fstar = 0.0;
};

struct Instance {
  Graph graph;
  Matrix w;
  double sigma = 0.0;
  ObjectiveSuite suite;
  Matrix x0;
};

/// Graph, weights, objective and shared start drawn from the master seed.
Instance build_instance(const ExperimentConfig& cfg);

ExperimentResult run(const ExperimentConfig& cfg);

/// Writes <label>.csv per algorithm, summary.csv and meta into dir.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& dir);

inline constexpr const char* kTraceHeader =
    "t,avg_obj_err,max_individual_err,consensus_y,consensus_s,grad_norm,eta_t,alpha_t,comm_count";

}  // namespace accdngd
