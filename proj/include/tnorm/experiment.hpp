#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tnorm/config.hpp"

namespace tnorm {

struct TrialRecord {
  Shape shape;
  std::string model;  // model_label()
  std::uint64_t seed = 0;
  double norm_lower = 0.0;
  std::optional<double> norm_upper;
  double bound_theorem1 = 0.0;
  std::optional<double> bound_corollary;
  std::int64_t wall_time_ms = 0;
  bool failed = false;
  std::string error;  // not persisted

  // In-memory diagnostics, not persisted.
  bool converged = true;
  std::size_t nonzeros = 0;
};

struct TrialOptions {
  double delta = 0.05;
  std::optional<double> epsilon;
  CertificateLimits limits;
  bool require_convergence = false;
  bool record_wall_time = true;
};

/// Samples one tensor from `model` with `seed`, estimates its norm, and
/// evaluates the bounds that apply to the model:
///   iid          theorem 1 with the law's proxy
///   measurement  theorem 1 conditional on the realized eps (proxy ||eps||)
///                and corollary 1
///   sampling     theorem 1 and corollary 2 (same value)
/// Power iteration runs with seed derive_seed(estimator.seed, kEstimator, seed).
/// Errors are rethrown with the trial seed prepended.
TrialRecord run_trial(const Shape& shape, const RandomModel& model,
                      const PowerIterConfig& estimator, std::uint64_t seed,
                      const TrialOptions& options = {});

/// Seed of trial `trial` of shape `shape_index`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t shape_index, std::size_t trial);

struct ShapeSummary {
  Shape shape;
  double sqrt_sum_dims = 0.0;
  std::size_t trials = 0;    // successful
  std::size_t failures = 0;
  double mean = 0.0;
  double median = 0.0;  // nearest rank
  double q95 = 0.0;     // nearest rank: sorted[ceil(0.95 N) - 1]
  double bound = 0.0;   // corollary bound if present, else theorem 1
  double ratio = 0.0;   // q95 / bound
  std::size_t exceedances = 0;  // norm_lower > bound
  double exceedance_fraction = 0.0;
};

struct Regression {
  bool defined = false;  // needs >= 2 shapes with distinct x
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct ScalingSummary {
  std::vector<ShapeSummary> shapes;  // order of first appearance
  Regression regression;             // mean norm_lower vs sqrt(sum n_k)
  std::size_t failures = 0;
};

ScalingSummary summarize(const std::vector<TrialRecord>& records);

/// Nearest-rank quantile of unsorted data, q in (0, 1].
double nearest_rank(std::vector<double> values, double q);

struct ExperimentResult {
  std::vector<TrialRecord> records;  // (shape_index, trial_index) order
  ScalingSummary summary;
};

/// Runs shapes x trials in a bounded OpenMP worker pool, then summarizes and,
/// when cfg.output_dir is set, writes config.json, trials.csv, summary.json
/// and scaling.svg before returning. Failing trials are recorded, not fatal.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace tnorm
