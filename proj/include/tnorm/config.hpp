#pragma once

// Experiment configuration file, schema version 1 (JSON):
//
//   {
//     "schema_version": 1,
//     "model": {"model": "iid", "law": "gaussian", "sigma": 1},
//     "shapes": [[5,5,5], [10,10,10]],
//     "trials": 200,
//     "delta": 0.05,
//     "estimator": {"restarts": 8, "max_iters": 300, "tol": 1e-9, "seed": 0,
//                   "require_convergence": false},
//     "epsilon": 0.135,            // optional: certify every trial
//     "master_seed": 42,
//     "output_dir": "out",         // optional
//     "threads": 0,                // optional, 0 = OpenMP default
//     "record_wall_time": true     // optional; false writes 0 ms
//   }
//
// Unknown keys are rejected at every level. The model object uses the model
// description schema without "seed": trial seeds come from master_seed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnorm/random_models.hpp"
#include "tnorm/spectral.hpp"

namespace tnorm {

struct ExperimentConfig {
  RandomModel model = IidModel{};
  std::vector<Shape> shapes;
  std::size_t trials = 1;
  double delta = 0.05;
  PowerIterConfig estimator;
  bool require_convergence = false;
  std::optional<double> epsilon;
  CertificateLimits limits;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  int threads = 0;
  bool record_wall_time = true;

  /// Checks every invariant, including the enumeration cap when epsilon is set.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace tnorm
