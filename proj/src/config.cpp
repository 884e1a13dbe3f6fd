#include "tnorm/config.hpp"

#include <stdexcept>

#include "tnorm/errors.hpp"
#include "tnorm/tensor_io.hpp"

namespace tnorm {

namespace {

void reject_unknown(const nlohmann::json& obj, std::string_view where,
                    std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) throw ParameterError(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known)
      throw ParameterError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (shapes.empty()) throw ParameterError("experiment needs at least one shape");
  if (trials < 1) throw ParameterError("experiment needs trials >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (threads < 0) throw ParameterError("threads must be >= 0");
  estimator.validate();
  std::visit([](const auto& m) {
    if constexpr (requires { m.validate(); }) m.validate();
    else m.law.validate();
  }, model);
  if (const auto* s = std::get_if<SamplingModel>(&model)) {
    for (const auto& shape : shapes)
      if (s->samples > shape.total_size())
        throw ParameterError("sampling M exceeds the size of shape " + shape.to_string());
  }
  if (epsilon) {
    if (!(*epsilon > 0.0 && *epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
    for (const auto& shape : shapes)
      if (enumeration_size(shape, *epsilon, limits.cover_cap) > limits.enumeration_cap)
        throw NetTooLarge("shape " + shape.to_string() +
                          " exceeds the net enumeration cap at this epsilon");
  }
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  reject_unknown(doc, "experiment config",
                 {"schema_version", "model", "shapes", "trials", "delta", "estimator", "epsilon",
                  "master_seed", "output_dir", "threads", "record_wall_time"});
  if (doc.value("schema_version", 0) != 1)
    throw ParameterError("experiment config needs \"schema_version\": 1");

  ExperimentConfig cfg;
  const auto& model = doc.at("model");
  if (model.is_object() && model.contains("seed"))
    throw ParameterError("model 'seed' is not allowed in an experiment; use master_seed");
  cfg.model = model_from_json(model).model;

  for (const auto& dims : doc.at("shapes")) cfg.shapes.emplace_back(dims.get<std::vector<std::size_t>>());
  cfg.trials = doc.at("trials").get<std::size_t>();
  cfg.delta = doc.value("delta", 0.05);
  if (doc.contains("estimator")) {
    const auto& est = doc["estimator"];
    reject_unknown(est, "estimator",
                   {"restarts", "max_iters", "tol", "seed", "require_convergence"});
    cfg.estimator.restarts = est.value("restarts", cfg.estimator.restarts);
    cfg.estimator.max_iters = est.value("max_iters", cfg.estimator.max_iters);
    cfg.estimator.tol = est.value("tol", cfg.estimator.tol);
    cfg.estimator.seed = est.value("seed", cfg.estimator.seed);
    cfg.require_convergence = est.value("require_convergence", false);
  }
  if (doc.contains("epsilon") && !doc["epsilon"].is_null()) cfg.epsilon = doc["epsilon"].get<double>();
  cfg.master_seed = doc.value("master_seed", std::uint64_t{0});
  if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
  cfg.threads = doc.value("threads", 0);
  cfg.record_wall_time = doc.value("record_wall_time", true);
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  auto model = to_json(ModelDescriptor{cfg.model, 0});
  model.erase("schema_version");
  model.erase("seed");
  doc["model"] = model;
  doc["shapes"] = nlohmann::ordered_json::array();
  for (const auto& s : cfg.shapes) doc["shapes"].push_back(s.dims());
  doc["trials"] = cfg.trials;
  doc["delta"] = cfg.delta;
  doc["estimator"] = {{"restarts", cfg.estimator.restarts},
                      {"max_iters", cfg.estimator.max_iters},
                      {"tol", cfg.estimator.tol},
                      {"seed", cfg.estimator.seed},
                      {"require_convergence", cfg.require_convergence}};
  if (cfg.epsilon) doc["epsilon"] = *cfg.epsilon;
  doc["master_seed"] = cfg.master_seed;
  if (!cfg.output_dir.empty()) doc["output_dir"] = cfg.output_dir.string();
  doc["threads"] = cfg.threads;
  doc["record_wall_time"] = cfg.record_wall_time;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace tnorm
