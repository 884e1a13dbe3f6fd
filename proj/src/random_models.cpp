#include "tnorm/random_models.hpp"

#include <cmath>
#include <unordered_map>

#include "tnorm/errors.hpp"
#include "tnorm/numfmt.hpp"

namespace tnorm {

std::string_view to_string(LawKind kind) {
  switch (kind) {
    case LawKind::gaussian: return "gaussian";
    case LawKind::rademacher: return "rademacher";
    case LawKind::uniform: return "uniform";
  }
  return "unknown";
}

LawKind parse_law_kind(std::string_view name) {
  if (name == "gaussian") return LawKind::gaussian;
  if (name == "rademacher") return LawKind::rademacher;
  if (name == "uniform") return LawKind::uniform;
  throw ParameterError("unknown law '" + std::string(name) + "'");
}

void SubGaussianLaw::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("law sigma must be positive and finite");
}

double SubGaussianLaw::standardized_draw(Rng& rng) const {
  switch (kind) {
    case LawKind::gaussian: return standard_normal(rng);
    case LawKind::rademacher: return (rng() >> 63) ? 1.0 : -1.0;
    case LawKind::uniform: return 2.0 * uniform01(rng) - 1.0;
  }
  return 0.0;
}

double SubGaussianLaw::variance() const {
  return kind == LawKind::uniform ? sigma * sigma / 3.0 : sigma * sigma;
}

void MeasurementModel::validate() const {
  if (measurements < 1) throw ParameterError("measurement model needs M >= 1");
  entry_law.validate();
  coeff_law.validate();
  if (entry_law.sigma != 1.0) throw ParameterError("measurement entries must have proxy 1");
}

void SamplingModel::validate() const {
  if (samples < 1) throw ParameterError("sampling model needs M >= 1");
  value_law.validate();
}

double variance_proxy(const RandomModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) return m.law.sigma;
        else if constexpr (std::is_same_v<T, MeasurementModel>) return m.coeff_law.sigma;
        else return m.value_law.sigma;
      },
      model);
}

std::string_view model_name(const RandomModel& model) {
  switch (model.index()) {
    case 0: return "iid";
    case 1: return "measurement";
    default: return "sampling";
  }
}

std::string model_label(const RandomModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          return "iid/" + std::string(to_string(m.law.kind)) + "/sigma=" + fmt_double(m.law.sigma);
        } else if constexpr (std::is_same_v<T, MeasurementModel>) {
          return "measurement/M=" + std::to_string(m.measurements) + "/" +
                 std::string(to_string(m.entry_law.kind)) + "/" +
                 std::string(to_string(m.coeff_law.kind)) + "/sigma=" + fmt_double(m.coeff_law.sigma);
        } else {
          return "sampling/M=" + std::to_string(m.samples) + "/" +
                 std::string(to_string(m.value_law.kind)) + "/sigma=" + fmt_double(m.value_law.sigma);
        }
      },
      model);
}

namespace {

void reject_unknown_keys(const nlohmann::json& doc, std::initializer_list<std::string_view> keys) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) throw ParameterError("unknown model key '" + item.key() + "'");
  }
}

}  // namespace

nlohmann::ordered_json to_json(const ModelDescriptor& descriptor) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["model"] = model_name(descriptor.model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          doc["law"] = to_string(m.law.kind);
          doc["sigma"] = m.law.sigma;
        } else if constexpr (std::is_same_v<T, MeasurementModel>) {
          doc["M"] = m.measurements;
          doc["entry_law"] = to_string(m.entry_law.kind);
          doc["coeff_law"] = to_string(m.coeff_law.kind);
          doc["coeff_sigma"] = m.coeff_law.sigma;
        } else {
          doc["M"] = m.samples;
          doc["law"] = to_string(m.value_law.kind);
          doc["sigma"] = m.value_law.sigma;
        }
      },
      descriptor.model);
  doc["seed"] = descriptor.seed;
  return doc;
}

ModelDescriptor model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParameterError("model description must be a JSON object");
  if (doc.contains("schema_version") && doc["schema_version"] != 1)
    throw ParameterError("unsupported model schema_version");
  ModelDescriptor out;
  out.seed = doc.value("seed", std::uint64_t{0});
  const std::string name = doc.at("model").get<std::string>();
  if (name == "iid") {
    reject_unknown_keys(doc, {"schema_version", "model", "law", "sigma", "seed"});
    IidModel m;
    m.law = {parse_law_kind(doc.value("law", "gaussian")), doc.value("sigma", 1.0)};
    m.law.validate();
    out.model = m;
  } else if (name == "measurement") {
    reject_unknown_keys(doc, {"schema_version", "model", "M", "entry_law", "coeff_law",
                              "coeff_sigma", "seed"});
    MeasurementModel m;
    m.measurements = doc.at("M").get<std::size_t>();
    m.entry_law = {parse_law_kind(doc.value("entry_law", "gaussian")), 1.0};
    m.coeff_law = {parse_law_kind(doc.value("coeff_law", "gaussian")), doc.value("coeff_sigma", 1.0)};
    m.validate();
    out.model = m;
  } else if (name == "sampling") {
    reject_unknown_keys(doc, {"schema_version", "model", "M", "law", "sigma", "seed"});
    SamplingModel m;
    m.samples = doc.at("M").get<std::size_t>();
    m.value_law = {parse_law_kind(doc.value("law", "gaussian")), doc.value("sigma", 1.0)};
    m.validate();
    out.model = m;
  } else {
    throw ParameterError("unknown model '" + name + "'");
  }
  return out;
}

DenseTensor sample_iid(const Shape& shape, const SubGaussianLaw& law, std::uint64_t seed) {
  law.validate();
  Rng rng(derive_seed(seed, stream::kEntries));
  std::vector<double> entries(shape.total_size());
  for (double& e : entries) e = law.draw(rng);
  return DenseTensor(shape, std::move(entries));
}

DenseTensor measurement_component(const Shape& shape, const MeasurementModel& model,
                                  std::uint64_t seed, std::size_t j) {
  model.validate();
  Rng rng(derive_seed(seed, stream::kMeasurement, j));
  std::vector<double> entries(shape.total_size());
  for (double& e : entries) e = model.entry_law.draw(rng);
  return DenseTensor(shape, std::move(entries));
}

MeasurementSample sample_measurement_model(const Shape& shape, const MeasurementModel& model,
                                           std::uint64_t seed) {
  model.validate();
  std::vector<double> eps(model.measurements);
  Rng coeff_rng(derive_seed(seed, stream::kCoefficients));
  for (double& e : eps) e = model.coeff_law.draw(coeff_rng);

  std::vector<double> entries(shape.total_size(), 0.0);
  for (std::size_t j = 0; j < model.measurements; ++j) {
    Rng rng(derive_seed(seed, stream::kMeasurement, j));
    for (double& e : entries) e += eps[j] * model.entry_law.draw(rng);
  }
  return {DenseTensor(shape, std::move(entries)), std::move(eps)};
}

SamplingSample sample_without_replacement(const Shape& shape, const SamplingModel& model,
                                          std::uint64_t seed) {
  model.validate();
  const std::size_t total = shape.total_size();
  if (model.samples > total)
    throw ParameterError("cannot sample M=" + std::to_string(model.samples) +
                         " distinct positions from " + std::to_string(total) + " entries");
  Rng pos_rng(derive_seed(seed, stream::kPositions));
  Rng val_rng(derive_seed(seed, stream::kValues));

  std::unordered_map<std::size_t, std::size_t> displaced;
  auto slot = [&](std::size_t i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };
  std::vector<std::size_t> positions(model.samples);
  std::vector<double> entries(total, 0.0);
  for (std::size_t j = 0; j < model.samples; ++j) {
    const std::size_t r = j + static_cast<std::size_t>(uniform_index(pos_rng, total - j));
    const std::size_t chosen = slot(r);
    displaced[r] = slot(j);
    positions[j] = chosen;
    entries[chosen] = model.value_law.draw(val_rng);
  }
  return {DenseTensor(shape, std::move(entries)), std::move(positions)};
}

DenseTensor sample_model(const Shape& shape, const RandomModel& model, std::uint64_t seed) {
  return std::visit(
      [&](const auto& m) -> DenseTensor {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) return sample_iid(shape, m.law, seed);
        else if constexpr (std::is_same_v<T, MeasurementModel>)
          return sample_measurement_model(shape, m, seed).tensor;
        else return sample_without_replacement(shape, m, seed).tensor;
      },
      model);
}

std::vector<double> empirical_tail(const Shape& shape, const SubGaussianLaw& law,
                                   const UnitTuple& u, std::size_t trials, std::uint64_t seed) {
  law.validate();
  if (!u.matches(shape)) throw DimensionError("unit tuple does not match shape");
  std::vector<double> values(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    const DenseTensor x =
        sample_iid(shape, law, derive_seed(seed, stream::kTailTrial, static_cast<std::uint64_t>(t)));
    values[static_cast<std::size_t>(t)] = std::abs(multilinear_eval(x, u));
  }
  return values;
}

double tail_fraction(const std::vector<double>& values, double t) {
  if (values.empty()) return 0.0;
  std::size_t hits = 0;
  for (double v : values)
    if (v >= t) ++hits;
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace tnorm
