#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tnorm/rng.hpp"
#include "tnorm/tensor.hpp"

namespace tnorm {

enum class LawKind { gaussian, rademacher, uniform };

std::string_view to_string(LawKind kind);
LawKind parse_law_kind(std::string_view name);

/// Zero-mean law with sub-Gaussian variance proxy `sigma`:
/// E[exp(tX)] <= exp(sigma^2 t^2 / 2) for all t.
///
/// Draws are sigma times a standardized draw: N(0,1), a fair sign, or
/// Uniform[-1,1]. For the uniform law sigma is the half-width a, a valid
/// (conservative) proxy by Hoeffding's lemma.
struct SubGaussianLaw {
  LawKind kind = LawKind::gaussian;
  double sigma = 1.0;

  void validate() const;
  double draw(Rng& rng) const { return sigma * standardized_draw(rng); }
  double standardized_draw(Rng& rng) const;
  /// Var(X); equals sigma^2 except for uniform (a^2 / 3).
  double variance() const;
};

/// Entries i.i.d. from one law.
struct IidModel {
  SubGaussianLaw law;
};

/// X = sum_{j=1}^M eps_j W_j with proxy-1 W entries and eps_j of proxy
/// coeff_law.sigma, all independent.
struct MeasurementModel {
  std::size_t measurements = 1;  // M
  SubGaussianLaw entry_law{LawKind::gaussian, 1.0};
  SubGaussianLaw coeff_law{LawKind::gaussian, 1.0};

  void validate() const;
};

/// M distinct positions chosen uniformly without replacement, each holding a
/// draw from value_law; every other entry is exactly zero.
struct SamplingModel {
  std::size_t samples = 1;  // M
  SubGaussianLaw value_law;

  void validate() const;
};

using RandomModel = std::variant<IidModel, MeasurementModel, SamplingModel>;

/// Proxy of a single entry's law (the eps_j proxy for the measurement model).
double variance_proxy(const RandomModel& model);
std::string_view model_name(const RandomModel& model);
/// Compact, semicolon-free label such as "iid/gaussian/sigma=1".
std::string model_label(const RandomModel& model);

// Model description JSON, schema version 1:
//   {"schema_version":1,"model":"iid","law":"gaussian","sigma":1,"seed":0}
//   {"schema_version":1,"model":"measurement","M":64,"entry_law":"gaussian",
//    "coeff_law":"gaussian","coeff_sigma":1,"seed":0}
//   {"schema_version":1,"model":"sampling","M":32,"law":"rademacher",
//    "sigma":1,"seed":0}
// "schema_version" and "seed" are optional on input; unknown keys are errors.
struct ModelDescriptor {
  RandomModel model;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const ModelDescriptor& descriptor);
ModelDescriptor model_from_json(const nlohmann::json& doc);

DenseTensor sample_iid(const Shape& shape, const SubGaussianLaw& law, std::uint64_t seed);

struct MeasurementSample {
  DenseTensor tensor;
  std::vector<double> coefficients;  // realized eps
};

MeasurementSample sample_measurement_model(const Shape& shape, const MeasurementModel& model,
                                           std::uint64_t seed);

/// The j-th design tensor W_j (0-based) used by sample_measurement_model.
DenseTensor measurement_component(const Shape& shape, const MeasurementModel& model,
                                  std::uint64_t seed, std::size_t j);

struct SamplingSample {
  DenseTensor tensor;
  std::vector<std::size_t> positions;  // flat indices, in draw order
};

/// Partial Fisher-Yates over the virtual range [0, total_size): step j swaps
/// slot j with a uniform slot in [j, total_size), tracking displaced slots in
/// a hash map, so memory is O(M).
SamplingSample sample_without_replacement(const Shape& shape, const SamplingModel& model,
                                          std::uint64_t seed);

/// Draws one tensor of any model.
DenseTensor sample_model(const Shape& shape, const RandomModel& model, std::uint64_t seed);

/// |X_t(u)| for `trials` independent samples X_t; u must be fixed in advance.
std::vector<double> empirical_tail(const Shape& shape, const SubGaussianLaw& law,
                                   const UnitTuple& u, std::size_t trials, std::uint64_t seed);

/// Fraction of values >= t.
double tail_fraction(const std::vector<double>& values, double t);

}  // namespace tnorm
