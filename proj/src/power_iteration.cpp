#include <algorithm>
#include <cmath>
#include <optional>

#include "tnorm/errors.hpp"
#include "tnorm/rng.hpp"
#include "tnorm/spectral.hpp"

namespace tnorm {

void PowerIterConfig::validate() const {
  if (restarts < 1) throw ParameterError("power iteration needs restarts >= 1");
  if (max_iters < 1) throw ParameterError("power iteration needs max_iters >= 1");
  if (!(tol > 0.0 && tol < 1.0)) throw ParameterError("power iteration tol must lie in (0, 1)");
}

namespace {

struct Ascent {
  std::vector<std::vector<double>> vectors;
  double value = 0.0;
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> trace;
};

std::vector<std::vector<double>> max_entry_start(const DenseTensor& x) {
  const auto entries = x.entries();
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (std::abs(entries[i]) > std::abs(entries[best])) best = i;
  return UnitTuple::basis(x.shape(), x.shape().unravel(best)).vectors();
}

std::vector<std::vector<double>> random_start(const Shape& shape, Rng& rng) {
  std::vector<std::vector<double>> vectors;
  for (std::size_t k = 0; k < shape.order(); ++k)
    vectors.push_back(random_unit_vector(rng, shape.dim(k)));
  return vectors;
}

Ascent ascend(const DenseTensor& x, std::vector<std::vector<double>> start,
              const PowerIterConfig& cfg, Rng& rng) {
  Ascent a;
  a.vectors = std::move(start);
  const std::size_t order = x.order();
  double value = 0.0;
  for (std::size_t sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    const double previous = value;
    bool degenerate = false;
    for (std::size_t k = 0; k < order; ++k) {
      std::vector<double> g = contract_all_but(x, a.vectors, k);
      const double norm = euclidean_norm(g);
      if (norm > 0.0) {
        for (double& e : g) e /= norm;
        a.vectors[k] = std::move(g);
        value = norm;
      } else {
        // X(..., ., ...) vanishes for every u_k; any unit vector keeps the
        // objective at its current value of zero.
        a.vectors[k] = random_unit_vector(rng, x.shape().dim(k));
        value = 0.0;
        degenerate = true;
      }
      if (cfg.record_trace) a.trace.push_back(value);
    }
    a.sweeps = sweep;
    if (!degenerate && value > 0.0 && std::abs(value - previous) <= cfg.tol * value) {
      a.converged = true;
      break;
    }
  }
  a.value = value;
  return a;
}

}  // namespace

PowerIterResult power_iteration(const DenseTensor& x, const PowerIterConfig& cfg) {
  cfg.validate();
  if (x.order() == 0) throw DimensionError("power iteration needs a tensor of order >= 1");

  if (frobenius_norm(x) == 0.0) {
    std::vector<std::size_t> origin(x.order(), 0);
    return PowerIterResult{0.0,
                           UnitTuple::basis(x.shape(), origin),
                           0,
                           true,
                           0,
                           std::vector<double>(cfg.restarts, 0.0),
                           {}};
  }

  std::vector<double> restart_values;
  std::vector<std::vector<double>> traces;
  std::optional<Ascent> best;
  std::size_t best_restart = 0;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, stream::kRestart, r));
    auto start = r == 0 ? max_entry_start(x) : random_start(x.shape(), rng);
    Ascent a = ascend(x, std::move(start), cfg, rng);
    restart_values.push_back(a.value);
    if (cfg.record_trace) traces.push_back(std::move(a.trace));
    if (!best || a.value > best->value) {
      best = std::move(a);
      best_restart = r;
    }
  }

  UnitTuple argmax(std::move(best->vectors));
  const double value = std::abs(multilinear_eval(x, argmax));
  return PowerIterResult{value,           std::move(argmax), best->sweeps,
                         best->converged, best_restart,      std::move(restart_values),
                         std::move(traces)};
}

}  // namespace tnorm
