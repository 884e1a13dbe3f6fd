#include "tnorm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <omp.h>

#include "tnorm/bounds.hpp"
#include "tnorm/errors.hpp"
#include "tnorm/report.hpp"
#include "tnorm/rng.hpp"
#include "tnorm/tensor_io.hpp"

namespace tnorm {

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t shape_index, std::size_t trial) {
  return derive_seed(derive_seed(master_seed, stream::kTrial, shape_index), stream::kTrial, trial);
}

namespace {

struct Sampled {
  DenseTensor tensor;
  double conditional_sigma;  // proxy of X(u) given the sample's auxiliary draws
  std::optional<BoundReport> corollary;
};

Sampled draw(const Shape& shape, const RandomModel& model, std::uint64_t seed, double delta) {
  if (const auto* m = std::get_if<IidModel>(&model)) {
    return {sample_iid(shape, m->law, seed), m->law.sigma, std::nullopt};
  }
  if (const auto* m = std::get_if<MeasurementModel>(&model)) {
    auto s = sample_measurement_model(shape, *m, seed);
    const double eps_norm = euclidean_norm(s.coefficients);
    auto bound = corollary1_bound({shape, m->coeff_law.sigma, delta, m->measurements});
    // ||eps|| can only vanish for a degenerate draw; keep the conditional
    // bound defined.
    return {std::move(s.tensor), std::max(eps_norm, std::numeric_limits<double>::min()),
            std::move(bound)};
  }
  const auto& m = std::get<SamplingModel>(model);
  auto s = sample_without_replacement(shape, m, seed);
  return {std::move(s.tensor), m.value_law.sigma,
          corollary2_bound({shape, m.value_law.sigma, delta, std::nullopt})};
}

}  // namespace

TrialRecord run_trial(const Shape& shape, const RandomModel& model,
                      const PowerIterConfig& estimator, std::uint64_t seed,
                      const TrialOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.shape = shape;
  rec.model = model_label(model);
  rec.seed = seed;
  try {
    Sampled s = draw(shape, model, seed, options.delta);
    rec.nonzeros = static_cast<std::size_t>(std::count_if(
        s.tensor.entries().begin(), s.tensor.entries().end(), [](double e) { return e != 0.0; }));

    PowerIterConfig cfg = estimator;
    cfg.seed = derive_seed(estimator.seed, stream::kEstimator, seed);
    const PowerIterResult est = power_iteration(s.tensor, cfg);
    rec.norm_lower = est.value;
    rec.converged = est.converged;
    if (options.require_convergence && !est.converged)
      throw std::runtime_error("power iteration did not converge");
    if (options.epsilon)
      rec.norm_upper = certified_upper_bound(s.tensor, *options.epsilon, options.limits).upper_bound;

    rec.bound_theorem1 = theorem1_bound({shape, s.conditional_sigma, options.delta, std::nullopt}).value;
    if (s.corollary) rec.bound_corollary = s.corollary->value;
  } catch (const std::exception& e) {
    throw std::runtime_error("trial seed " + std::to_string(seed) + ": " + e.what());
  }
  if (options.record_wall_time) {
    rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return rec;
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

ScalingSummary summarize(const std::vector<TrialRecord>& records) {
  ScalingSummary summary;
  std::map<std::string, std::size_t> slot;
  std::vector<std::vector<double>> values;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : records) {
    const std::string key = r.shape.to_string();
    auto [it, inserted] = slot.emplace(key, summary.shapes.size());
    if (inserted) {
      ShapeSummary s;
      s.shape = r.shape;
      s.sqrt_sum_dims = std::sqrt(static_cast<double>(r.shape.sum_dims()));
      s.mean = s.median = s.q95 = s.bound = s.ratio = s.exceedance_fraction = nan;
      summary.shapes.push_back(s);
      values.emplace_back();
    }
    ShapeSummary& s = summary.shapes[it->second];
    if (r.failed) {
      ++s.failures;
      ++summary.failures;
      continue;
    }
    if (values[it->second].empty()) s.bound = r.bound_corollary.value_or(r.bound_theorem1);
    values[it->second].push_back(r.norm_lower);
  }

  for (std::size_t i = 0; i < summary.shapes.size(); ++i) {
    ShapeSummary& s = summary.shapes[i];
    const auto& v = values[i];
    s.trials = v.size();
    if (v.empty()) continue;
    double total = 0.0;
    for (double x : v) total += x;
    s.mean = total / static_cast<double>(v.size());
    s.median = nearest_rank(v, 0.5);
    s.q95 = nearest_rank(v, 0.95);
    s.ratio = s.q95 / s.bound;
    s.exceedances = static_cast<std::size_t>(
        std::count_if(v.begin(), v.end(), [&](double x) { return x > s.bound; }));
    s.exceedance_fraction = static_cast<double>(s.exceedances) / static_cast<double>(v.size());
  }

  // Least squares of mean norm against sqrt(sum n_k) over shapes with data.
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : summary.shapes)
    if (s.trials > 0) pts.emplace_back(s.sqrt_sum_dims, s.mean);
  if (pts.size() >= 2) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto [x, y] : pts) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
      syy += (y - my) * (y - my);
    }
    if (sxx > 0.0) {
      Regression& reg = summary.regression;
      reg.defined = true;
      reg.slope = sxy / sxx;
      reg.intercept = my - reg.slope * mx;
      reg.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    }
  }
  return summary;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t per_shape = cfg.trials;
  const std::size_t total = cfg.shapes.size() * per_shape;
  std::vector<TrialRecord> records(total);

  TrialOptions options;
  options.delta = cfg.delta;
  options.epsilon = cfg.epsilon;
  options.limits = cfg.limits;
  options.require_convergence = cfg.require_convergence;
  options.record_wall_time = cfg.record_wall_time;

  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  const auto work = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t w = 0; w < work; ++w) {
    const auto idx = static_cast<std::size_t>(w);
    const std::size_t shape_index = idx / per_shape;
    const std::size_t trial = idx % per_shape;
    const Shape& shape = cfg.shapes[shape_index];
    const std::uint64_t seed = trial_seed(cfg.master_seed, shape_index, trial);
    try {
      records[idx] = run_trial(shape, cfg.model, cfg.estimator, seed, options);
    } catch (const std::exception& e) {
      TrialRecord failed;
      failed.shape = shape;
      failed.model = model_label(cfg.model);
      failed.seed = seed;
      failed.failed = true;
      failed.error = e.what();
      records[idx] = std::move(failed);
    }
  }

  ExperimentResult result{std::move(records), {}};
  result.summary = summarize(result.records);
  if (!cfg.output_dir.empty()) {
    write_report(result.records, result.summary, cfg.output_dir);
    auto echo = to_json(cfg);
    // Execution details that must not change the outputs.
    echo.erase("threads");
    echo.erase("output_dir");
    io::write_file(cfg.output_dir / "config.json", echo.dump(2) + "\n");
  }
  return result;
}

}  // namespace tnorm
