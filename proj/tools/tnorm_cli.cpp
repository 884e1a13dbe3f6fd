// tnorm: sample random tensors, bracket their spectral norms, evaluate the
// concentration bounds, and run Monte Carlo bound-verification experiments.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 a bound was
// computed outside its preconditions (validity flags present).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnorm/bounds.hpp"
#include "tnorm/config.hpp"
#include "tnorm/experiment.hpp"
#include "tnorm/random_models.hpp"
#include "tnorm/report.hpp"
#include "tnorm/spectral.hpp"
#include "tnorm/tensor_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitFlags = 3;

constexpr const char* kOutputDirEnv = "TNORM_OUTPUT_DIR";

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "tnorm-out";
}

struct GenOptions {
  std::string shape;
  std::string model = "iid";
  std::string law = "gaussian";
  double sigma = 1.0;
  std::size_t measurements = 1;
  std::string coeff_law = "gaussian";
  double coeff_sigma = 1.0;
  std::uint64_t seed = 0;
  std::string model_file;
  std::string out;
  std::string encoding = "auto";
};

struct EstimateOptions {
  std::string in;
  tnorm::PowerIterConfig power;
  std::optional<double> epsilon;
  tnorm::CertificateLimits limits;
};

struct BoundOptions {
  std::string formula = "theorem1";
  std::string shape;
  double sigma = 1.0;
  double delta = 0.05;
  std::optional<std::size_t> measurements;
  double t = 0.0;
  double epsilon = 0.0;
  std::size_t n = 1;
  std::size_t order = 1;
};

struct TailOptions {
  std::string shape;
  std::string law = "gaussian";
  double sigma = 1.0;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t tuple_seed = 1;
  std::vector<double> thresholds{0.5, 1.0, 2.0, 3.0};
};

struct ExperimentOptions {
  std::string config;
  std::string output_dir;
  int threads = 0;
};

struct ReportOptions {
  std::string records;
  std::string output_dir;
};

int run_gen(const GenOptions& o) {
  tnorm::ModelDescriptor desc;
  if (!o.model_file.empty()) {
    desc = tnorm::model_from_json(nlohmann::json::parse(tnorm::io::read_file(o.model_file)));
  } else {
    nlohmann::json doc{{"model", o.model}, {"seed", o.seed}};
    if (o.model == "measurement") {
      doc["M"] = o.measurements;
      doc["entry_law"] = o.law;
      doc["coeff_law"] = o.coeff_law;
      doc["coeff_sigma"] = o.coeff_sigma;
    } else {
      if (o.model == "sampling") doc["M"] = o.measurements;
      doc["law"] = o.law;
      doc["sigma"] = o.sigma;
    }
    desc = tnorm::model_from_json(doc);
  }
  const tnorm::Shape shape = tnorm::Shape::parse(o.shape);
  const tnorm::DenseTensor x = tnorm::sample_model(shape, desc.model, desc.seed);
  auto encoding = tnorm::io::Encoding::automatic;
  if (o.encoding == "json") encoding = tnorm::io::Encoding::json;
  if (o.encoding == "base64") encoding = tnorm::io::Encoding::base64;
  tnorm::io::write_tensor(o.out, x, encoding);
  nlohmann::ordered_json out;
  out["file"] = o.out;
  out["shape"] = shape.dims();
  out["model"] = tnorm::to_json(desc);
  out["frobenius_norm"] = tnorm::frobenius_norm(x);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_estimate(const EstimateOptions& o) {
  const tnorm::DenseTensor x = tnorm::io::read_tensor(o.in);
  nlohmann::ordered_json out;
  out["shape"] = x.shape().dims();
  const tnorm::PowerIterResult est = tnorm::power_iteration(x, o.power);
  out["lower"] = est.value;
  out["converged"] = est.converged;
  out["iterations"] = est.iterations_used;
  out["best_restart"] = est.best_restart;
  out["argmax"] = est.argmax.vectors();
  if (o.epsilon) {
    const tnorm::NetCertificate cert = tnorm::certified_upper_bound(x, *o.epsilon, o.limits);
    out["upper"] = cert.upper_bound;
    out["epsilon"] = cert.epsilon;
    out["net_sizes"] = cert.net_sizes;
    out["net_max"] = cert.net_max;
    out["slack"] = cert.slack;
    out["exp_slack"] = cert.exp_slack;
    out["tuples"] = cert.tuples;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_bound(const BoundOptions& o) {
  const tnorm::FormulaId id = tnorm::parse_formula_id(o.formula);
  tnorm::BoundReport report;
  switch (id) {
    case tnorm::FormulaId::lemma1_tail:
      report = tnorm::lemma1_report(o.t, o.sigma);
      break;
    case tnorm::FormulaId::net_slack:
      report = tnorm::net_slack_report(o.order, o.epsilon);
      break;
    case tnorm::FormulaId::cover_count:
      report = tnorm::cover_count_report(o.n, o.epsilon);
      break;
    default: {
      if (o.shape.empty()) throw CLI::ValidationError("--shape", "is required for " + o.formula);
      tnorm::BoundParams p{tnorm::Shape::parse(o.shape), o.sigma, o.delta, o.measurements};
      if (id == tnorm::FormulaId::theorem1) report = tnorm::theorem1_bound(p);
      else if (id == tnorm::FormulaId::corollary2) report = tnorm::corollary2_bound(p);
      else {
        if (!o.measurements) throw CLI::ValidationError("--M", "is required for corollary1");
        report = tnorm::corollary1_bound(p);
      }
    }
  }
  std::cout << tnorm::to_json(report).dump(2) << "\n";
  for (const auto& flag : report.validity_flags) std::cerr << "warning: " << flag << "\n";
  return report.valid() ? kExitOk : kExitFlags;
}

int run_tail(const TailOptions& o) {
  const tnorm::Shape shape = tnorm::Shape::parse(o.shape);
  const tnorm::SubGaussianLaw law{tnorm::parse_law_kind(o.law), o.sigma};
  tnorm::Rng rng(tnorm::derive_seed(o.tuple_seed, tnorm::stream::kRestart));
  std::vector<std::vector<double>> vectors;
  for (std::size_t n : shape.dims()) vectors.push_back(tnorm::random_unit_vector(rng, n));
  const tnorm::UnitTuple u(std::move(vectors));
  const auto values = tnorm::empirical_tail(shape, law, u, o.trials, o.seed);

  nlohmann::ordered_json out;
  out["shape"] = shape.dims();
  out["law"] = o.law;
  out["sigma"] = o.sigma;
  out["trials"] = o.trials;
  out["rows"] = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (double t : o.thresholds) {
    const double p = tnorm::tail_fraction(values, t);
    const double bound = tnorm::hoeffding_tail(t, o.sigma).uncapped;
    const double noise = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(o.trials));
    const bool ok = p <= bound + noise;
    all_ok = all_ok && ok;
    out["rows"].push_back({{"t", t}, {"empirical", p}, {"bound", bound}, {"allowance", noise},
                           {"ok", ok}});
  }
  out["ok"] = all_ok;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_experiment_cmd(const ExperimentOptions& o) {
  tnorm::ExperimentConfig cfg = tnorm::load_config(o.config);
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  else if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
  if (o.threads > 0) cfg.threads = o.threads;
  const tnorm::ExperimentResult result = tnorm::run_experiment(cfg);
  auto out = tnorm::summary_to_json(result.summary);
  out["output_dir"] = cfg.output_dir.string();
  std::cout << out.dump(2) << "\n";
  for (const auto& r : result.records)
    if (r.failed) std::cerr << "trial failed: " << r.error << "\n";
  return kExitOk;
}

int run_report(const ReportOptions& o) {
  const auto records = tnorm::records_from_csv(tnorm::io::read_file(o.records));
  const auto summary = tnorm::summarize(records);
  const std::filesystem::path dir =
      o.output_dir.empty() ? default_output_dir() : std::filesystem::path(o.output_dir);
  tnorm::ReportFormats formats;
  // Do not rewrite the input in place.
  std::error_code ec;
  formats.csv = !std::filesystem::equivalent(o.records, dir / "trials.csv", ec);
  for (const auto& p : tnorm::write_report(records, summary, dir, formats))
    std::cout << p.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral norms of random tensors: estimation, certification and bounds"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a random tensor to a file");
  gen_cmd->add_option("--shape", gen.shape, "Dimensions, e.g. 10,10,10")->required();
  gen_cmd->add_option("--model", gen.model, "iid | measurement | sampling")
      ->check(CLI::IsMember({"iid", "measurement", "sampling"}));
  gen_cmd->add_option("--law", gen.law, "gaussian | rademacher | uniform (entry law)");
  gen_cmd->add_option("--sigma", gen.sigma, "Variance proxy of the entries");
  gen_cmd->add_option("--M", gen.measurements, "Measurements (measurement) or samples (sampling)");
  gen_cmd->add_option("--coeff-law", gen.coeff_law, "Law of the measurement coefficients");
  gen_cmd->add_option("--coeff-sigma", gen.coeff_sigma, "Proxy of the measurement coefficients");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--model-file", gen.model_file, "Model description JSON (overrides flags)");
  gen_cmd->add_option("--out,-o", gen.out, "Output tensor file")->required();
  gen_cmd->add_option("--encoding", gen.encoding, "auto | json | base64")
      ->check(CLI::IsMember({"auto", "json", "base64"}));

  EstimateOptions est;
  auto* est_cmd = app.add_subcommand("estimate", "Bracket the spectral norm of a tensor file");
  est_cmd->add_option("--in,-i", est.in, "Tensor file")->required();
  est_cmd->add_option("--restarts", est.power.restarts, "Power iteration restarts");
  est_cmd->add_option("--max-iters", est.power.max_iters, "Sweeps per restart");
  est_cmd->add_option("--tol", est.power.tol, "Relative objective change to stop");
  est_cmd->add_option("--seed", est.power.seed, "Seed for random restarts");
  est_cmd->add_option("--epsilon", est.epsilon, "Net radius; enables the certified upper bound");
  est_cmd->add_option("--cover-cap", est.limits.cover_cap, "Maximum points per sphere cover");
  est_cmd->add_option("--enumeration-cap", est.limits.enumeration_cap,
                      "Maximum product-net tuples");

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate a closed-form bound");
  bound_cmd->add_option("--formula", bound.formula,
                        "theorem1 | corollary1 | corollary2 | lemma1_tail | net_slack | cover_count")
      ->check(CLI::IsMember({"theorem1", "corollary1", "corollary2", "lemma1_tail", "net_slack",
                             "cover_count"}));
  bound_cmd->add_option("--shape", bound.shape, "Dimensions, e.g. 10,10,10");
  bound_cmd->add_option("--sigma", bound.sigma, "Variance proxy");
  bound_cmd->add_option("--delta", bound.delta, "Failure probability");
  bound_cmd->add_option("--M", bound.measurements, "Number of measurements (corollary1)");
  bound_cmd->add_option("--t", bound.t, "Threshold (lemma1_tail)");
  bound_cmd->add_option("--epsilon", bound.epsilon, "Net radius (net_slack, cover_count)");
  bound_cmd->add_option("--n", bound.n, "Sphere dimension (cover_count)");
  bound_cmd->add_option("--K", bound.order, "Tensor order (net_slack)");

  TailOptions tail;
  auto* tail_cmd = app.add_subcommand("tail", "Empirical tail of X(u) at a fixed unit tuple");
  tail_cmd->add_option("--shape", tail.shape, "Dimensions")->required();
  tail_cmd->add_option("--law", tail.law, "gaussian | rademacher | uniform");
  tail_cmd->add_option("--sigma", tail.sigma, "Variance proxy");
  tail_cmd->add_option("--trials", tail.trials, "Number of samples");
  tail_cmd->add_option("--seed", tail.seed, "Sampling seed");
  tail_cmd->add_option("--tuple-seed", tail.tuple_seed, "Seed of the fixed unit tuple");
  tail_cmd->add_option("--t", tail.thresholds, "Thresholds")->delimiter(',');

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo experiment config");
  exp_cmd->add_option("--config,-c", exp.config, "Experiment config file")->required();
  exp_cmd->add_option("--output-dir,-o", exp.output_dir,
                      std::string("Output directory (default: config, then $") + kOutputDirEnv + ")");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads");

  ReportOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Re-render summary and plot from stored records");
  rep_cmd->add_option("--records,-r", rep.records, "trials.csv")->required();
  rep_cmd->add_option("--output-dir,-o", rep.output_dir,
                      std::string("Output directory (default: $") + kOutputDirEnv + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*est_cmd) return run_estimate(est);
    if (*bound_cmd) return run_bound(bound);
    if (*tail_cmd) return run_tail(tail);
    if (*exp_cmd) return run_experiment_cmd(exp);
    if (*rep_cmd) return run_report(rep);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // Bad parameters or dimensions.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
