#pragma once

// Closed-form concentration bounds for the spectral norm of random tensors
// with independent sub-Gaussian entries.
//
// Every logarithm is natural. K0 = ln(3/2) is the net radius constant: with
// eps = K0 / K the discretization error satisfies e^{eps K} - 1 = 1/2.
//
// Bounds are still evaluated when a precondition fails (so sweeps can plot
// would-be values); the violation is listed in BoundReport::validity_flags.
// Parameters that make a formula meaningless (sigma <= 0, empty shapes,
// negative t) throw ParameterError instead.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tnorm/tensor.hpp"

namespace tnorm {

inline const double kK0 = 0.40546510810816438198;  // ln(3/2)

enum class FormulaId { lemma1_tail, theorem1, corollary1, corollary2, net_slack, cover_count };

std::string_view to_string(FormulaId id);
FormulaId parse_formula_id(std::string_view name);

struct BoundParams {
  Shape shape;
  double sigma = 1.0;
  double delta = 0.05;
  std::optional<std::size_t> measurements;  // M, corollary 1 only
};

struct BoundReport {
  FormulaId formula = FormulaId::theorem1;
  double value = 0.0;
  double log_value = 0.0;
  nlohmann::ordered_json inputs;
  std::vector<std::string> validity_flags;

  bool valid() const noexcept { return validity_flags.empty(); }
};

/// {formula_id, value, log_value, inputs, validity_flags}
nlohmann::ordered_json to_json(const BoundReport& report);

struct TailBound {
  double capped = 0.0;    // min(1, uncapped)
  double uncapped = 0.0;
  double log_value = 0.0; // ln(uncapped)
};

/// 2 exp(-t^2 / (2 sigma^2)): tail of |X(u)| at a fixed unit tuple.
TailBound hoeffding_tail(double t, double sigma);

/// sqrt(8 sigma^2 ((sum n_k) ln(2K/K0) + ln(2/delta))), holds w.p. >= 1 - delta.
BoundReport theorem1_bound(const BoundParams& p);

/// sqrt(32 M sigma^2 ((sum n_k) ln(2K/K0) + ln(4/delta))); needs M >= 2 ln(2/delta).
BoundReport corollary1_bound(const BoundParams& p);

/// Uniform sampling without replacement: same closed form as theorem1_bound.
BoundReport corollary2_bound(const BoundParams& p);

struct Slack {
  double binomial = 0.0;     // (1+eps)^K - 1 = sum_{j>=1} C(K,j) eps^j
  double exponential = 0.0;  // e^{eps K} - 1
};

Slack net_slack(std::size_t order, double epsilon);

struct CoverCount {
  double value = 0.0;      // (2/eps)^n, +inf on overflow
  double log_value = 0.0;  // n ln(2/eps)
};

/// Packing-number bound on an epsilon-cover of S^{n-1}.
CoverCount cover_count_bound(std::size_t n, double epsilon);

/// (2K/K0)^{sum n_k} * 2 exp(-t^2/(8 sigma^2)), evaluated in log space.
TailBound union_tail(const BoundParams& p, double t);

// Report wrappers for the scalar formulas (used by the CLI).
BoundReport lemma1_report(double t, double sigma);
BoundReport net_slack_report(std::size_t order, double epsilon);
BoundReport cover_count_report(std::size_t n, double epsilon);

}  // namespace tnorm
