#include "tnorm/bounds.hpp"

#include <cmath>
#include <limits>

#include "tnorm/errors.hpp"

namespace tnorm {

std::string_view to_string(FormulaId id) {
  switch (id) {
    case FormulaId::lemma1_tail: return "lemma1_tail";
    case FormulaId::theorem1: return "theorem1";
    case FormulaId::corollary1: return "corollary1";
    case FormulaId::corollary2: return "corollary2";
    case FormulaId::net_slack: return "net_slack";
    case FormulaId::cover_count: return "cover_count";
  }
  return "unknown";
}

FormulaId parse_formula_id(std::string_view name) {
  for (auto id : {FormulaId::lemma1_tail, FormulaId::theorem1, FormulaId::corollary1,
                  FormulaId::corollary2, FormulaId::net_slack, FormulaId::cover_count})
    if (to_string(id) == name) return id;
  throw ParameterError("unknown formula '" + std::string(name) + "'");
}

nlohmann::ordered_json to_json(const BoundReport& report) {
  nlohmann::ordered_json doc;
  doc["formula_id"] = to_string(report.formula);
  doc["value"] = report.value;
  doc["log_value"] = report.log_value;
  doc["inputs"] = report.inputs;
  doc["validity_flags"] = report.validity_flags;
  return doc;
}

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("sigma must be positive and finite");
}

void check_shape(const Shape& shape) {
  if (shape.order() == 0) throw ParameterError("bounds need a shape with at least one mode");
}

// (sum n_k) ln(2K/K0): log of the union-bound count over the product net.
double log_net_count(const Shape& shape) {
  const double order = static_cast<double>(shape.order());
  return static_cast<double>(shape.sum_dims()) * std::log(2.0 * order / kK0);
}

nlohmann::ordered_json echo(const BoundParams& p) {
  nlohmann::ordered_json in;
  in["shape"] = p.shape.dims();
  in["sigma"] = p.sigma;
  in["delta"] = p.delta;
  if (p.measurements) in["M"] = *p.measurements;
  return in;
}

void flag_delta(const BoundParams& p, BoundReport& r) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) r.validity_flags.push_back("delta out of range");
}

// sqrt(scale * (log_net_count + ln(c / delta))) with its log.
void fill_sqrt_form(BoundReport& r, double scale, double count_term, double confidence_term) {
  const double inside = scale * (count_term + confidence_term);
  r.value = std::sqrt(inside);
  r.log_value = 0.5 * std::log(inside);
}

BoundReport theorem1_form(const BoundParams& p, FormulaId id) {
  check_sigma(p.sigma);
  check_shape(p.shape);
  BoundReport r;
  r.formula = id;
  r.inputs = echo(p);
  flag_delta(p, r);
  fill_sqrt_form(r, 8.0 * p.sigma * p.sigma, log_net_count(p.shape), std::log(2.0 / p.delta));
  return r;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
}

}  // namespace

TailBound hoeffding_tail(double t, double sigma) {
  check_sigma(sigma);
  if (!(t >= 0.0)) throw ParameterError("tail threshold t must be nonnegative");
  TailBound b;
  b.log_value = std::log(2.0) - t * t / (2.0 * sigma * sigma);
  b.uncapped = 2.0 * std::exp(-t * t / (2.0 * sigma * sigma));
  b.capped = std::min(1.0, b.uncapped);
  return b;
}

BoundReport theorem1_bound(const BoundParams& p) { return theorem1_form(p, FormulaId::theorem1); }

BoundReport corollary2_bound(const BoundParams& p) { return theorem1_form(p, FormulaId::corollary2); }

BoundReport corollary1_bound(const BoundParams& p) {
  check_sigma(p.sigma);
  check_shape(p.shape);
  if (!p.measurements || *p.measurements < 1)
    throw ParameterError("corollary1 needs the number of measurements M >= 1");
  BoundReport r;
  r.formula = FormulaId::corollary1;
  r.inputs = echo(p);
  flag_delta(p, r);
  const double m = static_cast<double>(*p.measurements);
  if (m < 2.0 * std::log(2.0 / p.delta)) r.validity_flags.push_back("M below 2ln(2/delta)");
  // delta/2 goes to the event ||eps|| > 2 sqrt(M sigma^2), delta/2 to the net.
  fill_sqrt_form(r, 32.0 * m * p.sigma * p.sigma, log_net_count(p.shape), std::log(4.0 / p.delta));
  return r;
}

Slack net_slack(std::size_t order, double epsilon) {
  if (order < 1) throw ParameterError("net slack needs K >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  const double k = static_cast<double>(order);
  return Slack{std::expm1(k * std::log1p(epsilon)), std::expm1(k * epsilon)};
}

CoverCount cover_count_bound(std::size_t n, double epsilon) {
  if (n < 1) throw ParameterError("cover count needs n >= 1");
  check_epsilon(epsilon);
  CoverCount c;
  c.log_value = static_cast<double>(n) * std::log(2.0 / epsilon);
  c.value = std::exp(c.log_value);
  return c;
}

TailBound union_tail(const BoundParams& p, double t) {
  check_sigma(p.sigma);
  check_shape(p.shape);
  if (!(t >= 0.0)) throw ParameterError("tail threshold t must be nonnegative");
  TailBound b;
  b.log_value = log_net_count(p.shape) + std::log(2.0) - t * t / (8.0 * p.sigma * p.sigma);
  b.uncapped = std::exp(b.log_value);
  b.capped = std::min(1.0, b.uncapped);
  return b;
}

BoundReport lemma1_report(double t, double sigma) {
  const TailBound b = hoeffding_tail(t, sigma);
  BoundReport r;
  r.formula = FormulaId::lemma1_tail;
  r.value = b.capped;
  r.log_value = std::log(b.capped);
  r.inputs["t"] = t;
  r.inputs["sigma"] = sigma;
  r.inputs["uncapped"] = b.uncapped;
  return r;
}

BoundReport net_slack_report(std::size_t order, double epsilon) {
  const Slack s = net_slack(order, epsilon);
  BoundReport r;
  r.formula = FormulaId::net_slack;
  r.value = s.binomial;
  r.log_value = std::log(s.binomial);
  r.inputs["K"] = order;
  r.inputs["epsilon"] = epsilon;
  r.inputs["exp_slack"] = s.exponential;
  if (!(s.binomial < 1.0)) r.validity_flags.push_back("slack not below 1");
  return r;
}

BoundReport cover_count_report(std::size_t n, double epsilon) {
  const CoverCount c = cover_count_bound(n, epsilon);
  BoundReport r;
  r.formula = FormulaId::cover_count;
  r.value = c.value;
  r.log_value = c.log_value;
  r.inputs["n"] = n;
  r.inputs["epsilon"] = epsilon;
  if (!std::isfinite(c.value)) r.validity_flags.push_back("value overflows; use log_value");
  return r;
}

}  // namespace tnorm
