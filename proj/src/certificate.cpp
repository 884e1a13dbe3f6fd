#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "tnorm/bounds.hpp"
#include "tnorm/errors.hpp"
#include "tnorm/kernels.hpp"
#include "tnorm/spectral.hpp"

namespace tnorm {

namespace {

// Covers depend only on (n, epsilon, cap); Monte Carlo runs certify many
// tensors of one shape, so they are built once per process.
std::shared_ptr<const SphereCover> cached_cover(std::size_t n, double epsilon, std::size_t cap) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, std::size_t>, std::shared_ptr<const SphereCover>>
      cache;
  const auto key = std::make_tuple(n, epsilon, cap);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto cover = std::make_shared<const SphereCover>(build_sphere_cover(n, epsilon, cap));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(cover)).first->second;
}

std::uint64_t saturating_product(const std::vector<std::size_t>& sizes) {
  std::uint64_t product = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && product > std::numeric_limits<std::uint64_t>::max() / s)
      return std::numeric_limits<std::uint64_t>::max();
    product *= s;
  }
  return product;
}

}  // namespace

std::uint64_t enumeration_size(const Shape& shape, double epsilon, std::size_t cover_cap) {
  std::vector<std::size_t> sizes;
  for (std::size_t n : shape.dims()) sizes.push_back(cached_cover(n, epsilon, cover_cap)->size());
  return saturating_product(sizes);
}

NetCertificate certified_upper_bound(const DenseTensor& x, double epsilon,
                                     CertificateLimits limits) {
  if (x.order() == 0) throw DimensionError("certification needs a tensor of order >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("certificate epsilon must lie in (0, 1)");
  const Slack slack = net_slack(x.order(), epsilon);
  if (!(slack.binomial < 1.0))
    throw ParameterError("net slack (1+eps)^K - 1 = " + std::to_string(slack.binomial) +
                         " is not below 1; use a smaller epsilon");

  std::vector<std::shared_ptr<const SphereCover>> covers;
  NetCertificate cert;
  cert.epsilon = epsilon;
  cert.slack = slack.binomial;
  cert.exp_slack = slack.exponential;
  for (std::size_t n : x.shape().dims()) {
    covers.push_back(cached_cover(n, epsilon, limits.cover_cap));
    cert.net_sizes.push_back(covers.back()->size());
  }
  const std::uint64_t tuples = saturating_product(cert.net_sizes);
  if (tuples > limits.enumeration_cap)
    throw NetTooLarge("product net of " + std::to_string(tuples) + " tuples exceeds the cap of " +
                      std::to_string(limits.enumeration_cap) +
                      "; use smaller dimensions or a larger epsilon");

  std::vector<kernels::CoverView> views;
  for (const auto& c : covers) views.push_back({c->points, c->dim});
  kernels::NetMax best = kernels::net_max(x, views);
  cert.net_max = best.value;
  cert.argmax = std::move(best.argmax);
  cert.tuples = best.tuples;
  cert.upper_bound = cert.net_max / (1.0 - cert.slack);
  return cert;
}

NormBracket spectral_norm_bracket(const DenseTensor& x, const PowerIterConfig& cfg,
                                  double epsilon, CertificateLimits limits) {
  NetCertificate cert = certified_upper_bound(x, epsilon, limits);
  PowerIterResult estimate = power_iteration(x, cfg);
  const double lower = estimate.value;
  const double upper = cert.upper_bound;
  return NormBracket{lower, upper, std::move(estimate), std::move(cert)};
}

}  // namespace tnorm
