#pragma once

// Two-sided estimates of the tensor spectral norm
//
//   ||X|| = sup { X(u_1, ..., u_K) : u_k in S^{n_k - 1} }.
//
// power_iteration gives a lower bound (the value at a feasible tuple);
// certified_upper_bound enumerates explicit epsilon-covers of every sphere
// and turns the best net value into a sound upper bound.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tnorm/tensor.hpp"

namespace tnorm {

struct PowerIterConfig {
  std::size_t restarts = 10;
  std::size_t max_iters = 500;  // sweeps per restart
  double tol = 1e-10;           // relative change of |X(u)| between sweeps
  std::uint64_t seed = 0;
  bool record_trace = false;

  void validate() const;
};

struct PowerIterResult {
  double value = 0.0;  // |X(argmax)|
  UnitTuple argmax;
  std::size_t iterations_used = 0;  // sweeps of the winning restart
  bool converged = false;           // winning restart met tol
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  /// With record_trace: |X(u)| after every single-mode update, per restart.
  std::vector<std::vector<double>> traces;
};

/// Multi-restart higher-order power method (rank-one ALS). Restart 0 starts
/// from the basis tuple of the largest-magnitude entry; restart r > 0 draws
/// each u_k uniformly on its sphere from stream (seed, r). Each sweep sets
/// u_k <- normalize(X contracted on all modes but k) for k = 1..K, which never
/// decreases |X(u)|. The best restart wins, lowest index on ties.
PowerIterResult power_iteration(const DenseTensor& x, const PowerIterConfig& cfg);

inline constexpr std::size_t kDefaultCoverCap = 2'000'000;
inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// A finite epsilon-cover of the unit sphere S^{n-1}, point-major storage.
struct SphereCover {
  std::size_t dim = 0;
  double epsilon = 0.0;
  std::vector<double> points;

  std::size_t size() const noexcept { return dim == 0 ? 0 : points.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

/// Grid cover: lattice of pitch epsilon/sqrt(n) on [-1,1]^n, keep points with
/// norm in [1 - epsilon/2, 1 + epsilon/2], project to the sphere, drop
/// duplicate directions. Every unit x has a lattice point within epsilon/2,
/// which survives the shell filter and projects to within epsilon of x. For
/// n = 1 the cover is {+1, -1}. Throws NetTooLarge beyond `cap` points.
SphereCover build_sphere_cover(std::size_t n, double epsilon, std::size_t cap = kDefaultCoverCap);

struct NetCertificate {
  double epsilon = 0.0;
  std::vector<std::size_t> net_sizes;
  double net_max = 0.0;      // max |X| over the product net
  double slack = 0.0;        // (1 + eps)^K - 1
  double exp_slack = 0.0;    // e^{eps K} - 1, the looser majorant
  double upper_bound = 0.0;  // net_max / (1 - slack)
  std::vector<std::size_t> argmax;  // cover indices of the best net tuple
  std::uint64_t tuples = 0;
};

struct CertificateLimits {
  std::size_t cover_cap = kDefaultCoverCap;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Sound upper bound on ||X||: writing the maximizer as net point plus
/// perturbation in every mode gives ||X|| <= net_max + ((1+eps)^K - 1)||X||.
NetCertificate certified_upper_bound(const DenseTensor& x, double epsilon,
                                     CertificateLimits limits = {});

/// Number of product-net tuples certified_upper_bound would enumerate.
std::uint64_t enumeration_size(const Shape& shape, double epsilon,
                               std::size_t cover_cap = kDefaultCoverCap);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  PowerIterResult estimate;
  NetCertificate certificate;
};

NormBracket spectral_norm_bracket(const DenseTensor& x, const PowerIterConfig& cfg,
                                  double epsilon, CertificateLimits limits = {});

}  // namespace tnorm
