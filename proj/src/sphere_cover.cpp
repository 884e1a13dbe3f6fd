#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "tnorm/errors.hpp"
#include "tnorm/spectral.hpp"

namespace tnorm {

namespace {

// Enumerates lattice vectors j in [-J, J]^n with lo2 <= |j|^2 <= hi2 and
// records their primitive direction j / gcd(j).
class ShellWalker {
 public:
  ShellWalker(std::size_t n, long bound, double lo2, double hi2, std::size_t cap)
      : n_(n), bound_(bound), lo2_(lo2), hi2_(hi2), cap_(cap),
        visit_cap_(200 * static_cast<std::uint64_t>(cap) + 1'000'000), current_(n, 0) {}

  std::set<std::vector<long>> run() {
    walk(0, 0.0);
    return std::move(directions_);
  }

 private:
  void walk(std::size_t depth, double partial) {
    if (++visits_ > visit_cap_)
      throw NetTooLarge("sphere cover enumeration exceeded " + std::to_string(visit_cap_) +
                        " lattice points; increase epsilon");
    if (depth == n_) {
      if (partial < lo2_) return;
      long g = 0;
      for (long c : current_) g = std::gcd(g, c < 0 ? -c : c);
      std::vector<long> primitive(current_);
      for (long& c : primitive) c /= g;
      directions_.insert(std::move(primitive));
      if (directions_.size() > cap_)
        throw NetTooLarge("sphere cover exceeds the cap of " + std::to_string(cap_) + " points");
      return;
    }
    const double room = static_cast<double>(n_ - depth - 1) * static_cast<double>(bound_ * bound_);
    for (long c = -bound_; c <= bound_; ++c) {
      const double next = partial + static_cast<double>(c * c);
      if (next > hi2_) continue;
      if (next + room < lo2_) continue;
      current_[depth] = c;
      walk(depth + 1, next);
    }
  }

  std::size_t n_;
  long bound_;
  double lo2_, hi2_;
  std::size_t cap_;
  std::uint64_t visit_cap_;
  std::uint64_t visits_ = 0;
  std::vector<long> current_;
  std::set<std::vector<long>> directions_;
};

}  // namespace

SphereCover build_sphere_cover(std::size_t n, double epsilon, std::size_t cap) {
  if (n < 1) throw ParameterError("sphere cover needs dimension >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("cover epsilon must lie in (0, 1)");
  SphereCover cover{n, epsilon, {}};
  if (n == 1) {
    if (cap < 2) throw NetTooLarge("sphere cover exceeds the cap of " + std::to_string(cap) + " points");
    cover.points = {1.0, -1.0};
    return cover;
  }
  const double pitch = epsilon / std::sqrt(static_cast<double>(n));
  const double bound = std::ceil(1.0 / pitch);
  if (bound > 1e6) throw NetTooLarge("sphere cover lattice too fine; increase epsilon");
  // Squared lattice radii of the shell, widened slightly so rounding never
  // drops a point the covering argument needs.
  const double lo = (1.0 - epsilon / 2.0) / pitch;
  const double hi = (1.0 + epsilon / 2.0) / pitch;
  ShellWalker walker(n, static_cast<long>(bound), lo * lo * (1.0 - 1e-9), hi * hi * (1.0 + 1e-9),
                     cap);
  const auto directions = walker.run();
  cover.points.reserve(directions.size() * n);
  for (const auto& d : directions) {
    double norm2 = 0.0;
    for (long c : d) norm2 += static_cast<double>(c) * static_cast<double>(c);
    const double inv = 1.0 / std::sqrt(norm2);
    for (long c : d) cover.points.push_back(static_cast<double>(c) * inv);
  }
  return cover;
}

}  // namespace tnorm
