#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hg {

struct DomainBox {
  double lo = -0.5;
  double hi = 0.5;
};

struct SamplingOptions {
  int points = 16;
  int tuples = 64;
  std::uint64_t seed = 42;
};

/// Seeded source of sample points and vectors. Uses mt19937_64 and a
/// portable 53-bit mantissa mapping, so streams are identical across
/// standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  std::vector<double> point(int dim, const DomainBox& box) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& c : p) c = uniform(box.lo, box.hi);
    return p;
  }

  Eigen::VectorXd vector(int dim, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace hg
