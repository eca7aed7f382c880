#pragma once

#include <vector>

#include "hg/local_geometry.hpp"
#include "hg/sampling.hpp"

namespace hg {

/// Columns of `vectors` are g-orthonormal: g(e_a, e_b) = signs[a] δ_ab.
struct OrthonormalFrame {
  Mat vectors;
  std::vector<int> signs;
};

/// Gram–Schmidt with signature signs, starting from a random basis. A
/// candidate with |g(v, v)| < 1e-8 discards the basis and redraws it; after
/// `max_retries` redraws a GeometryError is thrown.
OrthonormalFrame gram_schmidt(const Mat& g, Sampler& rng, int max_retries = 20);

/// Frame {e_1..e_n, Je_1..Je_n} of a Norden metric with signs (+..+, -..-).
/// Each e_k is a complex rescaling (a v + b Jv) of a random vector taken
/// from the J-invariant complement of the previous pairs.
OrthonormalFrame norden_frame(const Mat& g, const Mat& J, Sampler& rng, int max_retries = 20);

/// max |E^T g E - diag(signs)|
double frame_residual(const Mat& g, const OrthonormalFrame& f);

}  // namespace hg
