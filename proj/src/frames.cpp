#include "hg/frames.hpp"

#include <cmath>
#include <complex>

#include "hg/errors.hpp"

namespace hg {

namespace {
constexpr double kIsotropic = 1e-8;
}

OrthonormalFrame gram_schmidt(const Mat& g, Sampler& rng, int max_retries) {
  const int d = static_cast<int>(g.rows());
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    OrthonormalFrame f;
    f.vectors = Mat::Zero(d, d);
    bool ok = true;
    for (int k = 0; k < d && ok; ++k) {
      Vec v = rng.vector(d);
      for (int j = 0; j < k; ++j) {
        const Vec e = f.vectors.col(j);
        v -= f.signs[j] * e.dot(g * v) * e;
      }
      const double n2 = v.dot(g * v);
      if (std::abs(n2) < kIsotropic) {
        ok = false;
        break;
      }
      f.vectors.col(k) = v / std::sqrt(std::abs(n2));
      f.signs.push_back(n2 > 0 ? 1 : -1);
    }
    if (ok) return f;
  }
  throw GeometryError("orthonormal frame: isotropic direction after " +
                      std::to_string(max_retries) + " redraws");
}

OrthonormalFrame norden_frame(const Mat& g, const Mat& J, Sampler& rng, int max_retries) {
  const int d = static_cast<int>(g.rows());
  const int n = d / 2;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Mat E = Mat::Zero(d, d);
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      Vec v = rng.vector(d);
      for (int j = 0; j < k; ++j) {
        const Vec e = E.col(j), je = E.col(n + j);
        v -= e.dot(g * v) * e - je.dot(g * v) * je;
      }
      const Vec jv = J * v;
      // g(z v, z v) = Re(z^2 h), g(z v, J z v) = -Im(z^2 h) with h = g(v,v) - i g(v,Jv),
      // where z v := Re(z) v + Im(z) Jv.
      const std::complex<double> h(v.dot(g * v), -v.dot(g * jv));
      if (std::abs(h) < kIsotropic) {
        ok = false;
        break;
      }
      const std::complex<double> z = 1.0 / std::sqrt(h);
      const Vec e = z.real() * v + z.imag() * jv;
      E.col(k) = e;
      E.col(n + k) = J * e;
    }
    if (ok) {
      OrthonormalFrame f{E, std::vector<int>(static_cast<std::size_t>(d), 1)};
      for (int k = n; k < d; ++k) f.signs[k] = -1;
      return f;
    }
  }
  throw GeometryError("Norden frame: isotropic direction after " + std::to_string(max_retries) +
                      " redraws");
}

double frame_residual(const Mat& g, const OrthonormalFrame& f) {
  Mat m = f.vectors.transpose() * g * f.vectors;
  for (int a = 0; a < m.rows(); ++a) m(a, a) -= f.signs[a];
  return m.cwiseAbs().maxCoeff();
}

}  // namespace hg
