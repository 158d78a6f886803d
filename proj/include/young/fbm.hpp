#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "young/errors.hpp"
#include "young/grid_path.hpp"
#include "young/rng.hpp"

namespace young {

enum class FbmMethod { cholesky, circulant_embedding };

inline const char* to_string(FbmMethod m) {
  return m == FbmMethod::cholesky ? "cholesky" : "circulant_embedding";
}

// Fractional Brownian motion on a uniform grid over [0, horizon] with
// n_points samples (so n_points - 1 increments), one independent fBm per
// coordinate. The regime of interest is hurst in (1/2, 1).
struct FbmSpec {
  double hurst = 0.75;
  Index dimension = 1;
  Index n_points = 1025;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  FbmMethod method = FbmMethod::circulant_embedding;

  void validate() const {
    if (!(hurst > 0.5 && hurst < 1.0))
      throw precondition_error("FbmSpec: hurst must lie in (1/2, 1)");
    if (dimension < 1) throw precondition_error("FbmSpec: dimension >= 1");
    if (n_points < 2) throw precondition_error("FbmSpec: need >= 2 grid points");
    if (!(horizon > 0)) throw precondition_error("FbmSpec: horizon > 0");
  }
};

// R_H(t,s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
inline double covariance_rh(double t, double s, double hurst) {
  if (t < 0 || s < 0) throw precondition_error("covariance_rh: times must be >= 0");
  if (!(hurst > 0 && hurst < 1))
    throw precondition_error("covariance_rh: hurst must lie in (0,1)");
  const double twoH = 2.0 * hurst;
  return 0.5 * (std::pow(t, twoH) + std::pow(s, twoH) -
                std::pow(std::abs(t - s), twoH));
}

// Autocovariance of unit-spaced fractional Gaussian noise scaled to step h.
inline double fgn_covariance(Index lag, double hurst, double h) {
  const double twoH = 2.0 * hurst;
  const double k = static_cast<double>(lag < 0 ? -lag : lag);
  return 0.5 * std::pow(h, twoH) *
         (std::pow(k + 1.0, twoH) - 2.0 * std::pow(k, twoH) +
          std::pow(std::abs(k - 1.0), twoH));
}

namespace detail {

// Clips small negative embedding eigenvalues in place. Returns the clipped
// mass; throws when it exceeds rel_tol times the total (the trace of the
// circulant embedding).
inline double sanitize_embedding_eigenvalues(Eigen::VectorXd& lambda,
                                             double rel_tol = 1e-8) {
  double pos = 0, neg = 0;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) >= 0)
      pos += lambda(i);
    else
      neg -= lambda(i);
  }
  if (neg == 0) return 0;
  if (neg > rel_tol * (pos + neg))
    throw numerical_error(
        "circulant embedding: negative eigenvalue mass too large (" +
        std::to_string(neg) + " of " + std::to_string(pos + neg) + ")");
  for (Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) < 0) lambda(i) = 0;
  return neg;
}

// Embedding eigenvalues for n_inc increments: FFT of the length-2*n_inc
// circulant first row built from the fGn autocovariance.
inline Eigen::VectorXd circulant_eigenvalues(Index n_inc, double hurst,
                                             double h) {
  const Index m = 2 * n_inc;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
  for (Index k = 0; k < m; ++k) {
    const Index lag = k <= n_inc ? k : m - k;
    row[static_cast<std::size_t>(k)] = fgn_covariance(lag, hurst, h);
  }
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(m));
  Eigen::FFT<double> fft;
  fft.fwd(freq, row);
  Eigen::VectorXd lambda(m);
  for (Index k = 0; k < m; ++k)
    lambda(k) = freq[static_cast<std::size_t>(k)].real();
  return lambda;
}

// One fGn sample of length n_inc by Davies-Harte. The spectral Gaussians
// are drawn in a fixed order (k = 0, m/2, then pairs), so output is a pure
// function of the rng state.
inline Eigen::VectorXd sample_fgn_circulant(const Eigen::VectorXd& lambda,
                                            Index n_inc, Rng& rng) {
  const Index m = 2 * n_inc;
  std::vector<std::complex<double>> a(static_cast<std::size_t>(m));
  const double inv_m = 1.0 / static_cast<double>(m);
  a[0] = std::sqrt(lambda(0) * inv_m) * rng.normal();
  a[static_cast<std::size_t>(m / 2)] =
      std::sqrt(lambda(m / 2) * inv_m) * rng.normal();
  const double half = std::sqrt(0.5);
  for (Index k = 1; k < m / 2; ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    const std::complex<double> v(half * re, half * im);
    const double s = std::sqrt(lambda(k) * inv_m);
    a[static_cast<std::size_t>(k)] = s * v;
    a[static_cast<std::size_t>(m - k)] = s * std::conj(v);
  }
  std::vector<std::complex<double>> time(static_cast<std::size_t>(m));
  Eigen::FFT<double> fft;
  fft.inv(time, a);  // (1/m) sum a_k e^{+2 pi i jk/m}
  Eigen::VectorXd x(n_inc);
  for (Index j = 0; j < n_inc; ++j)
    x(j) = time[static_cast<std::size_t>(j)].real() * static_cast<double>(m);
  return x;
}

// Lower-triangular Cholesky factor of the covariance of (B_{t_1},...,B_{t_n})
// with t_0 = 0 dropped.
inline Eigen::MatrixXd fbm_cholesky_factor(Index n_inc, double hurst,
                                           double h) {
  Eigen::MatrixXd cov(n_inc, n_inc);
  for (Index i = 0; i < n_inc; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double c = covariance_rh((i + 1) * h, (j + 1) * h, hurst);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw numerical_error(
        "fbm cholesky: covariance matrix not numerically positive definite "
        "(n_inc=" + std::to_string(n_inc) + ", H=" + std::to_string(hurst) + ")");
  return llt.matrixL();
}

}  // namespace detail

// Precomputed sampler: factor/eigenvalues built once, then any number of
// deterministic draws indexed by (seed, path_index). Coordinate j of path p
// uses stream p * dimension + j.
class FbmSampler {
 public:
  explicit FbmSampler(FbmSpec spec) : spec_(spec) {
    spec_.validate();
    const Index n_inc = spec_.n_points - 1;
    h_ = spec_.horizon / static_cast<double>(n_inc);
    if (spec_.method == FbmMethod::cholesky) {
      chol_ = detail::fbm_cholesky_factor(n_inc, spec_.hurst, h_);
    } else {
      lambda_ = detail::circulant_eigenvalues(n_inc, spec_.hurst, h_);
      const double clipped =
          detail::sanitize_embedding_eigenvalues(lambda_);
      if (clipped > 0)
        std::cerr << "[young] warning: circulant embedding clipped negative "
                     "eigenvalue mass "
                  << clipped << "\n";
    }
  }

  const FbmSpec& spec() const { return spec_; }
  double step() const { return h_; }

  GridPathd sample(Index path_index = 0) const {
    const Index n = spec_.n_points;
    const Index n_inc = n - 1;
    GridPathd out;
    out.times.resize(n);
    for (Index i = 0; i < n; ++i) out.times(i) = h_ * static_cast<double>(i);
    out.values.setZero(n, spec_.dimension);
    for (Index j = 0; j < spec_.dimension; ++j) {
      Rng rng = Rng::substream(
          spec_.seed,
          static_cast<std::uint64_t>(path_index) *
                  static_cast<std::uint64_t>(spec_.dimension) +
              static_cast<std::uint64_t>(j));
      Eigen::VectorXd inc;
      if (spec_.method == FbmMethod::cholesky) {
        Eigen::VectorXd z(n_inc);
        for (Index i = 0; i < n_inc; ++i) z(i) = rng.normal();
        Eigen::VectorXd levels = chol_.template triangularView<Eigen::Lower>() * z;
        inc.resize(n_inc);
        inc(0) = levels(0);
        for (Index i = 1; i < n_inc; ++i) inc(i) = levels(i) - levels(i - 1);
      } else {
        inc = detail::sample_fgn_circulant(lambda_, n_inc, rng);
      }
      double acc = 0;
      for (Index i = 0; i < n_inc; ++i) {
        acc += inc(i);
        out.values(i + 1, j) = acc;
      }
    }
    return out;
  }

 private:
  FbmSpec spec_;
  double h_ = 0;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd lambda_;
};

// One-shot sample. B_0 = 0; covariance R_H per coordinate, coordinates
// independent; deterministic given (seed, method, grid, path_index).
inline GridPathd sample_fbm(const FbmSpec& spec, Index path_index = 0) {
  return FbmSampler(spec).sample(path_index);
}

// Default method choice used by the experiment drivers: exact Cholesky for
// small grids, circulant embedding beyond 2^11 points.
inline FbmMethod default_fbm_method(Index n_points) {
  return n_points <= (1 << 11) ? FbmMethod::cholesky
                               : FbmMethod::circulant_embedding;
}

}  // namespace young
