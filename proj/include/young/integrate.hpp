#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "young/errors.hpp"
#include "young/fraccalc.hpp"
#include "young/grid_path.hpp"
#include "young/holder.hpp"

namespace young {

enum class IntegralMethod { riemann_stieltjes, zahle };

inline const char* to_string(IntegralMethod m) {
  return m == IntegralMethod::riemann_stieltjes ? "riemann_stieltjes"
                                                : "zahle";
}

template <typename Scalar>
struct IntegralResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> value;
  IntegralMethod method;
  Index resolution;
  Scalar est_error;  // difference across the last two refinement levels
  std::string warning;
};

namespace detail {

// Shape handling shared by both methods: f holds a (rows x m) matrix per
// grid point, stored row-major in its dimension; g holds an m-vector. The
// integral is the rows-vector with components sum_j int f^{rj} dg^j.
// rows == 0 means "infer": dimensions equal => componentwise pairing
// summed into a single component.
template <typename Scalar>
Index resolve_rows(const GridPath<Scalar>& f, const GridPath<Scalar>& g,
                   Index rows) {
  if (f.size() != g.size() || !f.times.isApprox(g.times))
    throw precondition_error("integral: f and g must share the same grid");
  const Index m = g.dimension();
  if (rows == 0) {
    if (f.dimension() == m) return 1;
    if (f.dimension() % m == 0) return f.dimension() / m;
    throw precondition_error("integral: f dimension incompatible with g");
  }
  if (f.dimension() != rows * m)
    throw precondition_error("integral: f dimension != rows * dim(g)");
  return rows;
}

// Trapezoid Riemann-Stieltjes sum: the exact integral of the piecewise
// linear interpolant of f against that of g.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rs_value(const GridPath<Scalar>& f,
                                                  const GridPath<Scalar>& g,
                                                  Index rows) {
  const Index m = g.dimension();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(rows);
  for (Index i = 0; i + 1 < g.size(); ++i)
    for (Index r = 0; r < rows; ++r) {
      Scalar acc = 0;
      for (Index j = 0; j < m; ++j) {
        const Index c = r * m + j;
        acc += Scalar(0.5) * (f.values(i, c) + f.values(i + 1, c)) *
               (g.values(i + 1, j) - g.values(i, j));
      }
      out(r) += acc;
    }
  return out;
}

// 8-point Gauss-Legendre on (0,1); nodes symmetric, node[q-1-r] = 1-node[r].
template <typename Scalar>
struct GaussCell {
  static constexpr int q = 8;
  static const std::vector<Scalar>& nodes() {
    static const std::vector<Scalar> xs = [] {
      const double x[4] = {0.1834346424956498, 0.5255324099163290,
                           0.7966664774136267, 0.9602898564975363};
      std::vector<Scalar> v(8);
      for (int i = 0; i < 4; ++i) {
        v[static_cast<std::size_t>(3 - i)] = Scalar(0.5 * (1.0 - x[i]));
        v[static_cast<std::size_t>(4 + i)] = Scalar(0.5 * (1.0 + x[i]));
      }
      return v;
    }();
    return xs;
  }
  static const std::vector<Scalar>& weights() {
    static const std::vector<Scalar> ws = [] {
      const double w[4] = {0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};
      std::vector<Scalar> v(8);
      for (int i = 0; i < 4; ++i) {
        v[static_cast<std::size_t>(3 - i)] = Scalar(0.5 * w[i]);
        v[static_cast<std::size_t>(4 + i)] = Scalar(0.5 * w[i]);
      }
      return v;
    }();
    return ws;
  }
};

// One scalar Zaehle pairing. The constant part of f has the exact
// derivative f(a) (t-a)^{-alpha} / Gamma(1-alpha); that kernel is
// integrated in closed form against the interpolant of the g-side bracket,
// which keeps the t = a singularity out of the quadrature. The remainder
// pairing of D^alpha(f - f(a)) with the bracket is integrated by composite
// per-cell Gauss-Legendre with both fields evaluated exactly at the
// quadrature points: nodal sampling alone would miss the correlated
// intra-cell variation of the two fields, which contributes at order
// h^{2 beta - 1} for beta-Hoelder data. The overall minus sign is the
// product of the two unimodular factors in the pairing.
template <typename Scalar>
Scalar zahle_scalar(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& times,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& fvals,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& gvals,
                    Scalar alpha) {
  const Index n = times.size();
  SampledFunction<Scalar> f;
  f.times = times;
  f.values = fvals;

  // g_{b-} reflected; its left endpoint value is 0, so the subtracted
  // derivative extends by 0 exactly where the outer integrand needs it.
  SampledFunction<Scalar> grefl;
  {
    SampledFunction<Scalar> gb;
    gb.times = times;
    gb.values = gvals.array() - gvals(n - 1);
    grefl = detail::reflect(gb);
  }
  const auto mrefl = weyl_left_values(grefl, Scalar(1) - alpha, true);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bracket(n);
  for (Index i = 0; i < n; ++i) bracket(i) = mrefl(n - 1 - i);

  SampledFunction<Scalar> bfun;
  bfun.times = times;
  bfun.values = bracket;
  const Scalar kernel_part =
      f.values(0) / Scalar(gamma_fn(double(1 - alpha))) *
      kernel_weighted_integral(bfun, Scalar(1) - alpha);

  const auto& xs = GaussCell<Scalar>::nodes();
  const auto& ws = GaussCell<Scalar>::weights();
  const Index q = static_cast<Index>(xs.size());
  const auto rvals = weyl_left_at_offsets(f, alpha, xs);
  const auto mvals = weyl_left_at_offsets(grefl, Scalar(1) - alpha, xs);
  Scalar gl_part = 0;
  for (Index i = 0; i + 1 < n; ++i) {
    const Scalar hi = times(i + 1) - times(i);
    Scalar cell = 0;
    for (Index r = 0; r < q; ++r)
      cell += ws[static_cast<std::size_t>(r)] * rvals(r, i) *
              mvals(q - 1 - r, n - 2 - i);
    gl_part += hi * cell;
  }
  return -(kernel_part + gl_part);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> zahle_value(
    const GridPath<Scalar>& f, const GridPath<Scalar>& g, Index rows,
    Scalar alpha) {
  const Index m = g.dimension();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(rows);
  for (Index r = 0; r < rows; ++r) {
    Scalar acc = 0;
    for (Index j = 0; j < m; ++j)
      acc += zahle_scalar<Scalar>(f.times, f.values.col(r * m + j),
                                  g.values.col(j), alpha);
    out(r) = acc;
  }
  return out;
}

}  // namespace detail

// Riemann-Stieltjes integral of f against g on their shared grid, with a
// two-level refinement difference as the error estimate. Cell sums are
// trapezoid (the exact Stieltjes integral of the interpolants); in the
// Young regime every cell rule converges to the same limit.
template <typename Scalar>
IntegralResult<Scalar> rs_integral(const GridPath<Scalar>& f,
                                   const GridPath<Scalar>& g,
                                   Index rows = 0) {
  rows = detail::resolve_rows(f, g, rows);
  IntegralResult<Scalar> res;
  res.method = IntegralMethod::riemann_stieltjes;
  res.resolution = g.size();
  res.value = detail::rs_value(f, g, rows);
  if (g.size() >= 3) {
    const auto coarse =
        detail::rs_value(coarsen(f, Index(2)), coarsen(g, Index(2)), rows);
    res.est_error = (res.value - coarse).norm();
  } else {
    res.est_error = 0;
  }
  const Scalar lam = estimate_holder_exponent(f);
  const Scalar mu = estimate_holder_exponent(g);
  if (!(lam + mu > Scalar(1)))
    res.warning = "holder estimates " + std::to_string(double(lam)) + " + " +
                  std::to_string(double(mu)) +
                  " <= 1; Young integrability not assured";
  return res;
}

// Same integral through the fractional representation: the pairing of
// D_{a+}^alpha f with the bracket of D_{b-}^{1-alpha} g_{b-}. alpha must
// be compatible with the measured Hoelder exponents of f and g.
template <typename Scalar>
IntegralResult<Scalar> zahle_integral(const GridPath<Scalar>& f,
                                      const GridPath<Scalar>& g,
                                      FracOrder<Scalar> order,
                                      Index rows = 0) {
  rows = detail::resolve_rows(f, g, rows);
  const Scalar lam = estimate_holder_exponent(f);
  const Scalar mu = estimate_holder_exponent(g);
  if (!(lam > order.alpha) || !(mu > Scalar(1) - order.alpha))
    throw precondition_error(
        "zahle_integral: order alpha=" + std::to_string(double(order.alpha)) +
        " incompatible with holder estimates lambda_hat=" +
        std::to_string(double(lam)) +
        ", mu_hat=" + std::to_string(double(mu)) +
        " (need lambda_hat > alpha and mu_hat > 1 - alpha)");
  IntegralResult<Scalar> res;
  res.method = IntegralMethod::zahle;
  res.resolution = g.size();
  res.value = detail::zahle_value(f, g, rows, order.alpha);
  if (g.size() >= 5) {
    const auto coarse = detail::zahle_value(coarsen(f, Index(2)),
                                            coarsen(g, Index(2)), rows,
                                            order.alpha);
    res.est_error = (res.value - coarse).norm();
  } else {
    res.est_error = 0;
  }
  return res;
}

// Picks an admissible alpha from the measured exponents.
template <typename Scalar>
IntegralResult<Scalar> zahle_integral(const GridPath<Scalar>& f,
                                      const GridPath<Scalar>& g,
                                      Index rows = 0) {
  const Scalar lam = estimate_holder_exponent(f);
  const Scalar mu = estimate_holder_exponent(g);
  if (!(lam + mu > Scalar(1)))
    throw precondition_error(
        "zahle_integral: holder estimates lambda_hat=" +
        std::to_string(double(lam)) + ", mu_hat=" + std::to_string(double(mu)) +
        " do not satisfy lambda + mu > 1");
  Scalar alpha;
  const Scalar lo = std::min(lam, mu);
  if (lo > Scalar(0.5)) {
    alpha = default_alpha(lo);
  } else {
    alpha = Scalar(0.5) * ((Scalar(1) - mu) + lam);  // interval midpoint
  }
  return zahle_integral(f, g, FracOrder<Scalar>(alpha), rows);
}

// Running integral x_k = sum of trapezoid cells up to t_k; the fixed-point
// form of the solver consumes this.
template <typename Scalar>
GridPath<Scalar> rs_cumulative(const GridPath<Scalar>& f,
                               const GridPath<Scalar>& g, Index rows = 0) {
  rows = detail::resolve_rows(f, g, rows);
  const Index m = g.dimension();
  GridPath<Scalar> out;
  out.times = g.times;
  out.values.setZero(g.size(), rows);
  for (Index i = 0; i + 1 < g.size(); ++i) {
    for (Index r = 0; r < rows; ++r) {
      Scalar acc = 0;
      for (Index j = 0; j < m; ++j) {
        const Index c = r * m + j;
        acc += Scalar(0.5) * (f.values(i, c) + f.values(i + 1, c)) *
               (g.values(i + 1, j) - g.values(i, j));
      }
      out.values(i + 1, r) = out.values(i, r) + acc;
    }
  }
  return out;
}

}  // namespace young
