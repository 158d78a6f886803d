#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "young/errors.hpp"
#include "young/grid_path.hpp"
#include "young/holder.hpp"
#include "young/integrate.hpp"
#include "young/vector_field.hpp"

namespace young {

template <typename Scalar>
struct SolveConfig {
  int refinement_levels = 2;   // dyadic coarsenings compared for convergence
  Scalar tolerance = Scalar(1e-3);
  int picard_max_iter = 0;     // optional fixed-point polish after Euler

  void validate() const {
    if (!(tolerance > 0))
      throw precondition_error("SolveConfig: tolerance must be > 0");
    if (refinement_levels < 1)
      throw precondition_error("SolveConfig: refinement_levels >= 1");
  }
};

template <typename Scalar>
struct SolveResult {
  GridPath<Scalar> path;
  Scalar refinement_gap = 0;  // sup distance between the two finest levels
  bool converged = true;
  Scalar beta_hat = 0;        // measured driver exponent
  std::string warning;
};

template <typename Scalar>
struct PicardResult {
  GridPath<Scalar> path;
  Scalar last_delta = 0;  // sup distance between the final two iterates
  int iters_done = 0;
};

// Euler recursion x_{k+1} = x_k + f(x_k) (y_{k+1} - y_k) on y's grid.
// Throws divergence_error at the first non-finite state.
template <typename Scalar>
GridPath<Scalar> euler_path(
    const VectorField<Scalar>& field,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
    const GridPath<Scalar>& y) {
  if (x0.size() != field.state_dim)
    throw precondition_error("euler_path: x0 has wrong dimension");
  if (y.dimension() != field.driver_dim)
    throw precondition_error("euler_path: driver has wrong dimension");
  const Index n = y.size();
  GridPath<Scalar> out;
  out.times = y.times;
  out.values.resize(n, field.state_dim);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = x0;
  out.values.row(0) = x.transpose();
  for (Index k = 0; k + 1 < n; ++k) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dy =
        (y.values.row(k + 1) - y.values.row(k)).transpose();
    x += field.eval(x) * dy;
    if (!x.allFinite())
      throw divergence_error(
          "euler_path: non-finite state at grid index " + std::to_string(k + 1),
          k + 1);
    out.values.row(k + 1) = x.transpose();
  }
  return out;
}

// Solves x = x0 + int f(x) dy by Euler on the full grid and reports the
// dyadic-coarsening gap between the two finest refinement levels. The gap
// exceeding the tolerance attaches a warning instead of failing: the
// estimate is noisy and the caller decides.
template <typename Scalar>
SolveResult<Scalar> solve_young_euler(
    const VectorField<Scalar>& field,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
    const GridPath<Scalar>& y, const SolveConfig<Scalar>& config) {
  config.validate();
  SolveResult<Scalar> res;
  res.beta_hat = estimate_holder_exponent(y);
  if (!(res.beta_hat > Scalar(0.5)))
    res.warning += "driver holder estimate " +
                   std::to_string(double(res.beta_hat)) + " <= 1/2; ";
  if (!(field.meta.lambda > Scalar(1) / res.beta_hat - Scalar(1)))
    res.warning += "field lambda " + std::to_string(double(field.meta.lambda)) +
                   " <= 1/beta_hat - 1; well-posedness not assured; ";

  res.path = euler_path(field, x0, y);
  if (config.refinement_levels >= 2 && y.size() >= 5) {
    const GridPath<Scalar> half = coarsen(y, Index(2));
    const GridPath<Scalar> coarse_sol = euler_path(field, x0, half);
    Scalar gap = 0;
    for (Index i = 0; i < half.size(); ++i) {
      const Index fi = std::min(2 * i, res.path.size() - 1);
      gap = std::max(gap, (res.path.values.row(fi) -
                           coarse_sol.values.row(i)).norm());
    }
    res.refinement_gap = gap;
    if (gap > config.tolerance) {
      res.converged = false;
      res.warning += "refinement gap " + std::to_string(double(gap)) +
                     " above tolerance; ";
    }
  }
  return res;
}

// Applies the fixed-point map x -> x0 + int f(x(.)) dy `iters` times
// starting from `initial`. The map uses the running Riemann-Stieltjes
// integral, so its fixed point is the trapezoid-cell scheme on this grid.
// Three consecutive increases of the iterate distance abort with a
// divergence error.
template <typename Scalar>
PicardResult<Scalar> picard_refine(
    const VectorField<Scalar>& field,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
    const GridPath<Scalar>& y, const GridPath<Scalar>& initial, int iters) {
  if (initial.size() != y.size() || !initial.times.isApprox(y.times))
    throw precondition_error("picard_refine: initial not on driver grid");
  if (initial.dimension() != field.state_dim)
    throw precondition_error("picard_refine: initial has wrong dimension");

  PicardResult<Scalar> res;
  res.path = initial;
  int growth_streak = 0;
  Scalar prev_delta = std::numeric_limits<Scalar>::infinity();
  for (int it = 0; it < iters; ++it) {
    // f evaluated along the current iterate, flattened row-major to pair
    // with the driver columns.
    GridPath<Scalar> fpath;
    fpath.times = y.times;
    fpath.values.resize(y.size(), field.state_dim * field.driver_dim);
    for (Index i = 0; i < y.size(); ++i) {
      const auto fx = field.eval(res.path.values.row(i).transpose());
      for (Index r = 0; r < field.state_dim; ++r)
        for (Index j = 0; j < field.driver_dim; ++j)
          fpath.values(i, r * field.driver_dim + j) = fx(r, j);
    }
    GridPath<Scalar> next = rs_cumulative(fpath, y, field.state_dim);
    for (Index i = 0; i < next.size(); ++i)
      next.values.row(i) += x0.transpose();
    if (!next.values.allFinite())
      throw divergence_error("picard_refine: non-finite iterate", it + 1);

    Scalar delta = 0;
    for (Index i = 0; i < next.size(); ++i)
      delta = std::max(delta,
                       (next.values.row(i) - res.path.values.row(i)).norm());
    res.path = std::move(next);
    res.last_delta = delta;
    res.iters_done = it + 1;
    if (delta > prev_delta) {
      if (++growth_streak >= 3)
        throw divergence_error(
            "picard_refine: iterate distance grew 3 times in a row", it + 1);
    } else {
      growth_streak = 0;
    }
    prev_delta = delta;
    if (delta == Scalar(0)) break;
  }
  return res;
}

}  // namespace young
