#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "young/errors.hpp"
#include "young/grid_path.hpp"
#include "young/holder.hpp"
#include "young/rng.hpp"
#include "young/vector_field.hpp"

namespace young {

// Right-hand sides of the a-priori estimates, decomposed into factors.
// The universal constant that the estimates only assert to exist is a
// calibration output: rhs_without_k evaluates the displayed formula with
// that constant set to 1 (inside the exponent for the exponential bounds),
// and calibrate_k recovers the smallest constant that dominates a sweep.

enum class BoundKind { bounded_24, linear_growth_25, stability_32 };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::bounded_24: return "bounded_24";
    case BoundKind::linear_growth_25: return "linear_growth_25";
    default: return "stability_32";
  }
}

template <typename Scalar>
struct BoundReport {
  BoundKind kind = BoundKind::bounded_24;
  Scalar lhs = 0;             // measured sup; filled by the sweep driver
  Scalar rhs_without_k = 0;
  std::map<std::string, Scalar> factors;
  std::optional<Scalar> k_hat;
};

using BoundReportd = BoundReport<double>;

// sup |x| <= |x0| + k T ||f|| ||f'||^{(1-beta)/beta} ||y||^{1/beta}.
template <typename Scalar>
BoundReport<Scalar> bound_bounded(const VectorFieldMeta<Scalar>& meta,
                                  Scalar y_seminorm, Scalar T, Scalar beta,
                                  Scalar x0_norm) {
  if (!meta.sup_f)
    throw precondition_error("bound_bounded: field must declare sup_f");
  if (!(beta > 0 && beta < 1) || !(T > 0) || y_seminorm < 0 || x0_norm < 0)
    throw precondition_error("bound_bounded: bad factor");
  BoundReport<Scalar> r;
  r.kind = BoundKind::bounded_24;
  const Scalar growth = T * (*meta.sup_f) *
                        std::pow(meta.sup_df, (1 - beta) / beta) *
                        std::pow(y_seminorm, 1 / beta);
  r.rhs_without_k = x0_norm + growth;
  r.factors = {{"x0_norm", x0_norm},   {"y_seminorm", y_seminorm},
               {"sup_f", *meta.sup_f}, {"sup_df", meta.sup_df},
               {"T", T},               {"beta", beta}};
  return r;
}

// sup |x| <= 2^{k T [||f'|| v a0 v a1]^{1/beta} ||y||^{1/beta}} (|x0| + 1).
template <typename Scalar>
BoundReport<Scalar> bound_linear_growth(const VectorFieldMeta<Scalar>& meta,
                                        Scalar y_seminorm, Scalar T,
                                        Scalar beta, Scalar x0_norm) {
  if (!(beta > 0 && beta < 1) || !(T > 0) || y_seminorm < 0 || x0_norm < 0)
    throw precondition_error("bound_linear_growth: bad factor");
  BoundReport<Scalar> r;
  r.kind = BoundKind::linear_growth_25;
  const Scalar coef = std::max({meta.sup_df, meta.a0, meta.a1});
  const Scalar exponent =
      T * std::pow(coef, 1 / beta) * std::pow(y_seminorm, 1 / beta);
  r.rhs_without_k = std::exp2(exponent) * (x0_norm + 1);
  r.factors = {{"x0_norm", x0_norm}, {"y_seminorm", y_seminorm},
               {"sup_df", meta.sup_df}, {"a0", meta.a0},
               {"a1", meta.a1},        {"T", T},
               {"beta", beta},         {"exponent_without_k", exponent}};
  return r;
}

namespace detail {

// Sup-distance estimates over a compact box: the true sup over R^d is not
// computable, and the solutions never leave this box (their ranges, padded
// by 10%). d = 1 uses a dense linspace, higher dimensions a fixed-seed
// uniform cloud.
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> box_samples(
    Scalar lo, Scalar hi, Index dim, Index count) {
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (dim == 1) {
    for (Index i = 0; i < count; ++i) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(1);
      x(0) = lo + (hi - lo) * Scalar(i) / Scalar(count - 1);
      pts.push_back(x);
    }
  } else {
    Rng rng(0xB0C5ULL);
    for (Index i = 0; i < count; ++i) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(dim);
      for (Index l = 0; l < dim; ++l) x(l) = rng.uniform(double(lo), double(hi));
      pts.push_back(x);
    }
  }
  return pts;
}

template <typename Scalar>
Scalar jacobian_stack_norm(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>&
        a,
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>&
        b) {
  Scalar acc = 0;
  for (std::size_t l = 0; l < a.size(); ++l)
    acc += (a[l] - b[l]).squaredNorm();
  return std::sqrt(acc);
}

}  // namespace detail

// Theorem-style deviation bound between two solved equations. Both
// solution paths and both drivers must live on the same grid. The f-side
// norms follow the proof: the derivative difference ||f' - f~'|| enters the
// braces, not ||f' - f~||.
template <typename Scalar>
BoundReport<Scalar> stability_bound(const VectorField<Scalar>& f,
                                    const VectorField<Scalar>& f_tilde,
                                    const GridPath<Scalar>& x,
                                    const GridPath<Scalar>& x_tilde,
                                    const GridPath<Scalar>& y,
                                    const GridPath<Scalar>& y_tilde,
                                    Scalar beta) {
  if (!f.meta.sup_ddf)
    throw precondition_error("stability_bound: f must declare sup_ddf");
  if (x.size() != x_tilde.size() || !x.times.isApprox(x_tilde.times) ||
      y.size() != x.size() || !y.times.isApprox(x.times) ||
      y_tilde.size() != x.size() || !y_tilde.times.isApprox(x.times))
    throw precondition_error("stability_bound: all paths must share one grid");

  const Scalar a = x.t_front();
  const Scalar b = x.t_back();
  const Scalar T = b - a;

  const Scalar y_sem = holder_seminorm_auto(y, beta, a, b);
  GridPath<Scalar> ydiff = y;
  ydiff.values -= y_tilde.values;
  const Scalar ydiff_sem = holder_seminorm_auto(ydiff, beta, a, b);
  const Scalar x_beta = holder_seminorm_auto(x, beta, a, b);
  const Scalar xt_beta = holder_seminorm_auto(x_tilde, beta, a, b);
  const Scalar x_sup = sup_norm(x, a, b);

  // Compact box covering every visited state, padded by 10%.
  Scalar lo = std::min(x.values.minCoeff(), x_tilde.values.minCoeff());
  Scalar hi = std::max(x.values.maxCoeff(), x_tilde.values.maxCoeff());
  const Scalar pad = Scalar(0.1) * std::max(hi - lo, Scalar(1e-6));
  lo -= pad;
  hi += pad;
  const auto pts =
      detail::box_samples<Scalar>(lo, hi, f.state_dim, Index(2048));
  Scalar f_diff = 0, df_diff = 0, f_sup_box = 0, ft_sup_box = 0;
  for (const auto& p : pts) {
    const auto fa = f.eval(p);
    const auto fb = f_tilde.eval(p);
    f_diff = std::max(f_diff, detail::operator_norm<Scalar>(fa - fb));
    f_sup_box = std::max(f_sup_box, detail::operator_norm<Scalar>(fa));
    ft_sup_box = std::max(ft_sup_box, detail::operator_norm<Scalar>(fb));
    if (f.has_jacobian() && f_tilde.has_jacobian())
      df_diff = std::max(df_diff, detail::jacobian_stack_norm<Scalar>(
                                      f.jacobian(p), f_tilde.jacobian(p)));
  }
  const Scalar f_sup = f.meta.sup_f ? *f.meta.sup_f : f_sup_box;
  const Scalar ft_sup = f_tilde.meta.sup_f ? *f_tilde.meta.sup_f : ft_sup_box;

  const Scalar x0_diff = (x.values.row(0) - x_tilde.values.row(0)).norm();
  const Scalar D = std::max(
      f.meta.sup_df, f.meta.sup_df * y_sem +
                         (*f.meta.sup_ddf) * (x_beta + xt_beta) *
                             std::pow(T, beta));
  const Scalar braces = x0_diff + y_sem * (f_diff + x_beta * df_diff) +
                        (f_sup + ft_sup * x_sup) * ydiff_sem;
  const Scalar exponent = std::pow(D, 1 / beta) * std::pow(y_sem, 1 / beta) * T;

  BoundReport<Scalar> r;
  r.kind = BoundKind::stability_32;
  Scalar lhs = 0;
  for (Index i = 0; i < x.size(); ++i)
    lhs = std::max(lhs, (x.values.row(i) - x_tilde.values.row(i)).norm());
  r.lhs = lhs;
  r.rhs_without_k = std::exp2(exponent) * braces;
  r.factors = {{"x0_diff", x0_diff},
               {"y_seminorm", y_sem},
               {"y_diff_seminorm", ydiff_sem},
               {"x_beta", x_beta},
               {"x_tilde_beta", xt_beta},
               {"x_sup", x_sup},
               {"f_diff", f_diff},
               {"df_diff", df_diff},
               {"f_sup", f_sup},
               {"ft_sup", ft_sup},
               {"D", D},
               {"braces", braces},
               {"T", T},
               {"beta", beta},
               {"exponent_without_k", exponent}};
  return r;
}

// Subinterval plan from the contraction argument: Delta chosen so that
// each of A, B, C times Delta^beta stays at or below 1/3, and the
// per-interval recursion Z_n <= D Z_{n-1} + F.
template <typename Scalar>
struct SubdivisionPlan {
  Scalar Delta = 0;
  Index n_intervals = 1;
  Scalar A = 0, B = 0, C = 0;
  Scalar D_contraction = 1;
  Scalar F_offset = 0;
  bool degenerate = false;  // zero driver / zero coefficients

  // D^n z0 + sum_{k<n} D^k F.
  Scalar unrolled(Scalar z0) const {
    const Scalar dn = std::pow(D_contraction, Scalar(n_intervals));
    const Scalar geo =
        (D_contraction > 1) ? (dn - 1) / (D_contraction - 1)
                            : Scalar(n_intervals);
    return dn * z0 + F_offset * geo;
  }
};

template <typename Scalar>
SubdivisionPlan<Scalar> subdivision_plan(const VectorFieldMeta<Scalar>& meta,
                                         Scalar y_seminorm, Scalar T,
                                         Scalar beta) {
  if (!(beta > 0 && beta < 1) || !(T > 0) || y_seminorm < 0)
    throw precondition_error("subdivision_plan: bad factor");
  SubdivisionPlan<Scalar> plan;
  plan.A = meta.sup_df * y_seminorm;
  plan.B = meta.a0 * y_seminorm;
  plan.C = meta.a1 * y_seminorm;
  const Scalar m = std::max({plan.A, plan.B, plan.C});
  if (m == 0) {
    plan.Delta = T;
    plan.n_intervals = 1;
    plan.degenerate = true;
    return plan;
  }
  plan.Delta = std::pow(1 / (3 * m), 1 / beta);
  // One-ulp nudges keep the gating inequalities exact under rounding.
  Scalar db = std::pow(plan.Delta, beta);
  while (plan.A * db > Scalar(1) / 3 || plan.B * db > Scalar(1) / 3 ||
         plan.C * db > Scalar(1) / 3) {
    plan.Delta *= Scalar(1) - Scalar(4) * std::numeric_limits<Scalar>::epsilon();
    db = std::pow(plan.Delta, beta);
  }
  plan.n_intervals = std::max<Index>(1, static_cast<Index>(
                                            std::ceil(T / plan.Delta)));
  const Scalar inv = 1 / (1 - plan.A * db);
  plan.D_contraction = 1 / (1 - inv * plan.C * db);
  plan.F_offset = plan.D_contraction * plan.B * inv * db;
  return plan;
}

// Constant that would make the bound exactly tight for this one report:
// growth-part ratio for the bounded kind, log2 ratio over the exponent for
// the exponential kinds (base |x0| + 1 for the growth bound, the braces
// term for stability). Empty when the report is degenerate (zero driver or
// zero base).
template <typename Scalar>
std::optional<Scalar> k_ratio(const BoundReport<Scalar>& r) {
  if (r.kind == BoundKind::bounded_24) {
    const Scalar x0 = r.factors.at("x0_norm");
    const Scalar denom = r.rhs_without_k - x0;
    if (denom > 0) return (r.lhs - x0) / denom;
    // zero-driver report: the growth part vanishes on both sides, so the
    // bound already holds with constant 0
    if (r.lhs <= x0 + Scalar(1e-12) * (1 + x0)) return Scalar(0);
    return std::nullopt;
  }
  const Scalar expo = r.factors.at("exponent_without_k");
  const Scalar base = (r.kind == BoundKind::linear_growth_25)
                          ? r.factors.at("x0_norm") + 1
                          : r.factors.at("braces");
  if (expo > 0 && base > 0) {
    if (r.lhs <= 0) return Scalar(0);  // log ratio -inf clamps to 0
    return std::max(Scalar(0), std::log2(r.lhs / base) / expo);
  }
  // degenerate exponent or base: usable only when no constant is needed
  if (r.lhs <= base + Scalar(1e-12) * (1 + std::abs(base))) return Scalar(0);
  return std::nullopt;
}

// Smallest constant making the bound dominate every report in the sweep.
template <typename Scalar>
Scalar calibrate_k(const std::vector<BoundReport<Scalar>>& sweep) {
  if (sweep.empty()) throw calibration_error("calibrate_k: empty sweep");
  const BoundKind kind = sweep.front().kind;
  Scalar k_hat = 0;
  bool usable = false;
  for (const auto& r : sweep) {
    if (r.kind != kind)
      throw precondition_error("calibrate_k: mixed report kinds");
    const auto ratio = k_ratio(r);
    if (!ratio) continue;
    usable = true;
    k_hat = std::max(k_hat, *ratio);
  }
  if (!usable)
    throw calibration_error("calibrate_k: all reports degenerate");
  return k_hat;
}

// RHS with a calibrated constant put back in.
template <typename Scalar>
Scalar bound_with_k(const BoundReport<Scalar>& r, Scalar k) {
  switch (r.kind) {
    case BoundKind::bounded_24: {
      const Scalar x0 = r.factors.at("x0_norm");
      return x0 + k * (r.rhs_without_k - x0);
    }
    case BoundKind::linear_growth_25:
      return std::exp2(k * r.factors.at("exponent_without_k")) *
             (r.factors.at("x0_norm") + 1);
    default:
      return std::exp2(k * r.factors.at("exponent_without_k")) *
             r.factors.at("braces");
  }
}

}  // namespace young
