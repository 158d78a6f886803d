#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "young/errors.hpp"
#include "young/grid_path.hpp"

namespace young {

// Fractional Riemann-Liouville integrals and Weyl (Marchaud-form)
// derivatives of sampled scalar functions. All operators act on the
// piecewise-linear interpolant of the samples and integrate the singular
// kernels (t-s)^{alpha-1}, (t-s)^{-alpha-1} against it in closed form per
// grid cell, so the only discretization error is the interpolation of the
// input itself.
//
// The unimodular factors (-1)^{+-alpha} of the right-sided operators are
// not carried: every operator returns the real bracket. The one place the
// factors matter is the pairing of D^alpha with D^{1-alpha}, where they
// multiply to exactly -1; the integration code accounts for that sign
// explicitly.

template <typename Scalar>
struct FracOrder {
  Scalar alpha;

  explicit FracOrder(Scalar a) : alpha(a) {
    if (!(a > Scalar(0) && a < Scalar(1)))
      throw precondition_error("FracOrder: alpha must lie in (0,1)");
  }
};

// Scalar samples on a strictly increasing grid, interpreted between grid
// points by linear interpolation.
template <typename Scalar>
struct SampledFunction {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector times;
  Vector values;

  SampledFunction() = default;
  SampledFunction(Vector t, Vector v)
      : times(std::move(t)), values(std::move(v)) {
    validate();
  }

  Index size() const { return times.size(); }
  Scalar a() const { return times(0); }
  Scalar b() const { return times(times.size() - 1); }

  void validate() const {
    if (times.size() < 2)
      throw precondition_error("SampledFunction: need >= 2 samples");
    if (values.size() != times.size())
      throw precondition_error("SampledFunction: values/times mismatch");
    if (!times.allFinite() || !values.allFinite())
      throw precondition_error("SampledFunction: non-finite entry");
    for (Index i = 0; i + 1 < times.size(); ++i)
      if (!(times(i) < times(i + 1)))
        throw precondition_error("SampledFunction: times not increasing");
  }

  bool uniform() const {
    if (times.size() < 3) return true;
    const Scalar h = (b() - a()) / Scalar(times.size() - 1);
    for (Index i = 0; i + 1 < times.size(); ++i)
      if (std::abs(times(i + 1) - times(i) - h) > Scalar(1e-9) * std::abs(h))
        return false;
    return true;
  }

  Scalar eval(Scalar t) const {
    if (t <= times(0)) return values(0);
    if (t >= b()) return values(values.size() - 1);
    Index lo = 0, hi = times.size() - 1;
    while (hi - lo > 1) {
      const Index mid = (lo + hi) / 2;
      (times(mid) <= t ? lo : hi) = mid;
    }
    const Scalar w = (t - times(lo)) / (times(lo + 1) - times(lo));
    return (Scalar(1) - w) * values(lo) + w * values(lo + 1);
  }

  Index index_of_time(Scalar t) const {
    GridPath<Scalar> tmp;
    tmp.times = times;
    tmp.values = values;
    return tmp.index_of_time(t);
  }
};

template <typename Scalar>
SampledFunction<Scalar> column_function(const GridPath<Scalar>& p,
                                        Index col = 0) {
  SampledFunction<Scalar> f;
  f.times = p.times;
  f.values = p.values.col(col);
  return f;
}

// Euler gamma via the Lanczos approximation (g = 7, 9 terms), accurate to
// about 14 significant digits on (0, 170); reflection handles z < 1/2.
inline double gamma_fn(double z) {
  if (!(z > 0)) throw precondition_error("gamma_fn: z must be > 0");
  static const double c[9] = {0.99999999999980993,
                              676.5203681218851,
                              -1259.1392167224028,
                              771.32342877765313,
                              -176.61502916214059,
                              12.507343278686905,
                              -0.13857109526572012,
                              9.9843695780195716e-6,
                              1.5056327351493116e-7};
  static const double pi = 3.14159265358979323846;
  if (z < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
  const double x = z - 1.0;
  double acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

namespace detail {

template <typename Scalar>
SampledFunction<Scalar> reflect(const SampledFunction<Scalar>& f) {
  const Index n = f.size();
  const Scalar s = f.a() + f.b();
  SampledFunction<Scalar> out;
  out.times.resize(n);
  out.values.resize(n);
  for (Index i = 0; i < n; ++i) {
    out.times(i) = s - f.times(n - 1 - i);
    out.values(i) = f.values(n - 1 - i);
  }
  return out;
}

// Powers of the time gaps (t_k - t_j) used by the cell-exact kernels. On a
// uniform grid the gap depends on the index lag only, so one pow per lag
// serves the whole O(n^2) pass.
template <typename Scalar>
struct GapPowers {
  bool uniform;
  Scalar h;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> table;  // lag -> (lag*h)^expo
  Scalar expo;

  GapPowers(const SampledFunction<Scalar>& f, Scalar e) : expo(e) {
    uniform = f.uniform();
    if (uniform) {
      const Index n = f.size();
      h = (f.b() - f.a()) / Scalar(n - 1);
      table.resize(n);
      table(0) = (e > Scalar(0)) ? Scalar(0)
                                 : std::numeric_limits<Scalar>::infinity();
      for (Index d = 1; d < n; ++d)
        table(d) = std::pow(Scalar(d) * h, e);
    }
  }

  Scalar operator()(Index lag, Scalar gap) const {
    return uniform ? table(lag) : std::pow(gap, expo);
  }
};

// I_{a+}^alpha of the interpolant at every grid point.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rl_left_values(
    const SampledFunction<Scalar>& f, Scalar alpha) {
  const Index n = f.size();
  const Scalar inv_gamma = Scalar(1) / Scalar(gamma_fn(double(alpha)));
  GapPowers<Scalar> pa(f, alpha);
  GapPowers<Scalar> pa1(f, alpha + 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  out(0) = 0;
  for (Index k = 1; k < n; ++k) {
    const Scalar tk = f.times(k);
    Scalar acc = 0;
    for (Index j = 0; j < k; ++j) {
      const Scalar u1 = tk - f.times(j);
      const Scalar u0 = tk - f.times(j + 1);
      const Scalar m = (f.values(j + 1) - f.values(j)) /
                       (f.times(j + 1) - f.times(j));
      const Scalar p = f.values(j) + m * u1;  // interpolant extended to t_k
      acc += p * (pa(k - j, u1) - pa(k - j - 1, u0)) / alpha -
             m * (pa1(k - j, u1) - pa1(k - j - 1, u0)) / (alpha + 1);
    }
    out(k) = inv_gamma * acc;
  }
  return out;
}

// D_{a+}^alpha of the interpolant at every grid point except the left
// endpoint. When subtract_left is set the operator is applied to
// f - f(a), whose derivative extends continuously by 0 at t = a; out(0)
// is that limit. Otherwise out(0) is quiet NaN and callers must not use it.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weyl_left_values(
    const SampledFunction<Scalar>& f, Scalar alpha, bool subtract_left) {
  const Index n = f.size();
  const Scalar inv_gamma = Scalar(1) / Scalar(gamma_fn(double(1 - alpha)));
  GapPowers<Scalar> pna(f, -alpha);
  GapPowers<Scalar> p1a(f, 1 - alpha);
  const Scalar base = subtract_left ? f.values(0) : Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  out(0) = subtract_left ? Scalar(0)
                         : std::numeric_limits<Scalar>::quiet_NaN();
  for (Index k = 1; k < n; ++k) {
    const Scalar tk = f.times(k);
    const Scalar fk = f.values(k) - base;
    // Cell adjacent to t_k: the difference term vanishes at the node, only
    // the slope part survives and it is finite because alpha < 1.
    const Scalar m_last = (f.values(k) - f.values(k - 1)) /
                          (f.times(k) - f.times(k - 1));
    Scalar acc =
        m_last * p1a(1, tk - f.times(k - 1)) / (Scalar(1) - alpha);
    for (Index j = 0; j + 1 < k; ++j) {
      const Scalar u1 = tk - f.times(j);
      const Scalar u0 = tk - f.times(j + 1);
      const Scalar m = (f.values(j + 1) - f.values(j)) /
                       (f.times(j + 1) - f.times(j));
      const Scalar p = (f.values(j) - base) + m * u1;
      acc += (fk - p) * (pna(k - j - 1, u0) - pna(k - j, u1)) / alpha +
             m * (p1a(k - j, u1) - p1a(k - j - 1, u0)) / (Scalar(1) - alpha);
    }
    out(k) = inv_gamma * (fk * pna(k, tk - f.times(0)) + alpha * acc);
  }
  return out;
}

// D_{a+}^alpha (f - f(a)) evaluated exactly at the off-grid points
// t = t_i + x * (t_{i+1} - t_i) for every cell i and every offset x in
// `offsets` (all strictly inside (0,1)). Row r of the result holds the
// values for offsets[r] across cells. Quadrature rules over cells consume
// this; the evaluation is the same closed-form cell sum as at the nodes,
// with the partial current cell reducing to its slope term.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> weyl_left_at_offsets(
    const SampledFunction<Scalar>& f, Scalar alpha,
    const std::vector<Scalar>& offsets) {
  const Index n = f.size();
  const Index q = static_cast<Index>(offsets.size());
  const Scalar inv_gamma = Scalar(1) / Scalar(gamma_fn(double(1 - alpha)));
  const Scalar base = f.values(0);
  const bool uni = f.uniform();
  const Scalar h = uni ? (f.b() - f.a()) / Scalar(n - 1) : Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(q, n - 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ta, tb;
  for (Index r = 0; r < q; ++r) {
    const Scalar xi = offsets[r];
    if (!(xi > Scalar(0) && xi < Scalar(1)))
      throw precondition_error("weyl_left_at_offsets: offsets must be in (0,1)");
    if (uni) {
      ta.resize(n);
      tb.resize(n);
      for (Index d = 0; d < n; ++d) {
        const Scalar gap = (Scalar(d) + xi) * h;
        ta(d) = std::pow(gap, -alpha);
        tb(d) = std::pow(gap, Scalar(1) - alpha);
      }
    }
    for (Index i = 0; i + 1 < n; ++i) {
      const Scalar hi = f.times(i + 1) - f.times(i);
      const Scalar t = f.times(i) + xi * hi;
      const Scalar mi = (f.values(i + 1) - f.values(i)) / hi;
      const Scalar ft = (f.values(i) - base) + mi * (t - f.times(i));
      const Scalar frac_self = uni ? tb(0) : std::pow(t - f.times(i),
                                                      Scalar(1) - alpha);
      Scalar acc = mi * frac_self / (Scalar(1) - alpha);
      for (Index j = 0; j < i; ++j) {
        const Scalar u1 = t - f.times(j);
        const Scalar u0 = t - f.times(j + 1);
        const Scalar m = (f.values(j + 1) - f.values(j)) /
                         (f.times(j + 1) - f.times(j));
        const Scalar p = (f.values(j) - base) + m * u1;
        const Scalar pa0 = uni ? ta(i - j - 1) : std::pow(u0, -alpha);
        const Scalar pa1 = uni ? ta(i - j) : std::pow(u1, -alpha);
        const Scalar pb0 = uni ? tb(i - j - 1)
                               : std::pow(u0, Scalar(1) - alpha);
        const Scalar pb1 = uni ? tb(i - j) : std::pow(u1, Scalar(1) - alpha);
        acc += (ft - p) * (pa0 - pa1) / alpha +
               m * (pb1 - pb0) / (Scalar(1) - alpha);
      }
      const Scalar bound = uni ? ta(i) : std::pow(t - f.times(0), -alpha);
      out(r, i) = inv_gamma * (ft * bound + alpha * acc);
    }
  }
  return out;
}

// Integral of w^{gamma-1} * vhat(a + w) over the grid, cell-exact against
// the linear interpolant; gamma in (0, 1] makes the w = 0 endpoint benign.
template <typename Scalar>
Scalar kernel_weighted_integral(const SampledFunction<Scalar>& v,
                                Scalar gamma) {
  const Index n = v.size();
  const Scalar a = v.a();
  Scalar acc = 0;
  for (Index j = 0; j + 1 < n; ++j) {
    const Scalar w0 = v.times(j) - a;
    const Scalar w1 = v.times(j + 1) - a;
    const Scalar m = (v.values(j + 1) - v.values(j)) /
                     (v.times(j + 1) - v.times(j));
    const Scalar q = v.values(j) - m * w0;
    const Scalar pw0 = (w0 > Scalar(0)) ? std::pow(w0, gamma) : Scalar(0);
    const Scalar pw1 = std::pow(w1, gamma);
    acc += q * (pw1 - pw0) / gamma +
           m * (pw1 * w1 - pw0 * w0) / (gamma + 1);
  }
  return acc;
}

template <typename Scalar>
Scalar trapezoid(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& times,
                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values) {
  Scalar acc = 0;
  for (Index i = 0; i + 1 < times.size(); ++i)
    acc += Scalar(0.5) * (values(i) + values(i + 1)) *
           (times(i + 1) - times(i));
  return acc;
}

}  // namespace detail

// I_{a+}^alpha f at every grid point of f.
template <typename Scalar>
SampledFunction<Scalar> rl_integral_left(const SampledFunction<Scalar>& f,
                                         FracOrder<Scalar> order) {
  SampledFunction<Scalar> out;
  out.times = f.times;
  out.values = detail::rl_left_values(f, order.alpha);
  return out;
}

// |I_{b-}^alpha f| at every grid point; the factor (-1)^{-alpha} is dropped.
template <typename Scalar>
SampledFunction<Scalar> rl_integral_right(const SampledFunction<Scalar>& f,
                                          FracOrder<Scalar> order) {
  const SampledFunction<Scalar> r = detail::reflect(f);
  SampledFunction<Scalar> out = detail::reflect(SampledFunction<Scalar>{
      r.times, detail::rl_left_values(r, order.alpha)});
  return out;
}

// D_{a+}^alpha f at the grid point t; t = a is outside the domain.
template <typename Scalar>
Scalar weyl_derivative_left(const SampledFunction<Scalar>& f,
                            FracOrder<Scalar> order, Scalar t) {
  const Index k = f.index_of_time(t);
  if (k == 0)
    throw precondition_error(
        "weyl_derivative_left: t = a sits on the kernel singularity");
  // One-point evaluation; reuse the batched kernel on the prefix grid.
  SampledFunction<Scalar> head;
  head.times = f.times.head(k + 1);
  head.values = f.values.head(k + 1);
  return detail::weyl_left_values(head, order.alpha, false)(k);
}

// Real bracket of D_{b-}^alpha f at the grid point t; t = b is excluded.
template <typename Scalar>
Scalar weyl_derivative_right(const SampledFunction<Scalar>& f,
                             FracOrder<Scalar> order, Scalar t) {
  const Index k = f.index_of_time(t);
  if (k == f.size() - 1)
    throw precondition_error(
        "weyl_derivative_right: t = b sits on the kernel singularity");
  const SampledFunction<Scalar> r = detail::reflect(f);
  return weyl_derivative_left(r, order, f.a() + f.b() - t);
}

// Batched D_{a+}^alpha f on t_1..t_{n-1}.
template <typename Scalar>
SampledFunction<Scalar> weyl_derivative_left_all(
    const SampledFunction<Scalar>& f, FracOrder<Scalar> order) {
  const auto vals = detail::weyl_left_values(f, order.alpha, false);
  SampledFunction<Scalar> out;
  out.times = f.times.tail(f.size() - 1);
  out.values = vals.tail(f.size() - 1);
  return out;
}

// Batched real bracket of D_{b-}^alpha f on t_0..t_{n-2}.
template <typename Scalar>
SampledFunction<Scalar> weyl_derivative_right_all(
    const SampledFunction<Scalar>& f, FracOrder<Scalar> order) {
  const SampledFunction<Scalar> r = detail::reflect(f);
  const auto vals = detail::weyl_left_values(r, order.alpha, false);
  const Index n = f.size();
  SampledFunction<Scalar> out;
  out.times = f.times.head(n - 1);
  out.values.resize(n - 1);
  for (Index i = 0; i < n - 1; ++i) out.values(i) = vals(n - 1 - i);
  return out;
}

// Operator order for pairing a lambda-Hoelder integrand with a mu-Hoelder
// integrator when lambda = mu = beta > 1/2: 1 - beta/2 pulled into
// (1 - beta, beta) with a small safety margin.
template <typename Scalar>
Scalar default_alpha(Scalar beta) {
  if (!(beta > Scalar(0.5) && beta < Scalar(1)))
    throw precondition_error("default_alpha: beta must lie in (1/2, 1)");
  const Scalar margin = Scalar(0.05) * (2 * beta - 1);
  const Scalar lo = 1 - beta + margin;
  const Scalar hi = beta - margin;
  return std::clamp(Scalar(1) - beta / 2, lo, hi);
}

}  // namespace young
