#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "young/grid_path.hpp"

namespace young {

template <typename Scalar>
struct HolderEstimate {
  Scalar beta;
  Scalar window_start;
  Scalar window_end;
  Scalar seminorm;
  Scalar sup_norm;
};

namespace detail {

// Pairwise max of |x_r - x_theta| / (r - theta)^beta over lags drawn from
// `lags`; an exhaustive lag set gives the exact discrete seminorm. On a
// uniform grid the power (d*h)^-beta depends on the lag only, so it is
// tabulated once per lag.
template <typename Scalar>
Scalar seminorm_over_lags(const GridPath<Scalar>& p, Scalar beta, Index ia,
                          Index ib, const std::vector<Index>& lags) {
  const bool uni = p.uniform();
  const Scalar h = uni ? (p.times(1) - p.times(0)) : Scalar(0);
  Scalar best = 0;
  for (const Index d : lags) {
    if (uni) {
      // Fixed lag => fixed time gap; only the largest increment matters.
      Scalar maxdiff2 = 0;
      for (Index i = ia; i + d <= ib; ++i)
        maxdiff2 = std::max(
            maxdiff2, (p.values.row(i + d) - p.values.row(i)).squaredNorm());
      best = std::max(best, std::sqrt(maxdiff2) * std::pow(d * h, -beta));
    } else {
      for (Index i = ia; i + d <= ib; ++i) {
        const Scalar diff = (p.values.row(i + d) - p.values.row(i)).norm();
        if (diff == Scalar(0)) continue;
        best = std::max(
            best, diff * std::pow(p.times(i + d) - p.times(i), -beta));
      }
    }
  }
  return best;
}

inline std::vector<Index> all_lags(Index span) {
  std::vector<Index> lags(static_cast<std::size_t>(span));
  for (Index d = 1; d <= span; ++d) lags[static_cast<std::size_t>(d - 1)] = d;
  return lags;
}

// Short lags exhaustively, long lags on a doubling ladder. A strict lower
// bound for the exhaustive seminorm; close in practice because the max is
// almost always attained at short lags or near-dyadic separations.
inline std::vector<Index> strided_lags(Index span, Index dense) {
  std::vector<Index> lags;
  const Index cap = std::min(dense, span);
  for (Index d = 1; d <= cap; ++d) lags.push_back(d);
  for (Index d = cap * 2; d <= span; d *= 2) lags.push_back(d);
  if (!lags.empty() && lags.back() != span) lags.push_back(span);
  return lags;
}

}  // namespace detail

// Discrete Hoelder seminorm max |x_r - x_theta| / (r - theta)^beta over all
// grid pairs in [a, b]. Exhaustive, O(n^2) in the window length; a lower
// estimate of the continuous seminorm.
template <typename Scalar>
Scalar holder_seminorm(const GridPath<Scalar>& p, Scalar beta, Scalar a,
                       Scalar b) {
  if (!(beta > Scalar(0) && beta < Scalar(1)))
    throw precondition_error("holder_seminorm: beta must lie in (0,1)");
  if (!(a < b)) throw precondition_error("holder_seminorm: need a < b");
  const Index ia = p.index_of_time(a);
  const Index ib = p.index_of_time(b);
  return detail::seminorm_over_lags(p, beta, ia, ib,
                                    detail::all_lags(ib - ia));
}

template <typename Scalar>
Scalar holder_seminorm(const GridPath<Scalar>& p, Scalar beta) {
  return holder_seminorm(p, beta, p.t_front(), p.t_back());
}

// Stride-limited variant for long paths: lags 1..dense plus a doubling
// ladder. Documented lower bound of the exhaustive value.
template <typename Scalar>
Scalar holder_seminorm_strided(const GridPath<Scalar>& p, Scalar beta,
                               Scalar a, Scalar b, Index dense = 256) {
  if (!(beta > Scalar(0) && beta < Scalar(1)))
    throw precondition_error("holder_seminorm: beta must lie in (0,1)");
  if (!(a < b)) throw precondition_error("holder_seminorm: need a < b");
  const Index ia = p.index_of_time(a);
  const Index ib = p.index_of_time(b);
  return detail::seminorm_over_lags(p, beta, ia, ib,
                                    detail::strided_lags(ib - ia, dense));
}

// Chooses exhaustive vs strided by window length; `exhaustive_cap` is the
// largest point count that still gets the exact O(n^2) scan.
template <typename Scalar>
Scalar holder_seminorm_auto(const GridPath<Scalar>& p, Scalar beta, Scalar a,
                            Scalar b, Index exhaustive_cap = (1 << 13)) {
  const Index ia = p.index_of_time(a);
  const Index ib = p.index_of_time(b);
  if (ib - ia + 1 > exhaustive_cap)
    return holder_seminorm_strided(p, beta, a, b);
  return holder_seminorm(p, beta, a, b);
}

// max over grid points in [a, b] of the Euclidean norm of the value.
template <typename Scalar>
Scalar sup_norm(const GridPath<Scalar>& p, Scalar a, Scalar b) {
  if (!(a < b)) throw precondition_error("sup_norm: need a < b");
  const Index ia = p.index_of_time(a);
  const Index ib = p.index_of_time(b);
  Scalar best = 0;
  for (Index i = ia; i <= ib; ++i)
    best = std::max(best, p.values.row(i).norm());
  return best;
}

template <typename Scalar>
Scalar sup_norm(const GridPath<Scalar>& p) {
  if (p.size() == 1) return p.values.row(0).norm();
  return sup_norm(p, p.t_front(), p.t_back());
}

template <typename Scalar>
HolderEstimate<Scalar> holder_estimate(const GridPath<Scalar>& p, Scalar beta,
                                       Scalar a, Scalar b) {
  return HolderEstimate<Scalar>{beta, a, b,
                                holder_seminorm_auto(p, beta, a, b),
                                sup_norm(p, a, b)};
}

// Estimated Hoelder (critical) exponent of a sampled path: least-squares
// slope of the log RMS structure function log sqrt(mean_i |x_{i+d} -
// x_i|^2) against the log time gap, over dyadic lags. Unbiased for
// fractional Gaussian noise, slope 1 for smooth paths. Returns 1 for
// constant paths; the result is clipped to (0.01, 0.999).
template <typename Scalar>
Scalar estimate_holder_exponent(const GridPath<Scalar>& p) {
  const Index n = p.size();
  if (n < 3) return Scalar(1);
  std::vector<Scalar> lx, ly;
  for (Index d = 1; 8 * d < n; d *= 2) {
    Scalar sum2 = 0;
    Scalar tspan = 0;
    Index count = 0;
    for (Index i = 0; i + d < n; ++i) {
      sum2 += (p.values.row(i + d) - p.values.row(i)).squaredNorm();
      tspan += p.times(i + d) - p.times(i);
      ++count;
    }
    if (sum2 <= Scalar(0)) continue;
    lx.push_back(std::log(tspan / Scalar(count)));
    ly.push_back(Scalar(0.5) * std::log(sum2 / Scalar(count)));
  }
  if (lx.size() < 2) return Scalar(1);
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Scalar k = static_cast<Scalar>(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const Scalar slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::clamp(slope, Scalar(0.01), Scalar(0.999));
}

}  // namespace young
