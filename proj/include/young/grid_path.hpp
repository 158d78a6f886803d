#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "young/errors.hpp"

namespace young {

using Eigen::Index;

// A vector-valued path sampled on a strictly increasing time grid.
// Row k of `values` is the state at `times[k]`.
template <typename Scalar>
struct GridPath {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector times;
  Matrix values;

  GridPath() = default;
  GridPath(Vector t, Matrix v) : times(std::move(t)), values(std::move(v)) {
    validate();
  }

  Index size() const { return times.size(); }
  Index dimension() const { return values.cols(); }
  Scalar t_front() const { return times(0); }
  Scalar t_back() const { return times(times.size() - 1); }

  void validate() const {
    if (times.size() < 1) throw precondition_error("GridPath: empty time grid");
    if (values.rows() != times.size())
      throw precondition_error("GridPath: values/times length mismatch");
    if (values.cols() < 1)
      throw precondition_error("GridPath: dimension must be positive");
    if (!times.allFinite() || !values.allFinite())
      throw precondition_error("GridPath: non-finite entry");
    for (Index i = 0; i + 1 < times.size(); ++i)
      if (!(times(i) < times(i + 1)))
        throw precondition_error("GridPath: times not strictly increasing");
  }

  // Locates t among the grid points; throws if t is not one of them.
  Index index_of_time(Scalar t) const {
    const Scalar span = t_back() - t_front();
    const Scalar tol = Scalar(1e-12) * std::max(Scalar(1), std::abs(span));
    Index lo = 0, hi = times.size() - 1;
    while (lo < hi) {
      const Index mid = (lo + hi) / 2;
      if (times(mid) < t - tol)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (std::abs(times(lo) - t) > tol)
      throw precondition_error("GridPath: time " + std::to_string(double(t)) +
                               " is not a grid point");
    return lo;
  }

  // True when the grid spacing is uniform to relative 1e-9.
  bool uniform() const {
    if (times.size() < 3) return true;
    const Scalar h = (t_back() - t_front()) / Scalar(times.size() - 1);
    for (Index i = 0; i + 1 < times.size(); ++i)
      if (std::abs(times(i + 1) - times(i) - h) > Scalar(1e-9) * std::abs(h))
        return false;
    return true;
  }
};

using GridPathd = GridPath<double>;

// Every `stride`-th point; the final point is always kept so the window
// endpoint survives coarsening.
template <typename Scalar>
GridPath<Scalar> coarsen(const GridPath<Scalar>& p, Index stride) {
  if (stride < 1) throw precondition_error("coarsen: stride must be >= 1");
  const Index n = p.size();
  Index count = 0;
  for (Index i = 0; i < n; i += stride) ++count;
  const bool tail = ((n - 1) % stride) != 0;
  GridPath<Scalar> out;
  out.times.resize(count + (tail ? 1 : 0));
  out.values.resize(count + (tail ? 1 : 0), p.dimension());
  Index k = 0;
  for (Index i = 0; i < n; i += stride, ++k) {
    out.times(k) = p.times(i);
    out.values.row(k) = p.values.row(i);
  }
  if (tail) {
    out.times(k) = p.times(n - 1);
    out.values.row(k) = p.values.row(n - 1);
  }
  return out;
}

template <typename Scalar>
GridPath<Scalar> restrict_window(const GridPath<Scalar>& p, Scalar a, Scalar b) {
  if (!(a < b)) throw precondition_error("restrict_window: need a < b");
  const Index ia = p.index_of_time(a);
  const Index ib = p.index_of_time(b);
  GridPath<Scalar> out;
  out.times = p.times.segment(ia, ib - ia + 1);
  out.values = p.values.middleRows(ia, ib - ia + 1);
  return out;
}

template <typename Scalar>
GridPath<Scalar> add(const GridPath<Scalar>& x, const GridPath<Scalar>& y) {
  if (x.size() != y.size() || x.dimension() != y.dimension() ||
      !x.times.isApprox(y.times))
    throw precondition_error("add: paths must share the same grid");
  GridPath<Scalar> out = x;
  out.values += y.values;
  return out;
}

template <typename Scalar>
GridPath<Scalar> scale(const GridPath<Scalar>& x, Scalar c) {
  GridPath<Scalar> out = x;
  out.values *= c;
  return out;
}

}  // namespace young
