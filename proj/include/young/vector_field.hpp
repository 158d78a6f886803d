#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "young/errors.hpp"
#include "young/rng.hpp"

namespace young {

// Declared coefficient bounds. sup_df (the derivative sup) is always
// required; sup_f only when the field claims boundedness; sup_ddf only for
// the stability estimate; (a0, a1) are the linear-growth constants of
// |f(x)| <= a0 + a1 |x|; lambda is the Hoelder exponent of f'.
template <typename Scalar>
struct VectorFieldMeta {
  std::optional<Scalar> sup_f;
  Scalar sup_df = 0;
  std::optional<Scalar> sup_ddf;
  Scalar a0 = 0;
  Scalar a1 = 0;
  Scalar lambda = 1;
};

// Coefficient f: R^d -> R^{d x m}; eval(x) multiplies driver increments.
// jacobian(x)[l] is the partial derivative of eval with respect to x_l.
template <typename Scalar>
struct VectorField {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Index state_dim = 1;
  Index driver_dim = 1;
  std::function<Matrix(const Vector&)> eval;
  std::function<std::vector<Matrix>(const Vector&)> jacobian;
  VectorFieldMeta<Scalar> meta;

  bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

using VectorFieldd = VectorField<double>;

// Scalar (d = m = 1) field from plain functions.
template <typename Scalar>
VectorField<Scalar> scalar_field(std::function<Scalar(Scalar)> f,
                                 std::function<Scalar(Scalar)> df,
                                 VectorFieldMeta<Scalar> meta) {
  VectorField<Scalar> out;
  out.state_dim = 1;
  out.driver_dim = 1;
  out.eval = [f](const typename VectorField<Scalar>::Vector& x) {
    typename VectorField<Scalar>::Matrix v(1, 1);
    v(0, 0) = f(x(0));
    return v;
  };
  if (df)
    out.jacobian = [df](const typename VectorField<Scalar>::Vector& x) {
      typename VectorField<Scalar>::Matrix v(1, 1);
      v(0, 0) = df(x(0));
      return std::vector<typename VectorField<Scalar>::Matrix>{v};
    };
  out.meta = meta;
  return out;
}

namespace detail {

template <typename Scalar>
Scalar operator_norm(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
      m);
  return svd.singularValues()(0);
}

}  // namespace detail

// Randomized consistency check of a field over the box [lo, hi]^d:
// the analytic Jacobian must match central differences to rel_tol, and the
// declared meta bounds must hold at every sampled point. Throws
// precondition_error on the first violation.
template <typename Scalar>
void check_field(const VectorField<Scalar>& field, Scalar lo, Scalar hi,
                 Rng& rng, int n_samples = 64, Scalar rel_tol = Scalar(1e-5)) {
  using Vector = typename VectorField<Scalar>::Vector;
  using Matrix = typename VectorField<Scalar>::Matrix;
  const Scalar fd_h = Scalar(1e-6) * std::max(Scalar(1), hi - lo);
  for (int s = 0; s < n_samples; ++s) {
    Vector x(field.state_dim);
    for (Index l = 0; l < field.state_dim; ++l)
      x(l) = rng.uniform(double(lo), double(hi));
    const Matrix fx = field.eval(x);
    if (fx.rows() != field.state_dim || fx.cols() != field.driver_dim)
      throw precondition_error("check_field: eval returned wrong shape");

    const Scalar fnorm = detail::operator_norm<Scalar>(fx);
    if (field.meta.sup_f && fnorm > *field.meta.sup_f + Scalar(1e-9))
      throw precondition_error("check_field: |f(x)| exceeds declared sup_f");
    const Scalar linear =
        field.meta.a0 + field.meta.a1 * x.norm() + Scalar(1e-9);
    if ((field.meta.a0 > 0 || field.meta.a1 > 0) && fnorm > linear)
      throw precondition_error(
          "check_field: |f(x)| violates linear growth bound");

    if (!field.has_jacobian()) continue;
    const auto jac = field.jacobian(x);
    if (static_cast<Index>(jac.size()) != field.state_dim)
      throw precondition_error("check_field: jacobian has wrong arity");
    Scalar jac_norm2 = 0;
    for (Index l = 0; l < field.state_dim; ++l) {
      Vector xp = x, xm = x;
      xp(l) += fd_h;
      xm(l) -= fd_h;
      const Matrix fd = (field.eval(xp) - field.eval(xm)) / (2 * fd_h);
      const Scalar scale = std::max(Scalar(1), fd.norm());
      if ((fd - jac[static_cast<std::size_t>(l)]).norm() > rel_tol * scale)
        throw precondition_error(
            "check_field: jacobian disagrees with central differences");
      jac_norm2 += jac[static_cast<std::size_t>(l)].squaredNorm();
    }
    if (std::sqrt(jac_norm2) > field.meta.sup_df + Scalar(1e-7))
      throw precondition_error(
          "check_field: jacobian norm exceeds declared sup_df");
  }
}

}  // namespace young
