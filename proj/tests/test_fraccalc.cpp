#include <doctest.h>

#include <cmath>
#include <functional>

#include "young/fbm.hpp"
#include "young/fraccalc.hpp"
#include "young/holder.hpp"

using namespace young;

namespace {

SampledFunction<double> sample_fn(const std::function<double(double)>& f,
                                  Index n, double a = 0.0, double b = 1.0) {
  SampledFunction<double> out;
  out.times.resize(n);
  out.values.resize(n);
  for (Index i = 0; i < n; ++i) {
    out.times(i) = a + (b - a) * double(i) / double(n - 1);
    out.values(i) = f(out.times(i));
  }
  return out;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth = 24) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, depth);
}

// Defining integral of the left fractional integral with the singularity
// substituted away: u = (t-s)^alpha turns it into a smooth integrand.
double rl_left_oracle(const std::function<double(double)>& f, double alpha,
                      double a, double t) {
  const double upper = std::pow(t - a, alpha);
  const auto g = [&](double u) { return f(t - std::pow(u, 1.0 / alpha)); };
  return adaptive_simpson(g, 0.0, upper, 1e-13) / (alpha * gamma_fn(alpha));
}

// Defining formula of the left Weyl derivative; substitution
// u = (t-s)^{1-alpha} makes the difference quotient integrand bounded for
// differentiable f, with the analytic limit value at u = 0.
double weyl_left_oracle(const std::function<double(double)>& f,
                        const std::function<double(double)>& df, double alpha,
                        double a, double t) {
  const double one_m = 1.0 - alpha;
  const double upper = std::pow(t - a, one_m);
  const auto g = [&](double u) {
    if (u == 0.0) return df(t) / one_m;
    const double gap = std::pow(u, 1.0 / one_m);
    return (f(t) - f(t - gap)) * std::pow(u, -1.0 / one_m) / one_m;
  };
  const double integral = adaptive_simpson(g, 0.0, upper, 1e-13);
  return (f(t) * std::pow(t - a, -alpha) + alpha * integral) /
         gamma_fn(1.0 - alpha);
}

double inner_product(const SampledFunction<double>& u,
                     const SampledFunction<double>& v) {
  REQUIRE(u.size() == v.size());
  double acc = 0;
  for (Index i = 0; i + 1 < u.size(); ++i)
    acc += 0.5 *
           (u.values(i) * v.values(i) + u.values(i + 1) * v.values(i + 1)) *
           (u.times(i + 1) - u.times(i));
  return acc;
}

}  // namespace

TEST_CASE("gamma function values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(gamma_fn(0.5) ==
        doctest::Approx(1.7724538509055160273).epsilon(1e-13));
  CHECK(gamma_fn(2.5) ==
        doctest::Approx(1.3293403881791370205).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  for (double z = 0.05; z < 20.0; z += 0.173)
    CHECK(gamma_fn(z) == doctest::Approx(std::tgamma(z)).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fn(0.0), precondition_error);
  CHECK_THROWS_AS(gamma_fn(-1.0), precondition_error);
}

TEST_CASE("fractional order validation") {
  CHECK_THROWS_AS(FracOrder<double>(0.0), precondition_error);
  CHECK_THROWS_AS(FracOrder<double>(1.0), precondition_error);
  CHECK_NOTHROW(FracOrder<double>(0.5));
}

TEST_CASE("left fractional integral of a constant") {
  const auto f = sample_fn([](double) { return 1.0; }, 257);
  const auto g = rl_integral_left(f, FracOrder<double>(0.5));
  // (t-a)^alpha / Gamma(alpha + 1); constants interpolate exactly
  const double expect = 1.0 / gamma_fn(1.5);
  CHECK(g.values(g.size() - 1) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(g.values(0) == 0.0);
}

TEST_CASE("left fractional integral of the identity against the oracle") {
  const auto id = [](double t) { return t; };
  const auto f = sample_fn(id, 257);
  const auto g = rl_integral_left(f, FracOrder<double>(0.5));
  const double closed = 1.0 / gamma_fn(2.5);
  const double oracle = rl_left_oracle(id, 0.5, 0.0, 1.0);
  CHECK(oracle == doctest::Approx(closed).epsilon(1e-10));
  CHECK(g.values(g.size() - 1) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("fractional integral of zero is zero") {
  const auto f = sample_fn([](double) { return 0.0; }, 65);
  const auto g = rl_integral_left(f, FracOrder<double>(0.3));
  CHECK(g.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("right fractional integral mirrors the left one") {
  const auto ones = sample_fn([](double) { return 1.0; }, 129);
  const auto r = rl_integral_right(ones, FracOrder<double>(0.5));
  CHECK(r.values(0) == doctest::Approx(1.0 / gamma_fn(1.5)).epsilon(1e-13));
  CHECK(r.values(r.size() - 1) == 0.0);

  const auto ramp = sample_fn([](double t) { return 1.0 - t; }, 257);
  const auto rr = rl_integral_right(ramp, FracOrder<double>(0.5));
  CHECK(rr.values(0) == doctest::Approx(1.0 / gamma_fn(2.5)).epsilon(1e-12));
}

TEST_CASE("weyl derivative of a constant") {
  const double c = 2.5;
  const auto f = sample_fn([&](double) { return c; }, 129);
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (double t : {0.25, 0.5, 1.0}) {
      const double got = weyl_derivative_left(f, FracOrder<double>(alpha), t);
      const double expect = c * std::pow(t, -alpha) / gamma_fn(1.0 - alpha);
      CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("weyl derivative of the identity against the oracle") {
  const auto id = [](double t) { return t; };
  const auto df = [](double) { return 1.0; };
  const auto f = sample_fn(id, 513);
  const double got = weyl_derivative_left(f, FracOrder<double>(0.5), 1.0);
  const double oracle = weyl_left_oracle(id, df, 0.5, 0.0, 1.0);
  // classical half derivative of t is 2 sqrt(t / pi)
  CHECK(oracle == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("weyl derivative rejects the window endpoint") {
  const auto f = sample_fn([](double t) { return t; }, 33);
  CHECK_THROWS_AS(weyl_derivative_left(f, FracOrder<double>(0.5), 0.0),
                  precondition_error);
  CHECK_THROWS_AS(weyl_derivative_right(f, FracOrder<double>(0.5), 1.0),
                  precondition_error);
}

TEST_CASE("right weyl derivative of a constant and reflection of the ramp") {
  const double c = 1.7;
  const auto f = sample_fn([&](double) { return c; }, 129);
  const double got = weyl_derivative_right(f, FracOrder<double>(0.5), 0.0);
  CHECK(got == doctest::Approx(c / std::sqrt(M_PI)).epsilon(1e-12));

  const auto ramp = sample_fn([](double t) { return 1.0 - t; }, 513);
  const double ramp_right =
      weyl_derivative_right(ramp, FracOrder<double>(0.5), 0.0);
  CHECK(ramp_right ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("derivative of integral recovers the function") {
  // spec example: f in the image of the integral operator returns exactly;
  // smooth f through the round trip stays within 1e-3 uniformly.
  const Index n = 1025;
  const auto f = sample_fn([](double t) { return std::sin(3.0 * t); }, n);
  for (double alpha : {0.3, 0.5, 0.7}) {
    const auto integ = rl_integral_left(f, FracOrder<double>(alpha));
    const auto back = weyl_derivative_left_all(integ, FracOrder<double>(alpha));
    double max_err = 0;
    for (Index i = 0; i < back.size(); ++i)
      max_err = std::max(max_err,
                         std::abs(back.values(i) - f.values(i + 1)));
    CHECK(max_err <= 1e-3);
  }
}

TEST_CASE("integral of derivative recovers image-class functions") {
  // g(a) = 0 keeps the image function free of the t^alpha cusp that no
  // piecewise-linear resampling can represent near the endpoint.
  const Index n = 4097;
  const auto g = sample_fn([](double t) { return std::sin(2.0 * t); }, n);
  const FracOrder<double> order(0.4);
  const auto f = rl_integral_left(g, order);  // f lives in the image class
  const auto df = weyl_derivative_left_all(f, order);
  SampledFunction<double> dfull;
  dfull.times = f.times;
  dfull.values.resize(n);
  dfull.values(0) = 0.0;  // the derivative tends to g(a) = 0 at the endpoint
  dfull.values.tail(n - 1) = df.values;
  const auto back = rl_integral_left(dfull, order);
  double max_err = 0;
  for (Index i = 0; i < n; ++i)
    max_err = std::max(max_err, std::abs(back.values(i) - f.values(i)));
  CHECK(max_err <= 1e-3);
}

TEST_CASE("refinement shrinks the inversion error") {
  const auto probe = [](Index n) {
    const auto f = sample_fn([](double t) { return std::sin(3.0 * t); }, n);
    const auto integ = rl_integral_left(f, FracOrder<double>(0.5));
    const auto back =
        weyl_derivative_left_all(integ, FracOrder<double>(0.5));
    double max_err = 0;
    for (Index i = 0; i < back.size(); ++i)
      max_err = std::max(max_err,
                         std::abs(back.values(i) - f.values(i + 1)));
    return max_err;
  };
  double prev = probe(65);
  for (Index n : {129, 257, 513, 1025}) {
    const double cur = probe(n);
    CHECK(cur <= prev * 1.2);  // slack for the coarsest levels
    prev = cur;
  }
}

TEST_CASE("integral duality pairing") {
  const Index n = 1025;
  const auto f = sample_fn([](double t) { return std::sin(3.0 * t); }, n);
  const auto g = sample_fn([](double t) { return std::cos(2.0 * t); }, n);
  const FracOrder<double> order(0.5);
  const double left = inner_product(rl_integral_left(f, order), g);
  const double right = inner_product(f, rl_integral_right(g, order));
  CHECK(std::abs(left) == doctest::Approx(std::abs(right)).epsilon(1e-6));
}

TEST_CASE("derivative duality pairing on image-class functions") {
  const Index n = 1025;
  const FracOrder<double> order(0.45);
  const auto phi = sample_fn([](double t) { return std::sin(2.0 * t); }, n);
  const auto psi = sample_fn([](double t) { return std::cos(3.0 * t); }, n);
  const auto f = rl_integral_left(phi, order);
  const auto g = rl_integral_right(psi, order);

  const auto df = weyl_derivative_left_all(f, order);
  SampledFunction<double> df_full;
  df_full.times = f.times;
  df_full.values.resize(n);
  df_full.values(0) = 0.0;
  df_full.values.tail(n - 1) = df.values;

  const auto dg = weyl_derivative_right_all(g, order);
  SampledFunction<double> dg_full;
  dg_full.times = g.times;
  dg_full.values.resize(n);
  dg_full.values(n - 1) = 0.0;
  dg_full.values.head(n - 1) = dg.values;

  const double left = inner_product(df_full, g);
  const double right = inner_product(f, dg_full);
  CHECK(std::abs(left) == doctest::Approx(std::abs(right)).epsilon(1e-4));
}

TEST_CASE("derivative bound ratio stays bounded over an fBm sweep") {
  // |D_{t-}^{1-alpha} y_{t-}(r)| <= k ||y||_{r,t,beta} (t-r)^{alpha+beta-1};
  // the measured ratio over windows and seeds stays modest.
  const double alpha = 0.6, beta = 0.65;
  double worst = 0;
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    FbmSpec spec;
    spec.hurst = 0.75;
    spec.n_points = 513;
    spec.seed = seed;
    const GridPathd y = sample_fbm(spec);
    for (Index ir = 0; ir + 64 < y.size(); ir += 128) {
      for (Index it = ir + 64; it < y.size(); it += 128) {
        SampledFunction<double> window;
        window.times = y.times.segment(ir, it - ir + 1);
        window.values = y.values.col(0).segment(ir, it - ir + 1);
        window.values.array() -= y.values(it, 0);
        const double d = weyl_derivative_right(
            window, FracOrder<double>(1.0 - alpha), window.times(0));
        GridPathd wpath;
        wpath.times = window.times;
        wpath.values = window.values;
        const double sem = holder_seminorm(wpath, beta, window.times(0),
                                           window.times(window.size() - 1));
        const double span = window.times(window.size() - 1) - window.times(0);
        if (sem == 0) continue;
        const double ratio =
            std::abs(d) / (sem * std::pow(span, alpha + beta - 1.0));
        worst = std::max(worst, ratio);
      }
    }
  }
  INFO("max ratio ", worst);
  CHECK(worst > 0.0);
  CHECK(worst <= 100.0);
}

TEST_CASE("default alpha is admissible") {
  for (double beta : {0.55, 0.6, 0.75, 0.9}) {
    const double a = default_alpha(beta);
    CHECK(a > 1.0 - beta);
    CHECK(a < beta);
  }
  CHECK(default_alpha(0.75) == doctest::Approx(0.625));
  CHECK_THROWS_AS(default_alpha(0.5), precondition_error);
}
