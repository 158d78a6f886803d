#include <doctest.h>

#include <cmath>
#include <functional>

#include "young/fbm.hpp"
#include "young/integrate.hpp"

using namespace young;

namespace {

GridPathd path_of(const std::function<double(double)>& f, Index n,
                  double T = 1.0) {
  GridPathd p;
  p.times.resize(n);
  p.values.resize(n, 1);
  for (Index i = 0; i < n; ++i) {
    p.times(i) = T * double(i) / double(n - 1);
    p.values(i, 0) = f(p.times(i));
  }
  return p;
}

std::pair<GridPathd, GridPathd> fbm_pair(double hurst, Index n_points,
                                         std::uint64_t seed,
                                         Index path_index = 0) {
  FbmSpec spec;
  spec.hurst = hurst;
  spec.dimension = 2;
  spec.n_points = n_points;
  spec.seed = seed;
  spec.method = FbmMethod::circulant_embedding;
  const GridPathd both = sample_fbm(spec, path_index);
  GridPathd f, g;
  f.times = both.times;
  f.values = both.values.col(0);
  g.times = both.times;
  g.values = both.values.col(1);
  return {f, g};
}

}  // namespace

TEST_CASE("riemann-stieltjes sum telescopes for a constant integrand") {
  auto [f, g] = fbm_pair(0.75, 257, 3);
  f.values.setConstant(1.0);
  const auto res = rs_integral(f, g);
  const double expect = g.values(g.size() - 1, 0) - g.values(0, 0);
  CHECK(res.value(0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(res.est_error <= 1e-14);
  CHECK(res.resolution == 257);
}

TEST_CASE("classical smooth integral") {
  const auto f = path_of([](double t) { return t; }, 513);
  const auto g = path_of([](double t) { return t * t; }, 513);
  const auto res = rs_integral(f, g);
  CHECK(res.value(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("chain rule along the sampled path") {
  auto [f, g] = fbm_pair(0.75, 1025, 7);
  (void)f;
  const auto res = rs_integral(g, g);
  const double gb = g.values(g.size() - 1, 0);
  const double expect = 0.5 * gb * gb;
  CHECK(res.value(0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mismatched grids are rejected") {
  const auto f = path_of([](double t) { return t; }, 65);
  const auto g = path_of([](double t) { return t; }, 129);
  CHECK_THROWS_AS(rs_integral(f, g), precondition_error);
  auto h = f;
  h.times(3) += 1e-3;
  CHECK_THROWS_AS(rs_integral(f, h), precondition_error);
}

TEST_CASE("integration is linear in the integrand") {
  auto [f1, g] = fbm_pair(0.75, 513, 11);
  auto [f2, g2] = fbm_pair(0.75, 513, 12);
  (void)g2;
  GridPathd combo = f1;
  combo.values = 2.5 * f1.values - 0.75 * f2.values;

  const double rs_combo = rs_integral(combo, g).value(0);
  const double rs_split = 2.5 * rs_integral(f1, g).value(0) -
                          0.75 * rs_integral(f2, g).value(0);
  CHECK(rs_combo == doctest::Approx(rs_split).epsilon(1e-13));

  const FracOrder<double> order(0.6);
  const double z_combo = zahle_integral(combo, g, order).value(0);
  const double z_split = 2.5 * zahle_integral(f1, g, order).value(0) -
                         0.75 * zahle_integral(f2, g, order).value(0);
  CHECK(z_combo == doctest::Approx(z_split).epsilon(1e-10));
}

TEST_CASE("integration is linear in the integrator") {
  auto [f, g1] = fbm_pair(0.8, 257, 21);
  auto [f2, g2] = fbm_pair(0.8, 257, 22);
  (void)f2;
  GridPathd combo = g1;
  combo.values = 1.5 * g1.values + 0.5 * g2.values;
  const double rs_combo = rs_integral(f, combo).value(0);
  const double rs_split = 1.5 * rs_integral(f, g1).value(0) +
                          0.5 * rs_integral(f, g2).value(0);
  CHECK(rs_combo == doctest::Approx(rs_split).epsilon(1e-13));
}

TEST_CASE("additivity over adjacent windows") {
  auto [f, g] = fbm_pair(0.75, 513, 31);
  const double mid = f.times(256);
  const GridPathd f1 = restrict_window(f, 0.0, mid);
  const GridPathd g1 = restrict_window(g, 0.0, mid);
  const GridPathd f2 = restrict_window(f, mid, f.t_back());
  const GridPathd g2 = restrict_window(g, mid, g.t_back());

  const double whole = rs_integral(f, g).value(0);
  const double split = rs_integral(f1, g1).value(0) +
                       rs_integral(f2, g2).value(0);
  CHECK(whole == doctest::Approx(split).epsilon(1e-13));

  const auto zw = zahle_integral(f, g, FracOrder<double>(0.6));
  const auto z1 = zahle_integral(f1, g1, FracOrder<double>(0.6));
  const auto z2 = zahle_integral(f2, g2, FracOrder<double>(0.6));
  const double budget =
      3.0 * (zw.est_error + z1.est_error + z2.est_error) + 1e-6;
  CHECK(std::abs(zw.value(0) - z1.value(0) - z2.value(0)) <= budget);
}

TEST_CASE("zahle representation reproduces the telescoping identity") {
  auto [f, g] = fbm_pair(0.7, 513, 41);
  f.values.setConstant(1.0);
  const double expect = g.values(g.size() - 1, 0) - g.values(0, 0);
  // constant integrand: only the closed-form kernel part contributes
  const auto z = zahle_integral(f, g, FracOrder<double>(0.55));
  CHECK(z.value(0) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("zahle value is stable across admissible orders") {
  auto [f, g] = fbm_pair(0.8, 1025, 51);
  const auto z1 = zahle_integral(f, g, FracOrder<double>(0.5));
  const auto z2 = zahle_integral(f, g, FracOrder<double>(0.65));
  CHECK(std::abs(z1.value(0) - z2.value(0)) <=
        z1.est_error + z2.est_error + 1e-9);
}

TEST_CASE("incompatible order is rejected with the measured exponents") {
  auto [f, g] = fbm_pair(0.6, 513, 61);
  try {
    zahle_integral(f, g, FracOrder<double>(0.9));
    FAIL("expected precondition_error");
  } catch (const precondition_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("lambda_hat") != std::string::npos);
    CHECK(msg.find("mu_hat") != std::string::npos);
  }
}

TEST_CASE("methods agree within the refinement error budget") {
  Index checked = 0;
  for (double hurst : {0.6, 0.75, 0.9}) {
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
      auto [f, g] = fbm_pair(hurst, 1025, seed);
      const auto rs = rs_integral(f, g);
      const auto z = zahle_integral(f, g);
      const double budget = 3.0 * (rs.est_error + z.est_error);
      CHECK(std::abs(rs.value(0) - z.value(0)) <= std::max(budget, 1e-8));
      ++checked;
    }
  }
  CHECK(checked == 12);
}

TEST_CASE("chain rule holds for both methods at the spec resolution") {
  FbmSpec spec;
  spec.hurst = 0.75;
  spec.n_points = 4097;
  spec.seed = 7;
  const GridPathd y = sample_fbm(spec);
  const double yb = y.values(y.size() - 1, 0);
  const double target = 0.5 * yb * yb;

  const auto rs = rs_integral(y, y);
  CHECK(std::abs(rs.value(0) - target) <= 1e-3 * std::abs(target));
  const auto z = zahle_integral(y, y, FracOrder<double>(0.6));
  CHECK(std::abs(z.value(0) - target) <= 1e-3 * std::abs(target));
}

TEST_CASE("matrix-valued integrand pairs rows with driver columns") {
  // f maps to a 2x2 matrix flattened row-major; g is a 2-d driver.
  const Index n = 513;
  GridPathd f, g;
  f.times.resize(n);
  f.values.resize(n, 4);
  g.times.resize(n);
  g.values.resize(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double t = double(i) / double(n - 1);
    f.times(i) = t;
    g.times(i) = t;
    f.values(i, 0) = 1.0;  // row 0: [1, t]
    f.values(i, 1) = t;
    f.values(i, 2) = 2.0;  // row 1: [2, -1]
    f.values(i, 3) = -1.0;
    g.values(i, 0) = t;      // dg0 = dt
    g.values(i, 1) = t * t;  // dg1 = 2t dt
  }
  const auto res = rs_integral(f, g, Index(2));
  REQUIRE(res.value.size() == 2);
  // row 0: int 1 dt + int t d(t^2) = 1 + 2/3
  CHECK(res.value(0) == doctest::Approx(1.0 + 2.0 / 3.0).epsilon(1e-5));
  // row 1: int 2 dt - int 1 d(t^2) = 2 - 1
  CHECK(res.value(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cumulative integral starts at zero and ends at the full value") {
  auto [f, g] = fbm_pair(0.75, 257, 71);
  const auto cum = rs_cumulative(f, g);
  const auto full = rs_integral(f, g);
  CHECK(cum.values(0, 0) == 0.0);
  CHECK(cum.values(cum.size() - 1, 0) ==
        doctest::Approx(full.value(0)).epsilon(1e-13));
}
