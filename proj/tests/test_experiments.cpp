#include <doctest.h>

#include <cmath>
#include <sstream>

#include "young/config.hpp"
#include "young/experiments.hpp"
#include "young/fbm.hpp"
#include "young/report.hpp"
#include "young/vector_field.hpp"

using namespace young;

namespace {

Eigen::VectorXd x0_of(double v) {
  Eigen::VectorXd x(1);
  x(0) = v;
  return x;
}

}  // namespace

TEST_CASE("field presets pass the declared-bound and jacobian checks") {
  Rng rng(1);
  for (const char* name : {"bounded-sin", "linear", "sin-plus-2"}) {
    const VectorFieldd f = make_field(FieldSpec{name, 1.0});
    CHECK_NOTHROW(check_field<double>(f, -3.0, 3.0, rng));
  }
  FieldSpec c;
  c.name = "constant";
  c.c = -2.0;
  const VectorFieldd fc = make_field(c);
  CHECK_NOTHROW(check_field<double>(fc, -3.0, 3.0, rng));
  CHECK_THROWS_AS(make_field(FieldSpec{"no-such-field", 1.0}),
                  precondition_error);
}

TEST_CASE("field check catches a lying jacobian") {
  VectorFieldMeta<double> meta;
  meta.sup_df = 1.0;
  const VectorFieldd broken = scalar_field<double>(
      [](double x) { return std::sin(x); }, [](double) { return 0.5; }, meta);
  Rng rng(2);
  CHECK_THROWS_AS(check_field<double>(broken, -2.0, 2.0, rng),
                  precondition_error);
}

TEST_CASE("zero coefficient gives the exact moment with a zero-width CI") {
  McConfig cfg;
  cfg.steps = 64;
  cfg.n_paths = 200;
  cfg.p = 4;
  cfg.seed = 5;
  FieldSpec spec;
  spec.name = "constant";
  spec.c = 0.0;
  cfg.field = spec;
  const VectorFieldd field = make_field(spec);
  const McResult res = mc_sup_moments(field, x0_of(-1.5), cfg);
  CHECK(res.estimate.point_estimate == doctest::Approx(std::pow(1.5, 4)));
  CHECK(res.estimate.ci_low == doctest::Approx(res.estimate.ci_high));
  CHECK(res.divergent == 0);
}

TEST_CASE("constant coefficient matches a direct simulation of x0 + cB") {
  McConfig cfg;
  cfg.steps = 128;
  cfg.n_paths = 2000;
  cfg.p = 2;
  cfg.seed = 11;
  FieldSpec spec;
  spec.name = "constant";
  spec.c = 0.8;
  cfg.field = spec;
  const VectorFieldd field = make_field(spec);
  const McResult via_solver = mc_sup_moments(field, x0_of(0.5), cfg);

  // independent direct simulation bypassing the solver
  FbmSpec fspec;
  fspec.hurst = cfg.hurst;
  fspec.n_points = cfg.steps + 1;
  fspec.seed = 777;  // fresh randomness
  fspec.method = FbmMethod::circulant_embedding;
  const FbmSampler sampler(fspec);
  std::vector<double> sups;
  for (Index p = 0; p < cfg.n_paths; ++p) {
    const GridPathd b = sampler.sample(p);
    double s = 0;
    for (Index i = 0; i < b.size(); ++i)
      s = std::max(s, std::abs(0.5 + 0.8 * b.values(i, 0)));
    sups.push_back(s);
  }
  const MomentEstimate direct = bootstrap_moment(sups, 2.0, 999);
  CHECK(via_solver.estimate.ci_low <= direct.ci_high);
  CHECK(direct.ci_low <= via_solver.estimate.ci_high);
}

TEST_CASE("small and large runs give overlapping intervals") {
  McConfig small;
  small.steps = 128;
  small.n_paths = 200;
  small.p = 4;
  small.seed = 21;
  McConfig large = small;
  large.n_paths = 2000;
  const VectorFieldd field = make_field(FieldSpec{"bounded-sin", 1.0});
  const McResult a = mc_sup_moments(field, x0_of(0.1), small);
  const McResult b = mc_sup_moments(field, x0_of(0.1), large);
  CHECK(a.estimate.ci_low <= b.estimate.ci_high);
  CHECK(b.estimate.ci_low <= a.estimate.ci_high);
}

TEST_CASE("power means of the sup are nondecreasing in the order") {
  McConfig cfg;
  cfg.steps = 128;
  cfg.n_paths = 500;
  cfg.seed = 31;
  const VectorFieldd field = make_field(FieldSpec{"bounded-sin", 1.0});
  const McResult res = mc_sup_moments(field, x0_of(0.1), cfg);
  double prev = 0;
  for (double p : {2.0, 4.0, 6.0}) {
    double m = 0;
    for (double s : res.sups) m += std::pow(s, p);
    m /= double(res.sups.size());
    const double power_mean = std::pow(m, 1.0 / p);
    CHECK(power_mean >= prev - 1e-12);
    prev = power_mean;
  }
}

TEST_CASE("exponential moments of the zero coefficient are exact") {
  McConfig cfg;
  cfg.steps = 64;
  cfg.n_paths = 100;
  cfg.gamma = 1.0;
  cfg.lambda = 0.7;
  cfg.seed = 41;
  FieldSpec spec;
  spec.name = "constant";
  spec.c = 0.0;
  cfg.field = spec;
  const VectorFieldd field = make_field(spec);
  const McResult res = mc_exp_moments(field, x0_of(1.2), cfg);
  CHECK(res.estimate.point_estimate ==
        doctest::Approx(std::exp(0.7 * 1.2)).epsilon(1e-12));

  cfg.lambda = 0.0;
  const McResult unit = mc_exp_moments(field, x0_of(1.2), cfg);
  CHECK(unit.estimate.point_estimate == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponential moments enforce the order threshold and boundedness") {
  McConfig cfg;
  cfg.beta = 0.6;
  cfg.gamma = 1.3;  // >= 2 beta
  const VectorFieldd bounded = make_field(FieldSpec{"bounded-sin", 1.0});
  CHECK_THROWS_AS(mc_exp_moments(bounded, x0_of(0.1), cfg),
                  precondition_error);
  cfg.gamma = 1.0;
  const VectorFieldd unbounded = make_field(FieldSpec{"linear", 1.0});
  CHECK_THROWS_AS(mc_exp_moments(unbounded, x0_of(0.1), cfg),
                  precondition_error);
}

TEST_CASE("exponential-moment tails look gaussian-compatible") {
  McConfig cfg;
  cfg.steps = 256;
  cfg.n_paths = 2000;
  cfg.gamma = 1.0;
  cfg.lambda = 1.0;
  cfg.beta = 0.6;
  cfg.seed = 51;
  const VectorFieldd field = make_field(FieldSpec{"bounded-sin", 1.0});
  const McResult res = mc_exp_moments(field, x0_of(0.1), cfg);
  CHECK(res.tail_slope < 0.0);
  CHECK(res.envelope_ratio_max > 0.0);
  CHECK(std::isfinite(res.envelope_ratio_max));
}

TEST_CASE("all paths diverging fails the experiment") {
  McConfig cfg;
  cfg.steps = 64;
  cfg.n_paths = 50;
  cfg.seed = 61;
  VectorFieldMeta<double> meta;
  meta.sup_df = 1e300;
  meta.a1 = 1e300;
  const VectorFieldd explosive = scalar_field<double>(
      [](double x) { return 1e160 * (1.0 + x * x); },
      [](double x) { return 2e160 * x; }, meta);
  CHECK_THROWS_AS(mc_sup_moments(explosive, x0_of(1.0), cfg),
                  experiment_error);
}

TEST_CASE("bootstrap interval brackets the point estimate") {
  std::vector<double> xs;
  Rng rng(71);
  for (int i = 0; i < 400; ++i) xs.push_back(std::abs(rng.normal()) + 0.1);
  const MomentEstimate est = bootstrap_moment(xs, 3.0, 123);
  CHECK(est.ci_low <= est.point_estimate);
  CHECK(est.point_estimate <= est.ci_high);
  CHECK(est.ci_low < est.ci_high);

  const std::vector<double> flat(50, 2.0);
  const MomentEstimate exact = bootstrap_moment(flat, 2.0, 123);
  CHECK(exact.ci_low == exact.point_estimate);
  CHECK(exact.ci_high == exact.point_estimate);
}

TEST_CASE("crossval campaign summarizes pair agreement") {
  CrossvalConfig cfg;
  cfg.hursts = {0.75};
  cfg.pairs = 3;
  cfg.steps = 256;
  cfg.seed = 81;
  cfg.include_chain = true;
  cfg.threads = 2;
  const CrossvalResult res = run_crossval(cfg);
  CHECK(res.rows.size() == 4);
  CHECK(res.max_rel <= 1e-2);
  CHECK(res.frac_within_1e3 >= 0.0);
  Index chain_rows = 0;
  for (const auto& row : res.rows)
    if (row.chain) {
      ++chain_rows;
      CHECK(row.chain_rel_rs <= 1e-6);  // trapezoid telescopes exactly
      CHECK(row.chain_rel_z <= 1e-2);
    }
  CHECK(chain_rows == 1);
}

TEST_CASE("experiments are deterministic across thread counts") {
  SweepConfig cfg;
  cfg.kind = BoundKind::linear_growth_25;
  cfg.field.name = "linear";
  cfg.hurst = 0.75;
  cfg.beta = 0.6;
  cfg.steps = 128;
  cfg.train = 20;
  cfg.holdout = 10;
  cfg.seed = 91;

  cfg.threads = 1;
  const SweepResult a = run_bound_sweep(cfg);
  cfg.threads = 4;
  const SweepResult b = run_bound_sweep(cfg);
  CHECK(sweep_report(cfg, a).dump() == sweep_report(cfg, b).dump());
  CHECK(sweep_csv(a) == sweep_csv(b));

  McConfig mc;
  mc.steps = 64;
  mc.n_paths = 100;
  mc.seed = 92;
  const VectorFieldd field = make_field(FieldSpec{"bounded-sin", 1.0});
  mc.threads = 1;
  const McResult m1 = mc_sup_moments(field, x0_of(0.1), mc);
  mc.threads = 3;
  const McResult m2 = mc_sup_moments(field, x0_of(0.1), mc);
  CHECK(m1.estimate.point_estimate == m2.estimate.point_estimate);
  CHECK(m1.estimate.ci_low == m2.estimate.ci_low);
  CHECK(m1.estimate.ci_high == m2.estimate.ci_high);
}

TEST_CASE("config files parse sections, comments, and overrides") {
  std::stringstream ss;
  ss << "# experiment configuration\n"
     << "[common]\n"
     << "seed = 42   ; trailing comment\n"
     << "threads = 8\n"
     << "\n"
     << "[bound-sweep]\n"
     << "kind = bounded24\n"
     << "beta = 0.6\n";
  const KvConfig cfg = KvConfig::parse(ss);
  CHECK(cfg.get_u64("common", "seed", 0) == 42);
  CHECK(cfg.get_int("common", "threads", 1) == 8);
  CHECK(cfg.get("bound-sweep", "kind", "") == "bounded24");
  CHECK(cfg.get_double("bound-sweep", "beta", 0.0) == doctest::Approx(0.6));
  CHECK(cfg.get("bound-sweep", "missing", "fallback") == "fallback");
  CHECK(!cfg.has("common", "missing"));

  // dump() round-trips through the parser
  std::stringstream dumped(cfg.dump());
  const KvConfig again = KvConfig::parse(dumped);
  CHECK(again.get_u64("common", "seed", 0) == 42);
  CHECK(again.get("bound-sweep", "kind", "") == "bounded24");

  std::stringstream bad("key_without_value\n");
  CHECK_THROWS_AS(KvConfig::parse(bad), precondition_error);
}

TEST_CASE("sweep csv carries the documented header") {
  SweepResult res;
  res.rows.push_back(SweepRow{});
  const std::string csv = sweep_csv(res);
  CHECK(csv.rfind("index,holdout,T,scale,x0,x0_tilde,y_seminorm,lhs,"
                  "rhs_without_k,ratio\n", 0) == 0);
}

TEST_CASE("moment config validation") {
  McConfig cfg;
  cfg.steps = 100;  // not a power of two
  CHECK_THROWS_AS(cfg.validate(false), precondition_error);
  cfg.steps = 128;
  cfg.beta = 0.8;  // above hurst
  CHECK_THROWS_AS(cfg.validate(false), precondition_error);
  cfg.beta = 0.6;
  CHECK_NOTHROW(cfg.validate(false));
}
