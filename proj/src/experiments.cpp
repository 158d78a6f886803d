#include "young/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "young/holder.hpp"
#include "young/integrate.hpp"
#include "young/parallel.hpp"
#include "young/rng.hpp"
#include "young/solver.hpp"

namespace young {

namespace {

constexpr std::uint64_t kBootstrapStream = 0xB007574200000000ULL;
constexpr std::uint64_t kSweepDrawStream = 0x5EEDD0AA00000000ULL;

bool power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

double sup_abs(const GridPathd& x) {
  double best = 0;
  for (Index i = 0; i < x.size(); ++i)
    best = std::max(best, x.values.row(i).norm());
  return best;
}

// fBm on [0, horizon] from a unit-horizon sample by self-similarity:
// B_{Tt} has the law of T^H B_t, so times scale by T and values by T^H.
GridPathd scaled_driver(const FbmSampler& unit, Index path_index, double T,
                        double value_scale) {
  GridPathd y = unit.sample(path_index);
  const double h = unit.spec().hurst;
  y.times *= T;
  y.values *= std::pow(T, h) * value_scale;
  return y;
}

// Least-squares slope of log survival against u^2 over the top fifth of
// the sample; negative for Gaussian-compatible tails.
double tail_slope_of(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const std::size_t n = u.size();
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < n; ++k) {
    const double survival = static_cast<double>(n - k) / static_cast<double>(n);
    if (survival > 0.2 || u[k] <= 0) continue;
    xs.push_back(u[k] * u[k]);
    ys.push_back(std::log(survival));
  }
  if (xs.size() < 4) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0) return 0;
  return (m * sxy - sx * sy) / denom;
}

struct PathBatch {
  std::vector<double> sups;
  std::vector<double> seminorms;  // only filled when requested
  Index divergent = 0;
  bool strided = false;
};

PathBatch solve_batch(const VectorFieldd& field, const Eigen::VectorXd& x0,
                      const McConfig& cfg, bool want_seminorms) {
  FbmSpec spec;
  spec.hurst = cfg.hurst;
  spec.dimension = field.driver_dim;
  spec.n_points = cfg.steps + 1;
  spec.horizon = cfg.horizon;
  spec.seed = cfg.seed;
  spec.method = cfg.method;
  const FbmSampler sampler(spec);

  const Index n = cfg.n_paths;
  std::vector<double> sups(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::quiet_NaN());
  std::vector<double> semis(
      want_seminorms ? static_cast<std::size_t>(n) : 0, 0.0);
  std::vector<char> bad(static_cast<std::size_t>(n), 0);
  const bool strided = spec.n_points > (1 << 13);

  parallel_for(n, cfg.threads, [&](Index i) {
    const GridPathd y = sampler.sample(i);
    try {
      const GridPathd x = euler_path(field, x0, y);
      sups[static_cast<std::size_t>(i)] = sup_abs(x);
    } catch (const divergence_error&) {
      bad[static_cast<std::size_t>(i)] = 1;
      return;
    }
    if (want_seminorms)
      semis[static_cast<std::size_t>(i)] =
          holder_seminorm_auto(y, cfg.beta, y.t_front(), y.t_back());
  });

  PathBatch batch;
  batch.strided = strided && want_seminorms;
  for (Index i = 0; i < n; ++i) {
    if (bad[static_cast<std::size_t>(i)]) {
      ++batch.divergent;
      continue;
    }
    batch.sups.push_back(sups[static_cast<std::size_t>(i)]);
    if (want_seminorms)
      batch.seminorms.push_back(semis[static_cast<std::size_t>(i)]);
  }
  if (100 * batch.divergent > n)
    throw experiment_error("more than 1% of paths diverged (" +
                           std::to_string(batch.divergent) + " of " +
                           std::to_string(n) + ")");
  return batch;
}

}  // namespace

VectorFieldd make_field(const FieldSpec& spec) {
  VectorFieldMeta<double> meta;
  if (spec.name == "bounded-sin") {
    meta.sup_f = 1.0;
    meta.sup_df = 1.0 / 3.0;
    meta.sup_ddf = 1.0 / 3.0;
    meta.a0 = 1.0;
    meta.a1 = 0.0;
    meta.lambda = 1.0;
    return scalar_field<double>(
        [](double x) { return (2.0 + std::sin(x)) / 3.0; },
        [](double x) { return std::cos(x) / 3.0; }, meta);
  }
  if (spec.name == "linear") {
    meta.sup_df = 1.0;
    meta.sup_ddf = 0.0;
    meta.a0 = 0.0;
    meta.a1 = 1.0;
    meta.lambda = 1.0;
    return scalar_field<double>([](double x) { return x; },
                                [](double) { return 1.0; }, meta);
  }
  if (spec.name == "sin-plus-2") {
    meta.sup_f = 3.0;
    meta.sup_df = 1.0;
    meta.sup_ddf = 1.0;
    meta.a0 = 3.0;
    meta.a1 = 0.0;
    meta.lambda = 1.0;
    return scalar_field<double>(
        [](double x) { return std::sin(x) + 2.0; },
        [](double x) { return std::cos(x); }, meta);
  }
  if (spec.name == "constant") {
    const double c = spec.c;
    meta.sup_f = std::abs(c);
    meta.sup_df = 0.0;
    meta.sup_ddf = 0.0;
    meta.a0 = std::abs(c);
    meta.a1 = 0.0;
    meta.lambda = 1.0;
    return scalar_field<double>([c](double) { return c; },
                                [](double) { return 0.0; }, meta);
  }
  throw precondition_error("unknown field preset: " + spec.name);
}

void McConfig::validate(bool exp_mode) const {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw precondition_error("McConfig: hurst must lie in (1/2, 1)");
  if (!(beta > 0.5 && beta < hurst))
    throw precondition_error("McConfig: need 1/2 < beta < hurst");
  if (!power_of_two(steps))
    throw precondition_error("McConfig: steps must be a power of two");
  if (n_paths < 1) throw precondition_error("McConfig: n_paths >= 1");
  if (!(horizon > 0)) throw precondition_error("McConfig: horizon > 0");
  if (exp_mode && !(gamma < 2 * beta))
    throw precondition_error("McConfig: exp moments need gamma < 2 beta");
  if (exp_mode && !(lambda >= 0))
    throw precondition_error("McConfig: lambda must be >= 0");
}

MomentEstimate bootstrap_moment(const std::vector<double>& xs, double p,
                                std::uint64_t seed, bool exp_mode,
                                double gamma, double lambda) {
  if (xs.empty()) throw experiment_error("bootstrap_moment: empty sample");
  auto transform = [&](double x) {
    return exp_mode ? std::exp(lambda * std::pow(x, gamma)) : std::pow(x, p);
  };
  const std::size_t n = xs.size();
  double point = 0;
  for (double x : xs) point += transform(x);
  point /= static_cast<double>(n);

  constexpr int kResamples = 1000;
  std::vector<double> means(kResamples);
  Rng rng = Rng::substream(seed, kBootstrapStream);
  for (int b = 0; b < kResamples; ++b) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
      acc += transform(xs[rng.below(n)]);
    means[static_cast<std::size_t>(b)] = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  MomentEstimate est;
  est.p = p;
  est.point_estimate = point;
  est.ci_low = std::min(means[24], point);
  est.ci_high = std::max(means[974], point);
  est.n_paths = static_cast<Index>(n);
  return est;
}

McResult mc_sup_moments(const VectorFieldd& field, const Eigen::VectorXd& x0,
                        const McConfig& config) {
  config.validate(false);
  const PathBatch batch = solve_batch(field, x0, config, false);
  McResult res;
  res.sups = batch.sups;
  res.divergent = batch.divergent;
  res.estimate = bootstrap_moment(batch.sups, config.p, config.seed);
  return res;
}

McResult mc_exp_moments(const VectorFieldd& field, const Eigen::VectorXd& x0,
                        const McConfig& config) {
  config.validate(true);
  if (!field.meta.sup_f)
    throw precondition_error("mc_exp_moments: field must declare sup_f");
  const PathBatch batch = solve_batch(field, x0, config, true);

  McResult res;
  res.sups = batch.sups;
  res.divergent = batch.divergent;
  res.seminorm_strided = batch.strided;
  res.estimate = bootstrap_moment(batch.sups, config.gamma, config.seed, true,
                                  config.gamma, config.lambda);

  const double x0n = x0.norm();
  std::vector<double> excess;
  excess.reserve(batch.sups.size());
  for (double s : batch.sups) excess.push_back(std::max(0.0, s - x0n));
  res.tail_slope = tail_slope_of(excess);

  const double denom =
      config.horizon * (*field.meta.sup_f) *
      std::pow(field.meta.sup_df, (1 - config.beta) / config.beta);
  if (denom > 0) {
    double worst = 0;
    for (std::size_t i = 0; i < batch.sups.size(); ++i) {
      if (batch.seminorms[i] <= 0) continue;
      const double z = std::pow(excess[i] / denom, config.beta);
      worst = std::max(worst, z / batch.seminorms[i]);
    }
    res.envelope_ratio_max = worst;
  }
  return res;
}

void SweepConfig::validate() const {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw precondition_error("SweepConfig: hurst must lie in (1/2, 1)");
  if (!(beta > 0.5 && beta < hurst))
    throw precondition_error("SweepConfig: need 1/2 < beta < hurst");
  if (!power_of_two(steps))
    throw precondition_error("SweepConfig: steps must be a power of two");
  if (train < 1 || holdout < 0)
    throw precondition_error("SweepConfig: need train >= 1 configs");
  if (!(ranges.t_min > 0 && ranges.t_max >= ranges.t_min))
    throw precondition_error("SweepConfig: bad T range");
  if (!(ranges.scale_min >= 0 && ranges.scale_max >= ranges.scale_min))
    throw precondition_error("SweepConfig: bad scale range");
}

SweepResult run_bound_sweep(const SweepConfig& config) {
  config.validate();
  const VectorFieldd field = make_field(config.field);
  if (config.kind == BoundKind::bounded_24 && !field.meta.sup_f)
    throw precondition_error("bound sweep: kind bounded_24 needs a bounded field");
  if (config.kind == BoundKind::stability_32 && !field.meta.sup_ddf)
    throw precondition_error("bound sweep: kind stability_32 needs sup_ddf");

  FbmSpec unit_spec;
  unit_spec.hurst = config.hurst;
  unit_spec.dimension = 1;
  unit_spec.n_points = config.steps + 1;
  unit_spec.horizon = 1.0;
  unit_spec.seed = config.seed;
  unit_spec.method = FbmMethod::circulant_embedding;
  const FbmSampler unit(unit_spec);

  const Index total = config.train + config.holdout;
  std::vector<SweepRow> rows(static_cast<std::size_t>(total));
  std::vector<BoundReportd> reports(static_cast<std::size_t>(total));

  parallel_for(total, config.threads, [&](Index i) {
    Rng draw = Rng::substream(config.seed, kSweepDrawStream +
                                               static_cast<std::uint64_t>(i));
    const double T = draw.uniform(config.ranges.t_min, config.ranges.t_max);
    const double scale =
        draw.uniform(config.ranges.scale_min, config.ranges.scale_max);
    const double x0v = draw.uniform(config.ranges.x0_min, config.ranges.x0_max);
    const double x0tv =
        draw.uniform(config.ranges.x0_min, config.ranges.x0_max);

    const GridPathd y = scaled_driver(unit, i, T, scale);
    Eigen::VectorXd x0(1);
    x0(0) = x0v;
    const GridPathd x = euler_path(field, x0, y);
    const double y_sem =
        holder_seminorm_auto(y, config.beta, y.t_front(), y.t_back());
    const double lhs = sup_abs(x);

    BoundReportd rep;
    if (config.kind == BoundKind::bounded_24) {
      rep = bound_bounded(field.meta, y_sem, T, config.beta, std::abs(x0v));
      rep.lhs = lhs;
    } else if (config.kind == BoundKind::linear_growth_25) {
      rep = bound_linear_growth(field.meta, y_sem, T, config.beta,
                                std::abs(x0v));
      rep.lhs = lhs;
    } else {
      Eigen::VectorXd x0t(1);
      x0t(0) = x0tv;
      const GridPathd xt = euler_path(field, x0t, y);
      rep = stability_bound(field, field, x, xt, y, y, config.beta);
    }

    SweepRow row;
    row.index = i;
    row.holdout = i >= config.train;
    row.T = T;
    row.scale = scale;
    row.x0 = x0v;
    row.x0_tilde = x0tv;
    row.y_seminorm = y_sem;
    row.lhs = rep.lhs;
    row.rhs_without_k = rep.rhs_without_k;
    row.ratio = k_ratio(rep).value_or(0.0);
    rows[static_cast<std::size_t>(i)] = row;
    reports[static_cast<std::size_t>(i)] = std::move(rep);
  });

  SweepResult result;
  result.rows = std::move(rows);
  for (Index i = 0; i < total; ++i) {
    if (i < config.train)
      result.train_reports.push_back(reports[static_cast<std::size_t>(i)]);
    else
      result.holdout_reports.push_back(reports[static_cast<std::size_t>(i)]);
  }
  result.k_hat = calibrate_k(result.train_reports);
  for (auto& r : result.train_reports) r.k_hat = result.k_hat;
  for (Index i = 0; i < total; ++i) {
    const auto& row = result.rows[static_cast<std::size_t>(i)];
    if (i < config.train)
      result.max_train_ratio = std::max(result.max_train_ratio, row.ratio);
    else
      result.max_holdout_ratio = std::max(result.max_holdout_ratio, row.ratio);
  }
  for (const auto& r : result.holdout_reports)
    if (r.lhs > bound_with_k(r, result.k_hat)) ++result.holdout_violations;
  return result;
}

void CrossvalConfig::validate() const {
  if (hursts.empty()) throw precondition_error("CrossvalConfig: no hursts");
  for (double h : hursts)
    if (!(h > 0.5 && h < 1.0))
      throw precondition_error("CrossvalConfig: hurst must lie in (1/2, 1)");
  if (pairs < 1) throw precondition_error("CrossvalConfig: pairs >= 1");
  if (steps < 8) throw precondition_error("CrossvalConfig: steps >= 8");
  if (alpha != 0 && !(alpha > 0 && alpha < 1))
    throw precondition_error("CrossvalConfig: alpha must lie in (0, 1)");
}

CrossvalResult run_crossval(const CrossvalConfig& config) {
  config.validate();
  const Index per_h = config.pairs + (config.include_chain ? 1 : 0);
  const Index total = static_cast<Index>(config.hursts.size()) * per_h;
  std::vector<CrossvalRow> rows(static_cast<std::size_t>(total));

  std::vector<FbmSampler> samplers;
  samplers.reserve(config.hursts.size());
  for (double h : config.hursts) {
    FbmSpec spec;
    spec.hurst = h;
    spec.dimension = 2;
    spec.n_points = config.steps + 1;
    spec.horizon = 1.0;
    spec.seed = config.seed;
    spec.method = FbmMethod::circulant_embedding;
    samplers.emplace_back(spec);
  }

  parallel_for(total, config.threads, [&](Index idx) {
    const Index hi = idx / per_h;
    const Index pair = idx % per_h;
    const bool chain = config.include_chain && pair == config.pairs;
    const GridPathd both = samplers[static_cast<std::size_t>(hi)].sample(idx);
    GridPathd f, g;
    f.times = both.times;
    f.values = both.values.col(0);
    g.times = both.times;
    g.values = both.values.col(chain ? 0 : 1);

    const auto rs = rs_integral(f, g);
    const auto z = config.alpha > 0
                       ? zahle_integral(f, g, FracOrder<double>(config.alpha))
                       : zahle_integral(f, g);

    CrossvalRow row;
    row.hurst = config.hursts[static_cast<std::size_t>(hi)];
    row.pair = pair;
    row.chain = chain;
    row.rs = rs.value(0);
    row.zahle = z.value(0);
    row.est_rs = rs.est_error;
    row.est_zahle = z.est_error;
    row.rel_diff = std::abs(row.rs - row.zahle) /
                   std::max({1.0, std::abs(row.rs), std::abs(row.zahle)});
    if (chain) {
      const double gb = g.values(g.size() - 1, 0);
      const double ga = g.values(0, 0);
      const double target = 0.5 * (gb * gb - ga * ga);
      const double denom = std::max(std::abs(target), 0.1);
      row.chain_rel_rs = std::abs(row.rs - target) / denom;
      row.chain_rel_z = std::abs(row.zahle - target) / denom;
    }
    rows[static_cast<std::size_t>(idx)] = row;
  });

  CrossvalResult result;
  result.rows = std::move(rows);
  Index within = 0, counted = 0;
  for (const auto& row : result.rows) {
    if (row.chain) continue;
    ++counted;
    result.max_rel = std::max(result.max_rel, row.rel_diff);
    if (row.rel_diff <= 1e-3) ++within;
  }
  result.frac_within_1e3 =
      counted ? static_cast<double>(within) / static_cast<double>(counted) : 1.0;
  return result;
}

}  // namespace young
