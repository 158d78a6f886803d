#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "young/bounds.hpp"
#include "young/fbm.hpp"
#include "young/grid_path.hpp"
#include "young/vector_field.hpp"

namespace young {

// Named coefficient presets so equations are selectable from config files
// and the command line.
//   bounded-sin : f(x) = (2 + sin x) / 3       bounded, sup_f = 1
//   linear      : f(x) = x                     linear growth, closed-form solution
//   sin-plus-2  : f(x) = sin(x) + 2            bounded, well away from 0
//   constant    : f(x) = c                     trivial telescoping solution
struct FieldSpec {
  std::string name = "bounded-sin";
  double c = 1.0;
};

VectorFieldd make_field(const FieldSpec& spec);

struct MomentEstimate {
  double p = 2;
  double point_estimate = 0;
  double ci_low = 0;
  double ci_high = 0;
  Index n_paths = 0;
};

struct McConfig {
  double hurst = 0.75;
  double beta = 0.6;
  double horizon = 1.0;
  Index steps = 1024;  // power of two; the grid has steps + 1 points
  Index n_paths = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  FbmMethod method = FbmMethod::circulant_embedding;
  FieldSpec field;
  double x0 = 0.1;
  double p = 2;        // moment order
  double gamma = 1.0;  // exp-moment order, must stay below 2 beta
  double lambda = 1.0; // exp-moment coefficient

  void validate(bool exp_mode) const;
};

struct McResult {
  MomentEstimate estimate;
  Index divergent = 0;
  std::vector<double> sups;  // per-path sup |X_t|, divergent paths excluded
  // exp-moment extras: least-squares slope of the empirical log survival of
  // (sup - |X0|)_+ against its square (Gaussian-compatible tails give a
  // negative slope), and the largest envelope ratio
  // ((sup - |X0|)_+ / (T ||f|| ||f'||^{(1-b)/b}))^beta / ||B||_beta.
  double tail_slope = 0;
  double envelope_ratio_max = 0;
  bool seminorm_strided = false;
};

// Solves X = X0 + int f(X) dB per sampled fBm path and estimates the p-th
// moment of sup |X| with a bootstrap percentile CI. Divergent paths are
// excluded and counted; more than 1% of them fails the experiment.
McResult mc_sup_moments(const VectorFieldd& field,
                        const Eigen::VectorXd& x0, const McConfig& config);

// Empirical E exp(lambda sup|X|^gamma) for bounded fields, with the
// Gaussian-tail compatibility statistics attached.
McResult mc_exp_moments(const VectorFieldd& field,
                        const Eigen::VectorXd& x0, const McConfig& config);

struct SweepRanges {
  double t_min = 0.5, t_max = 2.0;
  double scale_min = 0.5, scale_max = 2.0;
  double x0_min = -2.0, x0_max = 2.0;
};

struct SweepConfig {
  BoundKind kind = BoundKind::bounded_24;
  double hurst = 0.75;
  double beta = 0.6;
  Index steps = 1024;
  Index train = 100;
  Index holdout = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  FieldSpec field;
  SweepRanges ranges;

  void validate() const;
};

struct SweepRow {
  Index index = 0;
  bool holdout = false;
  double T = 0, scale = 0, x0 = 0, x0_tilde = 0;
  double y_seminorm = 0;
  double lhs = 0;
  double rhs_without_k = 0;
  double ratio = 0;  // the quantity whose max over training is k_hat
};

struct SweepResult {
  double k_hat = 0;
  Index holdout_violations = 0;
  double max_train_ratio = 0;
  double max_holdout_ratio = 0;
  std::vector<SweepRow> rows;
  std::vector<BoundReportd> train_reports;
  std::vector<BoundReportd> holdout_reports;
};

// Randomized (T, driver scale, x0) configurations; calibrates the bound
// constant on the training block and counts held-out violations of the
// calibrated bound.
SweepResult run_bound_sweep(const SweepConfig& config);

struct CrossvalConfig {
  std::vector<double> hursts = {0.6, 0.75, 0.9};
  Index pairs = 50;
  Index steps = 4096;
  std::uint64_t seed = 1;
  int threads = 1;
  double alpha = 0;  // 0 = admissible default from measured exponents
  bool include_chain = false;

  void validate() const;
};

struct CrossvalRow {
  double hurst = 0;
  Index pair = 0;
  bool chain = false;  // f = g row checked against (g_b^2 - g_a^2)/2
  double rs = 0, zahle = 0;
  double est_rs = 0, est_zahle = 0;
  double rel_diff = 0;      // |rs - z| / max(1, |rs|, |z|)
  double chain_rel_rs = 0;  // chain rows only
  double chain_rel_z = 0;
};

struct CrossvalResult {
  std::vector<CrossvalRow> rows;
  double max_rel = 0;
  double frac_within_1e3 = 0;
};

// Independent fBm pairs integrated both ways; per-pair regularized
// relative differences plus optional chain-rule rows.
CrossvalResult run_crossval(const CrossvalConfig& config);

// Bootstrap percentile CI (1000 resamples) of mean(transform(x)).
MomentEstimate bootstrap_moment(const std::vector<double>& xs, double p,
                                std::uint64_t seed,
                                bool exp_mode = false, double gamma = 1,
                                double lambda = 1);

}  // namespace young
