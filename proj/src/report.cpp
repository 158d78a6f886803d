#include "young/report.hpp"

#include <fstream>
#include <sstream>

#include "young/csv.hpp"

namespace young {

ordered_json to_json(const BoundReportd& report) {
  ordered_json j;
  j["kind"] = to_string(report.kind);
  j["lhs"] = report.lhs;
  j["rhs_without_k"] = report.rhs_without_k;
  if (report.k_hat) j["k_hat"] = *report.k_hat;
  ordered_json factors;
  for (const auto& [name, value] : report.factors) factors[name] = value;
  j["factors"] = factors;
  return j;
}

ordered_json to_json(const MomentEstimate& est) {
  ordered_json j;
  j["p"] = est.p;
  j["point_estimate"] = est.point_estimate;
  j["ci_low"] = est.ci_low;
  j["ci_high"] = est.ci_high;
  j["n_paths"] = est.n_paths;
  return j;
}

ordered_json to_json(const IntegralResult<double>& res) {
  ordered_json j;
  j["method"] = to_string(res.method);
  ordered_json value = ordered_json::array();
  for (Index i = 0; i < res.value.size(); ++i) value.push_back(res.value(i));
  j["value"] = value;
  j["resolution"] = res.resolution;
  j["est_error"] = res.est_error;
  if (!res.warning.empty()) j["warning"] = res.warning;
  return j;
}

ordered_json sweep_report(const SweepConfig& config,
                          const SweepResult& result) {
  ordered_json j;
  j["command"] = "bound-sweep";
  j["kind"] = to_string(config.kind);
  j["field"] = config.field.name;
  j["hurst"] = config.hurst;
  j["beta"] = config.beta;
  j["steps"] = config.steps;
  j["train"] = config.train;
  j["holdout"] = config.holdout;
  j["seed"] = config.seed;
  j["ranges"] = ordered_json{{"t_min", config.ranges.t_min},
                             {"t_max", config.ranges.t_max},
                             {"scale_min", config.ranges.scale_min},
                             {"scale_max", config.ranges.scale_max},
                             {"x0_min", config.ranges.x0_min},
                             {"x0_max", config.ranges.x0_max}};
  j["k_hat"] = result.k_hat;
  j["max_train_ratio"] = result.max_train_ratio;
  j["max_holdout_ratio"] = result.max_holdout_ratio;
  j["holdout_violations"] = result.holdout_violations;
  return j;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "index,holdout,T,scale,x0,x0_tilde,y_seminorm,lhs,rhs_without_k,"
        "ratio\n";
  for (const auto& row : result.rows) {
    os << row.index << "," << (row.holdout ? 1 : 0) << ","
       << format_full(row.T) << "," << format_full(row.scale) << ","
       << format_full(row.x0) << "," << format_full(row.x0_tilde) << ","
       << format_full(row.y_seminorm) << "," << format_full(row.lhs) << ","
       << format_full(row.rhs_without_k) << "," << format_full(row.ratio)
       << "\n";
  }
  return os.str();
}

ordered_json crossval_report(const CrossvalConfig& config,
                             const CrossvalResult& result) {
  ordered_json j;
  j["command"] = "crossval";
  j["hursts"] = config.hursts;
  j["pairs"] = config.pairs;
  j["steps"] = config.steps;
  j["seed"] = config.seed;
  j["alpha"] = config.alpha;
  j["include_chain"] = config.include_chain;
  j["max_rel"] = result.max_rel;
  j["frac_within_1e3"] = result.frac_within_1e3;
  bool all_1e2 = true;
  for (const auto& row : result.rows)
    if (!row.chain && row.rel_diff > 1e-2) all_1e2 = false;
  j["all_within_1e2"] = all_1e2;
  return j;
}

std::string crossval_csv(const CrossvalResult& result) {
  std::ostringstream os;
  os << "hurst,pair,chain,rs,zahle,est_rs,est_zahle,rel_diff,chain_rel_rs,"
        "chain_rel_z\n";
  for (const auto& row : result.rows) {
    os << format_full(row.hurst) << "," << row.pair << ","
       << (row.chain ? 1 : 0) << "," << format_full(row.rs) << ","
       << format_full(row.zahle) << "," << format_full(row.est_rs) << ","
       << format_full(row.est_zahle) << "," << format_full(row.rel_diff)
       << "," << format_full(row.chain_rel_rs) << ","
       << format_full(row.chain_rel_z) << "\n";
  }
  return os.str();
}

ordered_json moments_report(const McConfig& config, const McResult& result,
                            bool exp_mode) {
  ordered_json j;
  j["command"] = exp_mode ? "exp-moments" : "moments";
  j["field"] = config.field.name;
  j["hurst"] = config.hurst;
  j["beta"] = config.beta;
  j["steps"] = config.steps;
  j["horizon"] = config.horizon;
  j["n_paths"] = config.n_paths;
  j["seed"] = config.seed;
  j["x0"] = config.x0;
  if (exp_mode) {
    j["gamma"] = config.gamma;
    j["lambda"] = config.lambda;
  } else {
    j["p"] = config.p;
  }
  j["estimate"] = to_json(result.estimate);
  j["divergent"] = result.divergent;
  if (exp_mode) {
    j["tail_slope"] = result.tail_slope;
    j["envelope_ratio_max"] = result.envelope_ratio_max;
    j["seminorm_strided"] = result.seminorm_strided;
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw precondition_error("cannot open for writing: " + path);
  os << content;
}

}  // namespace young
