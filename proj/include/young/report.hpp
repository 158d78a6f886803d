#pragma once

#include <json.hpp>
#include <string>

#include "young/bounds.hpp"
#include "young/experiments.hpp"
#include "young/integrate.hpp"
#include "young/solver.hpp"

namespace young {

using ordered_json = nlohmann::ordered_json;

// JSON / CSV emission with stable field names and deterministic layout:
// ordered keys, shortest-round-trip doubles, no timestamps or host state,
// so identical inputs give byte-identical outputs at any thread count.

ordered_json to_json(const BoundReportd& report);
ordered_json to_json(const MomentEstimate& est);
ordered_json to_json(const IntegralResult<double>& res);

ordered_json sweep_report(const SweepConfig& config, const SweepResult& result);
std::string sweep_csv(const SweepResult& result);

ordered_json crossval_report(const CrossvalConfig& config,
                             const CrossvalResult& result);
std::string crossval_csv(const CrossvalResult& result);

ordered_json moments_report(const McConfig& config, const McResult& result,
                            bool exp_mode);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace young
