#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bridgelab/config.hpp"
#include "bridgelab/report.hpp"

namespace bridgelab::verify {

inline constexpr int kCriterionCount = 12;

struct CheckResult;

struct VerifyOptions {
    /// Multiplies the reference variance of criterion 1 (sensitivity hook).
    double variance_scale = 1.0;
    unsigned threads = 0;
    /// Criteria to run, 1-based; empty runs all.
    std::vector<int> only;
    /// Called after each check, in criterion order.
    std::function<void(const CheckResult&)> on_result;
};

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::map<std::string, double> metrics;
    std::map<std::string, bool> flags;
    std::string detail;
};

/// Short flag name of criterion k, e.g. "law_agreement" for k = 1.
std::string criterion_name(int k);

/// Runs one acceptance check at its stated scale. `seed` keys every random
/// draw; `scratch_dir` receives the preset files of criterion 12.
CheckResult run_criterion(int k, std::uint64_t seed, const std::string& scratch_dir,
                          const VerifyOptions& options = {});

/// Runs the selected checks, writes verify_summary.json into config.outputs
/// and returns the summary; all_pass() is the suite verdict.
report::ReportSummary run_verify_suite(const ExperimentConfig& config,
                                       const VerifyOptions& options = {});

/// Configuration used by `verify` when no file is given.
ExperimentConfig default_verify_config(const std::string& outputs);

}  // namespace bridgelab::verify
