#pragma once

#include <map>
#include <string>
#include <vector>

#include "bridgelab/csv.hpp"
#include "bridgelab/holder.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/simulate.hpp"

namespace bridgelab::report {

struct ReportSummary {
    std::string command;
    std::string config_digest;
    std::map<std::string, double> metrics;
    std::map<std::string, bool> pass_flags;
    double wall_time = 0.0;

    bool all_pass() const;
};

/// JSON object with keys command, config_digest, metrics, pass_flags and,
/// when requested, wall_time. Non-finite metrics are written as null.
std::string summary_json(const ReportSummary& summary, bool with_wall_time = true);

/// Creates `dir` (and parents) and checks that a file can be created in it.
/// Throws std::runtime_error naming the directory otherwise.
void prepare_output_dir(const std::string& dir);

/// `t,x` or `t,x,dw`; row k of dw holds W_{t_k} - W_{t_{k-1}}, row 0 holds 0.
csv::Table path_table(const SamplePath& path, bool with_increments);

/// `T,mean_abs,mean_sq,stderr_abs,stderr_sq`.
csv::Table decay_table(const DecayStats& stats);

/// `t,L` with one comment line describing level, estimator, smoothing and seed.
csv::Table curve_table(const LocalTimeCurve& curve);
std::string curve_comment(const LocalTimeCurve& curve);

/// `scale,sup_increment`.
csv::Table modulus_table(const holder::ModulusProfile& profile);

/// {"slope", "intercept", "band": [lo, hi], "fit_ok", "dropped_zeros"}.
std::string modulus_json(const holder::ModulusProfile& profile, double band_lo, double band_hi);

}  // namespace bridgelab::report
