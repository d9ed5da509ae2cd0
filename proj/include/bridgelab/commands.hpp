#pragma once

#include "bridgelab/config.hpp"
#include "bridgelab/report.hpp"

// One function per CLI subcommand. Each writes its CSVs and
// `<command>_summary.json` into config.outputs; results depend on the config
// only, never on `threads`.
namespace bridgelab::commands {

/// Per drift variant and path i < n_paths: `simulate_beta<b>_path<i>.csv`
/// (t,x[,dw]). With n_paths >= 100 also `simulate_beta<b>_decay.csv` at
/// T/4, T/2, T.
report::ReportSummary simulate(const ExperimentConfig& config, unsigned threads);

/// `law.csv` (t, alpha, A, variance) on law.times (default {T}),
/// `law_covariance.csv`, and determinant / bound metrics.
report::ReportSummary law(const ExperimentConfig& config, unsigned threads);

/// `localtime_path<i>.csv` (t,L) per path at localtime.checkpoints (default
/// 100 equal steps up to T), plus `localtime_cauchy.csv` when an eps ladder is
/// given.
report::ReportSummary localtime(const ExperimentConfig& config, unsigned threads);

/// Path-averaged time modulus (`holder_time.csv/json`) and space modulus over
/// [-R, R] (`holder_space.csv/json`).
report::ReportSummary holder(const ExperimentConfig& config, unsigned threads);

}  // namespace bridgelab::commands
