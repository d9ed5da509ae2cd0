#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bridgelab/config.hpp"
#include "bridgelab/report.hpp"

namespace bridgelab {

enum class FigurePreset { figure1, figure2 };

std::string to_string(FigurePreset preset);
FigurePreset figure_preset_from_string(const std::string& name);

/// figure1: power drifts beta in {0.8, 2}, h = 0.01, T = 10.
/// figure2: exponential drifts beta in {0.5, 1.5}, h = 0.005, T = 3.
/// Euler scheme, X_0 = 0, one path per beta.
ExperimentConfig figure_config(FigurePreset preset, std::uint64_t seed, const std::string& outputs);

/// File name of the path CSV for one panel, e.g. "figure1_beta0.8.csv".
std::string figure_csv_name(FigurePreset preset, double beta);

/// Simulates every panel, writes one `t,x` CSV per beta and
/// `<preset>_summary.json`. Panel i uses path index i of `seed`, so the
/// files do not depend on `threads`.
report::ReportSummary run_figures_preset(FigurePreset preset, std::uint64_t seed,
                                         const std::string& outputs, unsigned threads = 0);

/// Shared body of the preset and of `simulate` with a beta sweep.
report::ReportSummary run_figures_config(const ExperimentConfig& config, const std::string& name,
                                         unsigned threads = 0);

}  // namespace bridgelab
