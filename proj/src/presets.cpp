#include "bridgelab/presets.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "bridgelab/csv.hpp"
#include "bridgelab/gaussian_law.hpp"
#include "bridgelab/parallel.hpp"

namespace bridgelab {

std::string to_string(FigurePreset preset) {
    return preset == FigurePreset::figure1 ? "figure1" : "figure2";
}

FigurePreset figure_preset_from_string(const std::string& name) {
    if (name == "figure1") return FigurePreset::figure1;
    if (name == "figure2") return FigurePreset::figure2;
    throw std::invalid_argument("unknown figure preset '" + name + "'");
}

ExperimentConfig figure_config(FigurePreset preset, std::uint64_t seed, const std::string& outputs) {
    ExperimentConfig c;
    if (preset == FigurePreset::figure1) {
        c.drift = DriftSpec::power(0.8);
        c.beta_sweep = {0.8, 2.0};
        c.T = 10.0;
        c.h = 0.01;
    } else {
        c.drift = DriftSpec::exponential(0.5);
        c.beta_sweep = {0.5, 1.5};
        c.T = 3.0;
        c.h = 0.005;
    }
    c.scheme = Scheme::euler;
    c.n_paths = 1;
    c.seed = seed;
    c.outputs = outputs;
    return c;
}

std::string figure_csv_name(FigurePreset preset, double beta) {
    return to_string(preset) + "_beta" + csv::format_double(beta) + ".csv";
}

namespace {

std::string panel_name(const std::string& name, double beta) {
    return name + "_beta" + csv::format_double(beta);
}

}  // namespace

report::ReportSummary run_figures_config(const ExperimentConfig& config, const std::string& name,
                                         unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    validate_config(config);
    report::prepare_output_dir(config.outputs);

    const std::vector<DriftSpec> panels = config.drift_variants();
    std::vector<SamplePath> paths(panels.size());
    parallel_for(panels.size(), threads, [&](std::size_t i) {
        paths[i] = simulate_path(panels[i], config.scheme, config.T, config.h, config.seed, i);
    });

    report::ReportSummary summary;
    summary.command = name;
    summary.config_digest = config_digest(config);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const std::string panel = panel_name(name, panels[i].beta);
        const SamplePath& path = paths[i];
        csv::emit_csv(report::path_table(path, false),
                      (std::filesystem::path(config.outputs) / (panel + ".csv")).string(),
                      {to_string(panels[i].family) + " beta=" + csv::format_double(panels[i].beta) +
                       " h=" + csv::format_double(config.h) + " seed=" + std::to_string(config.seed) +
                       " path=" + std::to_string(i)});
        const double T = path.horizon();
        const double three_sigma = 3.0 * std::sqrt(law::variance(panels[i], T));
        const double final_abs = std::abs(path.values.back());
        summary.metrics[panel + ".T"] = T;
        summary.metrics[panel + ".final_abs_x"] = final_abs;
        summary.metrics[panel + ".three_sigma"] = three_sigma;
        summary.pass_flags[panel + ".final_within_3sigma"] = final_abs < three_sigma;
        summary.pass_flags[panel + ".euler_stable"] = !path.stability_warning;
    }
    summary.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    csv::write_text_file((std::filesystem::path(config.outputs) / (name + "_summary.json")).string(),
                         report::summary_json(summary));
    return summary;
}

report::ReportSummary run_figures_preset(FigurePreset preset, std::uint64_t seed,
                                         const std::string& outputs, unsigned threads) {
    return run_figures_config(figure_config(preset, seed, outputs), to_string(preset), threads);
}

}  // namespace bridgelab
