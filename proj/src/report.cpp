#include "bridgelab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace bridgelab::report {

namespace {

nlohmann::ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

bool ReportSummary::all_pass() const {
    for (const auto& [name, ok] : pass_flags)
        if (!ok) return false;
    return true;
}

std::string summary_json(const ReportSummary& s, bool with_wall_time) {
    nlohmann::ordered_json j;
    j["command"] = s.command;
    j["config_digest"] = s.config_digest;
    auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : s.metrics) metrics[name] = number(v);
    auto& flags = j["pass_flags"] = nlohmann::ordered_json::object();
    for (const auto& [name, ok] : s.pass_flags) flags[name] = ok;
    j["all_pass"] = s.all_pass();
    if (with_wall_time) j["wall_time"] = s.wall_time;
    return j.dump(2) + "\n";
}

void prepare_output_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir + ": cannot create output directory: " + ec.message());
    const std::filesystem::path probe = std::filesystem::path(dir) / ".bridgelab_write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw std::runtime_error(dir + ": output directory is not writable");
    }
    std::filesystem::remove(probe, ec);
}

csv::Table path_table(const SamplePath& path, bool with_increments) {
    csv::Table t;
    t.columns = {"t", "x"};
    const bool dw = with_increments && !path.brownian_increments.empty();
    if (dw) t.columns.push_back("dw");
    t.rows.reserve(path.values.size());
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        std::vector<double> row{path.times[k], path.values[k]};
        if (dw) row.push_back(k == 0 ? 0.0 : path.brownian_increments[k - 1]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

csv::Table decay_table(const DecayStats& s) {
    csv::Table t;
    t.columns = {"T", "mean_abs", "mean_sq", "stderr_abs", "stderr_sq"};
    for (std::size_t i = 0; i < s.horizons.size(); ++i)
        t.rows.push_back({s.horizons[i], s.mean_abs[i], s.mean_sq[i], s.std_err_abs[i], s.std_err_sq[i]});
    return t;
}

csv::Table curve_table(const LocalTimeCurve& curve) {
    csv::Table t;
    t.columns = {"t", "L"};
    for (std::size_t i = 0; i < curve.values.size(); ++i)
        t.rows.push_back({curve.checkpoints[i], curve.values[i]});
    return t;
}

std::string curve_comment(const LocalTimeCurve& curve) {
    std::string out = "level=" + csv::format_double(curve.level) +
                      " estimator=" + to_string(curve.estimator);
    if (curve.smoothing) out += " smoothing=" + csv::format_double(*curve.smoothing);
    out += " seed=" + std::to_string(curve.source_seed);
    return out;
}

csv::Table modulus_table(const holder::ModulusProfile& p) {
    csv::Table t;
    t.columns = {"scale", "sup_increment"};
    for (std::size_t i = 0; i < p.scales.size(); ++i) t.rows.push_back({p.scales[i], p.sup_increments[i]});
    return t;
}

std::string modulus_json(const holder::ModulusProfile& p, double band_lo, double band_hi) {
    nlohmann::ordered_json j;
    j["slope"] = number(p.fitted_slope);
    j["intercept"] = number(p.fitted_intercept);
    j["band"] = {band_lo, band_hi};
    j["fit_ok"] = p.fit_ok;
    j["dropped_zeros"] = p.dropped_zeros;
    return j.dump(2) + "\n";
}

}  // namespace bridgelab::report
