#include "bridgelab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>

#include "bridgelab/csv.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/gaussian_law.hpp"
#include "bridgelab/holder.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/parallel.hpp"

namespace bridgelab::commands {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string out_path(const ExperimentConfig& c, const std::string& file) {
    return (fs::path(c.outputs) / file).string();
}

report::ReportSummary start_summary(const std::string& command, const ExperimentConfig& c) {
    validate_config(c);
    report::prepare_output_dir(c.outputs);
    report::ReportSummary s;
    s.command = command;
    s.config_digest = config_digest(c);
    return s;
}

void finish(report::ReportSummary& s, const ExperimentConfig& c, Clock::time_point start) {
    s.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    csv::write_text_file(out_path(c, s.command + "_summary.json"), report::summary_json(s));
}

SamplePath make_path(const ExperimentConfig& c, const DriftSpec& spec, const TransitionTable& table,
                     std::uint64_t i) {
    return c.scheme == Scheme::exact ? exact_path(table, c.seed, i) : euler_path(spec, c.T, c.h, c.seed, i);
}

TransitionTable table_for(const ExperimentConfig& c, const DriftSpec& spec) {
    return c.scheme == Scheme::exact ? build_transition_table(spec, make_grid(c.T, c.h)) : TransitionTable{};
}

double effective_eps(const ExperimentConfig& c) { return c.localtime.eps > 0.0 ? c.localtime.eps : c.h; }

}  // namespace

report::ReportSummary simulate(const ExperimentConfig& c, unsigned threads) {
    const auto start = Clock::now();
    report::ReportSummary s = start_summary("simulate", c);
    for (const DriftSpec& spec : c.drift_variants()) {
        const std::string panel = "simulate_beta" + csv::format_double(spec.beta);
        const TransitionTable table = table_for(c, spec);
        std::vector<double> final_sq(c.n_paths);
        std::vector<char> warned(c.n_paths);
        parallel_for(c.n_paths, threads, [&](std::size_t i) {
            const SamplePath p = make_path(c, spec, table, i);
            csv::emit_csv(report::path_table(p, true), out_path(c, panel + "_path" + std::to_string(i) + ".csv"));
            final_sq[i] = p.values.back() * p.values.back();
            warned[i] = p.stability_warning;
        });
        const double T = make_grid(c.T, c.h).horizon();
        const double var = law::variance(spec, T);
        s.metrics[panel + ".T"] = T;
        s.metrics[panel + ".variance_T"] = var;
        s.metrics[panel + ".mean_final_sq"] =
            std::accumulate(final_sq.begin(), final_sq.end(), 0.0) / static_cast<double>(c.n_paths);
        s.pass_flags[panel + ".euler_stable"] = std::find(warned.begin(), warned.end(), 1) == warned.end();
        if (c.n_paths >= 100) {
            const DecayStats d =
                batch_terminal_stats(spec, {c.T / 4.0, c.T / 2.0, c.T}, c.n_paths, c.scheme, c.h, c.seed, threads);
            csv::emit_csv(report::decay_table(d), out_path(c, panel + "_decay.csv"));
        }
    }
    finish(s, c, start);
    return s;
}

report::ReportSummary law(const ExperimentConfig& c, unsigned) {
    const auto start = Clock::now();
    report::ReportSummary s = start_summary("law", c);
    const std::vector<double> times = c.law.times.empty() ? std::vector<double>{c.T} : c.law.times;

    csv::Table t;
    t.columns = {"t", "alpha", "A", "variance", "conditional_variance"};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double prev = i == 0 ? 0.0 : times[i - 1];
        t.rows.push_back({times[i], eval_alpha(c.drift, times[i]), eval_antiderivative(c.drift, times[i]),
                          law::variance(c.drift, times[i]), law::conditional_variance(c.drift, prev, times[i])});
    }
    csv::emit_csv(t, out_path(c, "law.csv"));

    const law::CovarianceMatrix m = law::build_cov_matrix(c.drift, times);
    csv::Table cov;
    cov.columns = {"u"};
    for (std::size_t j = 0; j < m.size(); ++j) cov.columns.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<double> row{times[i]};
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        cov.rows.push_back(std::move(row));
    }
    csv::emit_csv(cov, out_path(c, "law_covariance.csv"));

    const double lu = m.determinant();
    const law::DetBounds b = law::det_bounds(c.drift, times);
    s.metrics["det_lu"] = lu;
    s.metrics["det_conditioning"] = b.det;
    s.metrics["det_lower"] = b.lower;
    s.metrics["det_upper"] = b.upper;
    s.pass_flags["det_bounds_hold"] = b.holds;
    s.pass_flags["det_identity"] = std::abs(b.det - lu) <= 1e-8 * std::abs(lu);

    const double T = times.back();
    s.metrics["laplace_ratio_kappa2"] = eval_alpha(c.drift, T) > 0.0
                                            ? laplace_asymptotic_ratio(c.drift, 2.0, T)
                                            : std::numeric_limits<double>::quiet_NaN();
    try {
        s.metrics["localtime_second_moment"] =
            law::localtime_second_moment(c.drift, T, c.localtime.eps, c.localtime.eps);
        s.pass_flags["localtime_second_moment_converged"] = true;
    } catch (const NumericError& e) {
        s.metrics["localtime_second_moment"] = e.estimate();
        s.pass_flags["localtime_second_moment_converged"] = false;
    }
    finish(s, c, start);
    return s;
}

report::ReportSummary localtime(const ExperimentConfig& c, unsigned threads) {
    const auto start = Clock::now();
    report::ReportSummary s = start_summary("localtime", c);
    const auto& lt = c.localtime;
    std::vector<double> checkpoints = lt.checkpoints;
    if (checkpoints.empty())
        for (int k = 1; k <= 100; ++k) checkpoints.push_back(c.T * k / 100.0);

    const TransitionTable table = table_for(c, c.drift);
    std::vector<double> final_value(c.n_paths);
    parallel_for(c.n_paths, threads, [&](std::size_t i) {
        const SamplePath p = make_path(c, c.drift, table, i);
        LocalTimeCurve curve;
        switch (lt.estimator) {
            case Estimator::kernel: curve = kernel_estimate(p, lt.x, effective_eps(c), checkpoints); break;
            case Estimator::binned: curve = binned_estimate(p, lt.x, lt.delta, checkpoints); break;
            case Estimator::tanaka: curve = tanaka_estimate(p, c.drift, lt.x, checkpoints); break;
        }
        csv::emit_csv(report::curve_table(curve), out_path(c, "localtime_path" + std::to_string(i) + ".csv"),
                      {report::curve_comment(curve)});
        final_value[i] = curve.values.back();
    });
    const double n = static_cast<double>(c.n_paths);
    const double mean = std::accumulate(final_value.begin(), final_value.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : final_value) ss += (v - mean) * (v - mean);
    s.metrics["mean_local_time"] = mean;
    s.metrics["mean_local_time_stderr"] = c.n_paths > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;

    if (lt.eps_ladder.size() >= 2) {
        const std::vector<double> diffs = cauchy_diagnostic(c.drift, lt.x, c.T, lt.eps_ladder, c.n_paths, c.seed,
                                                            {c.scheme, c.h, threads});
        csv::Table t;
        t.columns = {"eps", "eps_next", "mean_sq_diff"};
        for (std::size_t j = 0; j < diffs.size(); ++j)
            t.rows.push_back({lt.eps_ladder[j], lt.eps_ladder[j + 1], diffs[j]});
        csv::emit_csv(t, out_path(c, "localtime_cauchy.csv"));
        bool shrinking = true;
        for (std::size_t j = 1; j < diffs.size(); ++j) shrinking = shrinking && diffs[j] < diffs[j - 1];
        s.metrics["cauchy_last_mean_sq_diff"] = diffs.back();
        s.pass_flags["cauchy_shrinking"] = shrinking;
    }
    finish(s, c, start);
    return s;
}

report::ReportSummary holder(const ExperimentConfig& c, unsigned threads) {
    const auto start = Clock::now();
    report::ReportSummary s = start_summary("holder", c);

    std::vector<double> scales = c.holder.scales;
    if (scales.empty())
        for (int k = 6; std::ldexp(1.0, -k) >= 4.0 * c.h; ++k)
            if (std::ldexp(1.0, -k) <= c.T) scales.push_back(std::ldexp(1.0, -k));
    if (scales.size() < 3)
        throw ConfigError("holder.scales", "fewer than three dyadic scales fit between 4h and min(T, 2^-6)");

    const double eps = c.localtime.eps > 0.0 ? c.localtime.eps : holder::default_time_modulus_eps(c.h);
    const TransitionTable table = table_for(c, c.drift);
    std::vector<holder::ModulusProfile> profiles(c.n_paths);
    std::vector<double> constants(c.n_paths);
    parallel_for(c.n_paths, threads, [&](std::size_t i) {
        const LocalTimeCurve curve = kernel_estimate_on_grid(make_path(c, c.drift, table, i), c.localtime.x, eps);
        profiles[i] = holder::time_modulus(curve, scales);
        constants[i] = holder::time_modulus_bound_fit(curve, c.T, c.drift);
    });

    holder::ModulusProfile time_profile;
    time_profile.scales = profiles.front().scales;
    time_profile.sup_increments.assign(time_profile.scales.size(), 0.0);
    for (const auto& p : profiles)
        for (std::size_t j = 0; j < p.sup_increments.size(); ++j)
            time_profile.sup_increments[j] += p.sup_increments[j] / static_cast<double>(c.n_paths);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = 0; j < time_profile.scales.size(); ++j)
        pts.emplace_back(time_profile.scales[j], time_profile.sup_increments[j]);
    try {
        const holder::LogLogFit fit = holder::loglog_slope(pts);
        time_profile.fitted_slope = fit.slope;
        time_profile.fitted_intercept = fit.intercept;
        time_profile.fit_ok = true;
        time_profile.dropped_zeros = fit.dropped_zeros;
    } catch (const InsufficientDataError&) {
        time_profile.fitted_slope = time_profile.fitted_intercept = std::numeric_limits<double>::quiet_NaN();
    }
    csv::emit_csv(report::modulus_table(time_profile), out_path(c, "holder_time.csv"));
    csv::write_text_file(out_path(c, "holder_time.json"), report::modulus_json(time_profile, 0.4, 0.6));

    holder::SpaceSweepParams params;
    params.scheme = c.scheme;
    params.h = c.h;
    params.eps = c.localtime.eps;
    params.seed = c.seed;
    params.threads = threads;
    const LevelGrid levels{-c.holder.R, 2.0 * c.holder.R / static_cast<double>(c.holder.levels - 1),
                           c.holder.levels};
    const holder::ModulusProfile space = holder::space_modulus(c.drift, c.T, levels, params, c.n_paths);
    csv::emit_csv(report::modulus_table(space), out_path(c, "holder_space.csv"));
    csv::write_text_file(out_path(c, "holder_space.json"), report::modulus_json(space, 0.35, 0.6));

    s.metrics["time_slope"] = time_profile.fitted_slope;
    s.metrics["time_bound_constant"] =
        std::accumulate(constants.begin(), constants.end(), 0.0) / static_cast<double>(c.n_paths);
    s.metrics["space_slope"] = space.fitted_slope;
    s.pass_flags["time_fit_ok"] = time_profile.fit_ok;
    s.pass_flags["space_fit_ok"] = space.fit_ok;
    finish(s, c, start);
    return s;
}

}  // namespace bridgelab::commands
