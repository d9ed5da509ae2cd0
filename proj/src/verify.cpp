#include "bridgelab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "bridgelab/csv.hpp"
#include "bridgelab/gaussian_law.hpp"
#include "bridgelab/holder.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/parallel.hpp"
#include "bridgelab/presets.hpp"
#include "bridgelab/rng.hpp"
#include "bridgelab/simulate.hpp"

namespace bridgelab::verify {

namespace {

namespace fs = std::filesystem;

struct Moments {
    double mean = 0.0;
    double std_err = 0.0;
};

Moments mean_and_error(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

/// 1000 sorted grids with p in {2..6} and times uniform in (0, 3].
std::vector<std::vector<double>> random_grids(std::uint64_t seed, std::size_t count) {
    const rng::UniformStream u(seed, 3);
    std::uint64_t draw = 0;
    std::vector<std::vector<double>> grids;
    grids.reserve(count);
    while (grids.size() < count) {
        const std::size_t p = 2 + std::min<std::size_t>(4, static_cast<std::size_t>(u(draw++) * 5.0));
        std::vector<double> times(p);
        for (double& t : times) t = 3.0 * u(draw++);
        std::sort(times.begin(), times.end());
        if (std::adjacent_find(times.begin(), times.end()) != times.end()) continue;
        grids.push_back(std::move(times));
    }
    return grids;
}

CheckResult law_agreement(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(2.0);
    const std::size_t n = 20000;
    const TransitionTable table = build_transition_table(spec, make_grid(5.0, 0.05));
    const double T = table.grid.horizon();
    std::vector<double> x(n);
    parallel_for(n, opt.threads, [&](std::size_t i) { x[i] = exact_path(table, seed, i).values.back(); });

    const double nn = static_cast<double>(n);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
    double m2 = 0.0, m4 = 0.0;
    std::vector<double> fourth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        m2 += d * d;
        m4 += d * d * d * d;
        fourth[i] = x[i] * x[i] * x[i] * x[i];
    }
    const double sample_var = m2 / (nn - 1.0);
    const double var_se = std::sqrt(std::max(0.0, m4 / nn - (m2 / nn) * (m2 / nn)) / nn);
    const Moments f = mean_and_error(fourth);

    const double ref_var = law::variance(spec, T) * opt.variance_scale;
    const double ref4 = law::abs_moment(ref_var, 4);
    const double z_var = (sample_var - ref_var) / var_se;
    const double z4 = (f.mean - ref4) / f.std_err;
    r.metrics = {{"law_sample_var", sample_var},   {"law_reference_var", ref_var},
                 {"law_var_z", z_var},             {"law_sample_m4", f.mean},
                 {"law_reference_m4", ref4},       {"law_m4_z", z4}};
    r.flags = {{"law_variance", std::abs(z_var) <= 3.0}, {"law_fourth_moment", std::abs(z4) <= 3.0}};
    return r;
}

CheckResult laplace(const VerifyOptions&) {
    CheckResult r;
    const double a = laplace_asymptotic_ratio(DriftSpec::power(2.0), 2.0, 10.0);
    const double b = laplace_asymptotic_ratio(DriftSpec::power(1.0), 1.0, 20.0);
    r.metrics = {{"laplace_ratio_beta2_t10", a}, {"laplace_ratio_beta1_t20", b}};
    r.flags = {{"laplace_beta2_t10", std::abs(2.0 * a - 1.0) < 0.05},
               {"laplace_beta1_t20", std::abs(1.0 * b - 1.0) < 0.05}};
    return r;
}

CheckResult determinant_identity(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(1.0);
    const auto grids = random_grids(seed, 1000);
    std::vector<double> err(grids.size());
    parallel_for(grids.size(), opt.threads, [&](std::size_t g) {
        const double lu = law::build_cov_matrix(spec, grids[g]).determinant();
        const double cond = law::det_by_conditioning(spec, grids[g]);
        err[g] = std::abs(cond - lu) / std::abs(lu);
    });
    const double worst = *std::max_element(err.begin(), err.end());
    const auto bad = std::count_if(err.begin(), err.end(), [](double e) { return !(e < 1e-8); });
    r.metrics = {{"det_identity_max_rel_err", worst}, {"det_identity_failures", double(bad)}};
    r.flags = {{"det_identity", bad == 0}};
    return r;
}

CheckResult determinant_bounds(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(1.0);
    const DriftSpec bm = DriftSpec::brownian();
    const auto grids = random_grids(seed, 1000);
    std::vector<int> violation(grids.size()), bm_violation(grids.size());
    std::vector<double> bm_gap(grids.size());
    parallel_for(grids.size(), opt.threads, [&](std::size_t g) {
        violation[g] = !law::det_bounds(spec, grids[g]).holds;
        const law::DetBounds b = law::det_bounds(bm, grids[g]);
        const double lu = law::build_cov_matrix(bm, grids[g]).determinant();
        bm_gap[g] = std::max(std::abs(b.det - b.upper), std::abs(lu - b.upper));
        bm_violation[g] = !(bm_gap[g] <= 1e-12);
    });
    const int v = std::accumulate(violation.begin(), violation.end(), 0);
    const int vb = std::accumulate(bm_violation.begin(), bm_violation.end(), 0);
    r.metrics = {{"det_bounds_violations", double(v)},
                 {"det_bounds_bm_max_gap", *std::max_element(bm_gap.begin(), bm_gap.end())}};
    r.flags = {{"det_bounds", v == 0}, {"det_bounds_bm_equality", vb == 0}};
    return r;
}

CheckResult conditional_variance_sandwich(std::uint64_t seed, const VerifyOptions&) {
    CheckResult r;
    int violations = 0;
    double tightest = INFINITY;
    for (double beta : {1.0, 2.0}) {
        const DriftSpec spec = DriftSpec::power(beta);
        const rng::UniformStream u(seed, 5 + static_cast<std::uint64_t>(beta));
        std::uint64_t draw = 0;
        for (int i = 0; i < 1000;) {
            double s = 3.0 * u(draw++), t = 3.0 * u(draw++);
            if (s == t) continue;
            if (s > t) std::swap(s, t);
            ++i;
            const double gap = t - s;
            const double cv = law::conditional_variance(spec, s, t);
            const double lower = gap * std::exp(-2.0 * running_sup(spec, t) * gap);
            const double slack = 1e-12 * gap;
            if (!(cv >= lower - slack && cv <= gap + slack)) ++violations;
            tightest = std::min({tightest, (cv - lower) / gap, (gap - cv) / gap});
        }
    }
    r.metrics = {{"cv_sandwich_violations", double(violations)}, {"cv_sandwich_min_margin", tightest}};
    r.flags = {{"cv_sandwich", violations == 0}};
    return r;
}

CheckResult second_moment(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec bm = DriftSpec::brownian();
    const double quad = law::localtime_second_moment(bm, 1.0, 0.0, 0.0);
    const std::size_t n = 5000;
    const double eps = 1e-4, h = 1e-4;
    std::vector<double> sq(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        const double L = kernel_estimate(euler_path(bm, 1.0, h, seed, i), 0.0, eps, {1.0}).values[0];
        sq[i] = L * L;
    });
    const Moments m = mean_and_error(sq);
    r.metrics = {{"lt_second_moment_quadrature", quad},
                 {"lt_second_moment_mc", m.mean},
                 {"lt_second_moment_mc_stderr", m.std_err}};
    r.flags = {{"lt_second_moment_quadrature", std::abs(quad - 1.0) <= 1e-4},
               {"lt_second_moment_mc", std::abs(m.mean - 1.0) <= 0.1}};
    return r;
}

CheckResult estimator_consistency(std::uint64_t seed, const VerifyOptions&) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(0.8);
    bool ok = false;
    int attempt = 0;
    for (; attempt < 5 && !ok; ++attempt) {
        const SamplePath p = euler_path(spec, 1.0, 1e-4, seed, static_cast<std::uint64_t>(attempt));
        const double k = kernel_estimate(p, 0.0, 1e-3, {1.0}).values[0];
        const double b = binned_estimate(p, 0.0, 0.05, {1.0}).values[0];
        const double t = tanaka_estimate(p, spec, 0.0, {1.0}).values[0];
        const double common = (k + b + t) / 3.0;
        const auto rel = [](double u, double v) { return std::abs(u - v) / std::max(std::abs(u), std::abs(v)); };
        const double worst = std::max({rel(k, b), rel(k, t), rel(b, t)});
        const std::string tag = "consistency_attempt" + std::to_string(attempt) + ".";
        r.metrics[tag + "kernel"] = k;
        r.metrics[tag + "binned"] = b;
        r.metrics[tag + "tanaka"] = t;
        r.metrics[tag + "max_pairwise_rel"] = worst;
        if (common >= 0.1) {
            ok = worst <= 0.1;
            break;
        }
    }
    r.metrics["consistency_attempts"] = std::min(attempt + 1, 5);
    r.flags = {{"estimator_consistency", ok}};
    return r;
}

CheckResult bridge_decay(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(2.0);
    const DecayStats s = batch_terminal_stats(spec, {2.0, 4.0, 8.0}, 1000, Scheme::exact, 0.01, seed, opt.threads);
    const bool decreasing = s.mean_sq[0] > s.mean_sq[1] && s.mean_sq[1] > s.mean_sq[2];
    const double ratio8 = s.mean_sq[2] * 2.0 * eval_alpha(spec, s.horizons[2]);

    const DecayStats c = batch_terminal_stats(DriftSpec::constant(1.0), {5.0, 50.0}, 1000, Scheme::exact,
                                              0.01, seed + 1, opt.threads);
    const double control = c.mean_sq[1] / c.mean_sq[0];
    for (std::size_t i = 0; i < 3; ++i)
        r.metrics["decay_mean_sq_T" + csv::format_double(s.horizons[i])] = s.mean_sq[i];
    r.metrics["decay_T8_over_half_inverse_alpha"] = ratio8;
    r.metrics["decay_control_ratio"] = control;
    r.flags = {{"decay_monotone", decreasing},
               {"decay_rate_T8", ratio8 >= 0.5 && ratio8 <= 1.5},
               {"decay_negative_control", control >= 0.8 && control <= 1.25}};
    return r;
}

CheckResult localtime_growth(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    std::vector<int> horizons(19);
    std::iota(horizons.begin(), horizons.end(), 2);
    const GrowthProbe g = growth_probe(DriftSpec::power(3.0), 0.0, horizons, 1e-3, 200, seed, Scheme::exact,
                                       0.0, opt.threads);
    r.metrics = {{"lt_growth_exponent", g.fitted_exponent},
                 {"lt_growth_conjectured_exponent", g.conjectured_exponent},
                 {"lt_growth_mean_T2", g.mean_local_time.front()},
                 {"lt_growth_mean_T20", g.mean_local_time.back()}};
    r.flags = {{"lt_growth_increasing", g.strictly_increasing}, {"lt_growth_exponent", g.fitted_exponent > 0.3}};
    return r;
}

double mean_bound_constant(const DriftSpec& spec, double T, double h, std::size_t n, std::uint64_t seed,
                           unsigned threads) {
    std::vector<double> c(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const LocalTimeCurve curve = kernel_estimate_on_grid(euler_path(spec, T, h, seed, i), 0.0, holder::default_time_modulus_eps(h));
        c[i] = holder::time_modulus_bound_fit(curve, T, spec);
    });
    return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(n);
}

CheckResult holder_time(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    const DriftSpec spec = DriftSpec::power(0.8);
    const double h = std::ldexp(1.0, -16);
    const std::vector<double> scales = holder::dyadic_scales(6, 14);
    const std::size_t n = 16;
    std::vector<double> slopes(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        const LocalTimeCurve curve = kernel_estimate_on_grid(euler_path(spec, 1.0, h, seed, i), 0.0, holder::default_time_modulus_eps(h));
        slopes[i] = holder::time_modulus(curve, scales).fitted_slope;
    });
    const double slope = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(n);

    const auto stability = [&](const DriftSpec& d, const std::string& tag) {
        const double c2 = mean_bound_constant(d, 2.0, h, 8, seed + 1, opt.threads);
        const double c8 = mean_bound_constant(d, 8.0, h, 8, seed + 1, opt.threads);
        r.metrics["holder_time_C_T2" + tag] = c2;
        r.metrics["holder_time_C_T8" + tag] = c8;
        const double ratio = std::max(c2, c8) / std::min(c2, c8);
        r.metrics["holder_time_C_ratio" + tag] = ratio;
        return ratio;
    };
    const double ratio = stability(spec, "");
    stability(DriftSpec::power(2.0), "_beta2");

    r.metrics["holder_time_slope"] = slope;
    r.flags = {{"holder_time_slope", slope >= 0.4 && slope <= 0.6}, {"holder_time_C_stable", ratio <= 2.0}};
    return r;
}

CheckResult holder_space(std::uint64_t seed, const VerifyOptions& opt) {
    CheckResult r;
    holder::SpaceSweepParams params;
    params.scheme = Scheme::euler;
    params.h = std::ldexp(1.0, -16);
    params.seed = seed;
    params.threads = opt.threads;
    const LevelGrid levels{-1.0, 1.0 / 128.0, 257};
    const double bridge = holder::space_modulus(DriftSpec::power(0.8), 1.0, levels, params, 16).fitted_slope;
    const double bm = holder::space_modulus(DriftSpec::brownian(), 1.0, levels, params, 16).fitted_slope;
    r.metrics = {{"holder_space_slope_bridge", bridge}, {"holder_space_slope_bm", bm}};
    r.flags = {{"holder_space_bridge", bridge >= 0.35 && bridge <= 0.6},
               {"holder_space_bm", bm >= 0.35 && bm <= 0.6}};
    return r;
}

CheckResult figures_reproduction(std::uint64_t seed, const std::string& scratch, const VerifyOptions&) {
    CheckResult r;
    bool params_ok = true, bytes_ok = true, sigma_ok = true;
    for (FigurePreset preset : {FigurePreset::figure1, FigurePreset::figure2}) {
        const std::string a = (fs::path(scratch) / "threads1").string();
        const std::string b = (fs::path(scratch) / "threads_all").string();
        const report::ReportSummary sa = run_figures_preset(preset, seed, a, 1);
        run_figures_preset(preset, seed, b, 0);
        for (const auto& [name, ok] : sa.pass_flags) sigma_ok = sigma_ok && ok;
        for (const auto& [name, v] : sa.metrics) r.metrics["figures." + name] = v;

        const ExperimentConfig cfg = figure_config(preset, seed, a);
        const std::vector<double> expected_betas = preset == FigurePreset::figure1
                                                       ? std::vector<double>{0.8, 2.0}
                                                       : std::vector<double>{0.5, 1.5};
        const double expected_h = preset == FigurePreset::figure1 ? 0.01 : 0.005;
        params_ok = params_ok && cfg.h == expected_h;
        for (double beta : expected_betas) {
            const std::string file = figure_csv_name(preset, beta);
            const std::string text_a = csv::read_text_file((fs::path(a) / file).string());
            const std::string text_b = csv::read_text_file((fs::path(b) / file).string());
            bytes_ok = bytes_ok && text_a == text_b;
            const csv::Table t = csv::from_text(text_a);
            params_ok = params_ok && t.columns == std::vector<std::string>{"t", "x"} && !t.rows.empty() &&
                        t.rows[0][0] == 0.0 && t.rows[0][1] == 0.0;
            for (std::size_t k = 1; k < t.rows.size(); ++k)
                params_ok = params_ok && std::abs(t.rows[k][0] - t.rows[k - 1][0] - expected_h) <= 1e-9;
        }
    }
    r.flags = {{"figures_parameters", params_ok},
               {"figures_byte_identical", bytes_ok},
               {"figures_final_within_3sigma", sigma_ok}};
    return r;
}

std::uint64_t criterion_seed(std::uint64_t seed, int k) {
    return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k));
}

}  // namespace

std::string criterion_name(int k) {
    static const char* names[kCriterionCount] = {
        "law_agreement",         "laplace_asymptotic",  "determinant_identity",
        "determinant_bounds",    "conditional_variance_sandwich", "localtime_second_moment",
        "estimator_consistency", "bridge_decay",        "localtime_growth",
        "holder_time",           "holder_space",        "figures_reproduction"};
    if (k < 1 || k > kCriterionCount) throw std::out_of_range("no acceptance criterion " + std::to_string(k));
    return names[k - 1];
}

CheckResult run_criterion(int k, std::uint64_t seed, const std::string& scratch_dir, const VerifyOptions& opt) {
    const std::uint64_t s = criterion_seed(seed, k);
    CheckResult r;
    switch (k) {
        case 1: r = law_agreement(s, opt); break;
        case 2: r = laplace(opt); break;
        case 3: r = determinant_identity(s, opt); break;
        case 4: r = determinant_bounds(criterion_seed(seed, 3), opt); break;
        case 5: r = conditional_variance_sandwich(s, opt); break;
        case 6: r = second_moment(s, opt); break;
        case 7: r = estimator_consistency(s, opt); break;
        case 8: r = bridge_decay(s, opt); break;
        case 9: r = localtime_growth(s, opt); break;
        case 10: r = holder_time(s, opt); break;
        case 11: r = holder_space(s, opt); break;
        case 12: r = figures_reproduction(seed, scratch_dir, opt); break;
        default: throw std::out_of_range("no acceptance criterion " + std::to_string(k));
    }
    r.criterion = k;
    r.name = criterion_name(k);
    r.pass = !r.flags.empty() &&
             std::all_of(r.flags.begin(), r.flags.end(), [](const auto& f) { return f.second; });
    return r;
}

report::ReportSummary run_verify_suite(const ExperimentConfig& config, const VerifyOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    report::prepare_output_dir(config.outputs);
    const std::string scratch = (fs::path(config.outputs) / "verify_figures").string();

    std::vector<int> selected = opt.only;
    if (selected.empty()) {
        selected.resize(kCriterionCount);
        std::iota(selected.begin(), selected.end(), 1);
    }
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

    report::ReportSummary summary;
    summary.command = "verify";
    summary.config_digest = config_digest(config);
    for (int k : selected) {
        const CheckResult r = run_criterion(k, config.seed, scratch, opt);
        summary.metrics.insert(r.metrics.begin(), r.metrics.end());
        summary.pass_flags.insert(r.flags.begin(), r.flags.end());
        summary.pass_flags[r.name] = r.pass;
        if (opt.on_result) opt.on_result(r);
    }
    summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    csv::write_text_file((fs::path(config.outputs) / "verify_summary.json").string(),
                         report::summary_json(summary));
    return summary;
}

ExperimentConfig default_verify_config(const std::string& outputs) {
    ExperimentConfig c;
    c.drift = DriftSpec::power(2.0);
    c.scheme = Scheme::exact;
    c.T = 5.0;
    c.h = 0.05;
    c.n_paths = 20000;
    c.seed = 0;
    c.outputs = outputs;
    return c;
}

}  // namespace bridgelab::verify
