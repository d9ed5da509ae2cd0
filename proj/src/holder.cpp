#include "bridgelab/holder.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "bridgelab/errors.hpp"
#include "bridgelab/parallel.hpp"
#include "bridgelab/regression.hpp"

namespace bridgelab::holder {

LogLogFit loglog_slope(std::span<const std::pair<double, double>> points) {
    std::vector<double> lx, ly;
    LogLogFit fit;
    for (const auto& [scale, value] : points) {
        if (!(scale > 0.0) || value < 0.0) {
            throw DomainError("log-log fit needs positive scales and nonnegative values");
        }
        if (value == 0.0) {
            fit.dropped_zeros = true;
            continue;
        }
        lx.push_back(std::log(scale));
        ly.push_back(std::log(value));
    }
    if (lx.size() < 3) {
        throw InsufficientDataError("log-log fit needs at least three positive points, got " +
                                    std::to_string(lx.size()));
    }
    const LineFit line = least_squares_line(lx, ly);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.used = lx.size();
    return fit;
}

double window_oscillation(std::span<const double> values, std::size_t lag) {
    if (values.size() < 2 || lag == 0) return 0.0;
    const std::size_t width = lag + 1;
    std::deque<std::size_t> maxq, minq;
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        while (!maxq.empty() && values[maxq.back()] <= values[i]) maxq.pop_back();
        while (!minq.empty() && values[minq.back()] >= values[i]) minq.pop_back();
        maxq.push_back(i);
        minq.push_back(i);
        if (maxq.front() + width <= i) maxq.pop_front();
        if (minq.front() + width <= i) minq.pop_front();
        best = std::max(best, values[maxq.front()] - values[minq.front()]);
    }
    return best;
}

namespace {

void fit_profile(ModulusProfile& profile) {
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < profile.scales.size(); ++i) {
        points.emplace_back(profile.scales[i], profile.sup_increments[i]);
    }
    try {
        const LogLogFit fit = loglog_slope(points);
        profile.fitted_slope = fit.slope;
        profile.fitted_intercept = fit.intercept;
        profile.dropped_zeros = fit.dropped_zeros;
        profile.fit_ok = true;
    } catch (const InsufficientDataError&) {
        profile.fitted_slope = std::numeric_limits<double>::quiet_NaN();
        profile.fitted_intercept = std::numeric_limits<double>::quiet_NaN();
        profile.dropped_zeros = true;
        profile.fit_ok = false;
    }
}

double uniform_spacing(const std::vector<double>& grid) {
    if (grid.size() < 2) throw DomainError("curve needs at least two checkpoints");
    const double spacing = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    if (!(spacing > 0.0)) throw DomainError("checkpoints must be increasing");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(grid[i] - grid[i - 1] - spacing) > 1e-6 * spacing) {
            throw DomainError("checkpoints must be uniformly spaced");
        }
    }
    return spacing;
}

std::size_t lag_for(double scale, double spacing) {
    if (scale < spacing * (1.0 - 1e-9)) {
        throw DomainError("scale " + std::to_string(scale) + " is below the grid resolution " +
                          std::to_string(spacing));
    }
    return static_cast<std::size_t>(std::floor(scale / spacing + 1e-9));
}

void require_decreasing(const std::vector<double>& scales) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw DomainError("scales must be positive");
        if (i > 0 && !(scales[i] < scales[i - 1])) {
            throw DomainError("scales must be strictly decreasing");
        }
    }
}

}  // namespace

std::vector<double> dyadic_scales(int coarse_exponent, int fine_exponent) {
    std::vector<double> out;
    for (int e = coarse_exponent; e <= fine_exponent; ++e) out.push_back(std::ldexp(1.0, -e));
    return out;
}

ModulusProfile time_modulus(const LocalTimeCurve& curve, const std::vector<double>& scales) {
    require_decreasing(scales);
    const double spacing = uniform_spacing(curve.checkpoints);
    ModulusProfile profile;
    profile.scales = scales;
    for (double eta : scales) {
        profile.sup_increments.push_back(window_oscillation(curve.values, lag_for(eta, spacing)));
    }
    fit_profile(profile);
    return profile;
}

double time_modulus_bound_fit(const LocalTimeCurve& curve, double T, const DriftSpec& spec) {
    if (!(T > 0.0)) throw DomainError("T must be > 0");
    const double spacing = uniform_spacing(curve.checkpoints);
    std::size_t last = curve.values.size() - 1;
    while (last > 0 && curve.checkpoints[last] > T + 1e-9 * spacing) --last;

    const double hold = std::sqrt((T + 1.0) * running_sup(spec, T + 1.0));
    double fitted = 0.0;
    for (std::size_t lag = 1; static_cast<double>(lag) * spacing < 1.0 && lag <= last; lag *= 2) {
        const double eta = static_cast<double>(lag) * spacing;
        double sup = 0.0;
        for (std::size_t i = 0; i + lag <= last; ++i) {
            sup = std::max(sup, std::abs(curve.values[i + lag] - curve.values[i]));
        }
        const double bracket = std::sqrt(eta) * hold + std::sqrt(eta * std::log(1.0 / eta));
        if (bracket > 0.0) fitted = std::max(fitted, sup / bracket);
    }
    return fitted;
}

ModulusProfile space_modulus(const DriftSpec& spec, double t, const LevelGrid& levels,
                             const SpaceSweepParams& params, std::size_t n_paths) {
    if (levels.count < 8) throw DomainError("space modulus needs at least 8 levels");
    if (n_paths == 0) throw DomainError("space modulus needs at least one path");
    std::vector<double> scales = params.scales;
    if (scales.empty()) {
        for (std::size_t lag = (levels.count - 1) / 4; lag >= 1; lag /= 2) {
            scales.push_back(static_cast<double>(lag) * levels.spacing);
        }
    }
    require_decreasing(scales);
    std::vector<std::size_t> lags;
    for (double s : scales) lags.push_back(lag_for(s, levels.spacing));

    const double eps = params.eps > 0.0 ? params.eps : params.h;
    const TimeGrid grid = make_grid(t, params.h);
    TransitionTable table;
    if (params.scheme == Scheme::exact) table = build_transition_table(spec, grid);

    const std::size_t m = scales.size();
    std::vector<double> per_path(n_paths * m);
    parallel_for(n_paths, params.threads, [&](std::size_t i) {
        const SamplePath p = params.scheme == Scheme::exact
                                 ? exact_path(table, params.seed, i, params.noise)
                                 : euler_path(spec, t, params.h, params.seed, i, params.noise);
        const auto profile = kernel_level_sweep(p, levels, eps, grid.index_of(t));
        for (std::size_t j = 0; j < m; ++j) {
            per_path[i * m + j] = window_oscillation(profile, lags[j]);
        }
    });

    ModulusProfile out;
    out.scales = scales;
    out.sup_increments.assign(m, 0.0);
    for (std::size_t i = 0; i < n_paths; ++i) {
        for (std::size_t j = 0; j < m; ++j) out.sup_increments[j] += per_path[i * m + j];
    }
    for (double& v : out.sup_increments) v /= static_cast<double>(n_paths);
    fit_profile(out);
    return out;
}

}  // namespace bridgelab::holder
