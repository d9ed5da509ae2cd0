#include "bridgelab/simulate.hpp"

#include <cmath>

#include "bridgelab/errors.hpp"
#include "bridgelab/gaussian_law.hpp"
#include "bridgelab/parallel.hpp"
#include "bridgelab/rng.hpp"

namespace bridgelab {

std::string to_string(Scheme scheme) { return scheme == Scheme::euler ? "euler" : "exact"; }

Scheme scheme_from_string(const std::string& name) {
    if (name == "euler") return Scheme::euler;
    if (name == "exact") return Scheme::exact;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

SamplePath SamplePath::from_values(double h, std::vector<double> values,
                                   std::vector<double> increments, Scheme scheme) {
    if (!(h > 0.0)) throw DomainError("path step must be > 0");
    if (values.empty()) throw DomainError("path needs at least one value");
    if (!increments.empty() && increments.size() + 1 != values.size()) {
        throw DomainError("path needs one increment per step");
    }
    SamplePath p;
    p.step = h;
    p.scheme = scheme;
    p.times.resize(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) p.times[k] = static_cast<double>(k) * h;
    p.values = std::move(values);
    p.brownian_increments = std::move(increments);
    return p;
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = std::round(t / step);
    if (k <= 0.0) return 0;
    return std::min(steps, static_cast<std::size_t>(k));
}

TimeGrid make_grid(double T, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step h must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("horizon T must be > 0");
    if (h > T) throw DomainError("step h must not exceed the horizon T");
    // Tolerate T / h landing a hair above an integer through rounding.
    const double ratio = T / h;
    double n = std::ceil(ratio);
    if (n - ratio > 1.0 - 1e-9) n -= 1.0;
    return {h, static_cast<std::size_t>(std::max(1.0, n))};
}

namespace {

SamplePath empty_path(const TimeGrid& grid, Scheme scheme, std::uint64_t seed,
                      std::uint64_t path_index) {
    SamplePath p;
    p.scheme = scheme;
    p.seed = seed;
    p.path_index = path_index;
    p.step = grid.step;
    p.times.resize(grid.steps + 1);
    for (std::size_t k = 0; k <= grid.steps; ++k) p.times[k] = grid.time(k);
    p.values.assign(grid.steps + 1, 0.0);
    return p;
}

}  // namespace

SamplePath euler_path(const DriftSpec& spec, double T, double h, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise) {
    const TimeGrid grid = make_grid(T, h);
    SamplePath p = empty_path(grid, Scheme::euler, seed, path_index);
    p.brownian_increments.resize(grid.steps);
    const rng::NormalStream stream(seed, path_index);
    const double root_h = std::sqrt(h);
    double x = 0.0;
    for (std::size_t k = 0; k < grid.steps; ++k) {
        const double a = eval_alpha(spec, p.times[k]);
        if (a * h > 1.0) p.stability_warning = true;
        const double xi = noise ? noise(k) : stream(k);
        const double dw = root_h * xi;
        p.brownian_increments[k] = dw;
        x = x - a * x * h + dw;
        p.values[k + 1] = x;
    }
    return p;
}

TransitionTable build_transition_table(const DriftSpec& spec, const TimeGrid& grid) {
    TransitionTable table;
    table.grid = grid;
    table.decay.resize(grid.steps);
    table.stddev.resize(grid.steps);
    for (std::size_t k = 0; k < grid.steps; ++k) {
        const double t0 = grid.time(k);
        const double t1 = grid.time(k + 1);
        table.decay[k] = std::exp(-drift_integral(spec, t0, t1));
        table.stddev[k] = std::sqrt(law::conditional_variance(spec, t0, t1));
    }
    return table;
}

SamplePath exact_path(const TransitionTable& table, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise) {
    SamplePath p = empty_path(table.grid, Scheme::exact, seed, path_index);
    const rng::NormalStream stream(seed, path_index);
    double x = 0.0;
    for (std::size_t k = 0; k < table.grid.steps; ++k) {
        const double xi = noise ? noise(k) : stream(k);
        x = table.decay[k] * x + table.stddev[k] * xi;
        p.values[k + 1] = x;
    }
    return p;
}

SamplePath exact_path(const DriftSpec& spec, double T, double h, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise) {
    return exact_path(build_transition_table(spec, make_grid(T, h)), seed, path_index, noise);
}

SamplePath simulate_path(const DriftSpec& spec, Scheme scheme, double T, double h,
                         std::uint64_t seed, std::uint64_t path_index) {
    return scheme == Scheme::euler ? euler_path(spec, T, h, seed, path_index)
                                   : exact_path(spec, T, h, seed, path_index);
}

SamplePath shift_to_ab(const SamplePath& path, double a, double b, const DriftSpec& spec) {
    SamplePath out = path;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double pull = std::exp(-eval_antiderivative(spec, out.times[k]));
        out.values[k] = b + (a - b) * pull + path.values[k];
    }
    return out;
}

DecayStats batch_terminal_stats(const DriftSpec& spec, const std::vector<double>& horizons,
                                std::size_t n_paths, Scheme scheme, double h,
                                std::uint64_t seed, unsigned threads) {
    if (horizons.empty()) throw DomainError("at least one horizon is required");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
        if (!(horizons[i] > horizons[i - 1])) throw DomainError("horizons must be increasing");
    }
    if (n_paths < 100) throw DomainError("batch statistics need n_paths >= 100");

    const TimeGrid grid = make_grid(horizons.back(), h);
    std::vector<std::size_t> index(horizons.size());
    for (std::size_t j = 0; j < horizons.size(); ++j) index[j] = grid.index_of(horizons[j]);

    TransitionTable table;
    if (scheme == Scheme::exact) table = build_transition_table(spec, grid);

    const std::size_t m = horizons.size();
    std::vector<double> terminal(n_paths * m);
    parallel_for(n_paths, threads, [&](std::size_t i) {
        const SamplePath p = scheme == Scheme::exact
                                 ? exact_path(table, seed, i)
                                 : euler_path(spec, grid.horizon(), h, seed, i);
        for (std::size_t j = 0; j < m; ++j) terminal[i * m + j] = p.values[index[j]];
    });

    DecayStats stats;
    stats.n_paths = n_paths;
    const double n = static_cast<double>(n_paths);
    for (std::size_t j = 0; j < m; ++j) {
        double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
        for (std::size_t i = 0; i < n_paths; ++i) {
            const double x = terminal[i * m + j];
            const double ax = std::abs(x);
            s1 += ax;
            s2 += x * x;
            s3 += ax * ax;
            s4 += x * x * x * x;
        }
        const double mean_abs = s1 / n;
        const double mean_sq = s2 / n;
        const double var_abs = std::max(0.0, (s3 - n * mean_abs * mean_abs) / (n - 1.0));
        const double var_sq = std::max(0.0, (s4 - n * mean_sq * mean_sq) / (n - 1.0));
        stats.horizons.push_back(grid.time(index[j]));
        stats.mean_abs.push_back(mean_abs);
        stats.mean_sq.push_back(mean_sq);
        stats.std_err_abs.push_back(std::sqrt(var_abs / n));
        stats.std_err_sq.push_back(std::sqrt(var_sq / n));
    }
    return stats;
}

}  // namespace bridgelab
