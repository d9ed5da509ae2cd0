#include "bridgelab/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bridgelab/errors.hpp"
#include "bridgelab/parallel.hpp"
#include "bridgelab/regression.hpp"

namespace bridgelab {

std::string to_string(Estimator estimator) {
    switch (estimator) {
        case Estimator::kernel: return "kernel";
        case Estimator::binned: return "binned";
        case Estimator::tanaka: return "tanaka";
    }
    return "unknown";
}

Estimator estimator_from_string(const std::string& name) {
    if (name == "kernel") return Estimator::kernel;
    if (name == "binned") return Estimator::binned;
    if (name == "tanaka") return Estimator::tanaka;
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

double heat_kernel(double y, double eps) {
    return std::exp(-y * y / (2.0 * eps)) / std::sqrt(2.0 * std::numbers::pi * eps);
}

namespace {

void require_checkpoints(const SamplePath& path, const std::vector<double>& checkpoints) {
    const double end = path.horizon() * (1.0 + 1e-12);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const double t = checkpoints[i];
        if (!(t >= 0.0) || t > end) {
            throw DomainError("checkpoint " + std::to_string(t) + " outside path horizon [0, " +
                              std::to_string(path.horizon()) + "]");
        }
        if (i > 0 && t < checkpoints[i - 1]) throw DomainError("checkpoints must be increasing");
    }
}

// Trapezoid running integral of f(X_k) over the grid.
template <typename F>
std::vector<double> running_trapezoid(const SamplePath& path, F&& f) {
    std::vector<double> cum(path.values.size(), 0.0);
    if (path.values.empty()) return cum;
    const double half_h = 0.5 * path.step;
    double prev = f(path.values[0]);
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        const double cur = f(path.values[k]);
        cum[k] = cum[k - 1] + half_h * (prev + cur);
        prev = cur;
    }
    return cum;
}

std::vector<double> sample_running(const SamplePath& path, const std::vector<double>& cum,
                                   const std::vector<double>& checkpoints) {
    std::vector<double> out;
    out.reserve(checkpoints.size());
    const std::size_t last = cum.size() - 1;
    for (double t : checkpoints) {
        const double pos = t / path.step;
        std::size_t k = static_cast<std::size_t>(std::floor(pos));
        if (k >= last) {
            out.push_back(cum[last]);
            continue;
        }
        const double w = pos - static_cast<double>(k);
        out.push_back(cum[k] + w * (cum[k + 1] - cum[k]));
    }
    return out;
}

}  // namespace

LocalTimeCurve kernel_estimate(const SamplePath& path, double x, double eps,
                               const std::vector<double>& checkpoints) {
    if (!(eps > 0.0)) throw DomainError("kernel smoothing eps must be > 0");
    require_checkpoints(path, checkpoints);
    const auto cum = running_trapezoid(path, [&](double v) { return heat_kernel(v - x, eps); });
    LocalTimeCurve curve;
    curve.level = x;
    curve.checkpoints = checkpoints;
    curve.values = sample_running(path, cum, checkpoints);
    curve.estimator = Estimator::kernel;
    curve.smoothing = eps;
    curve.source_seed = path.seed;
    return curve;
}

LocalTimeCurve kernel_estimate_on_grid(const SamplePath& path, double x, double eps) {
    if (!(eps > 0.0)) throw DomainError("kernel smoothing eps must be > 0");
    LocalTimeCurve curve;
    curve.level = x;
    curve.checkpoints = path.times;
    curve.values = running_trapezoid(path, [&](double v) { return heat_kernel(v - x, eps); });
    curve.estimator = Estimator::kernel;
    curve.smoothing = eps;
    curve.source_seed = path.seed;
    return curve;
}

LocalTimeCurve binned_estimate(const SamplePath& path, double x, double delta,
                               const std::vector<double>& checkpoints) {
    if (!(delta > 0.0)) throw DomainError("bin half-width delta must be > 0");
    require_checkpoints(path, checkpoints);
    const double height = 1.0 / (2.0 * delta);
    const auto cum = running_trapezoid(
        path, [&](double v) { return std::abs(v - x) < delta ? height : 0.0; });
    LocalTimeCurve curve;
    curve.level = x;
    curve.checkpoints = checkpoints;
    curve.values = sample_running(path, cum, checkpoints);
    curve.estimator = Estimator::binned;
    curve.smoothing = delta;
    curve.source_seed = path.seed;
    return curve;
}

LocalTimeCurve tanaka_estimate(const SamplePath& path, const DriftSpec& spec, double x,
                               const std::vector<double>& checkpoints) {
    if (path.scheme != Scheme::euler || path.brownian_increments.size() + 1 != path.values.size()) {
        throw UnsupportedSchemeError(
            "Tanaka estimation needs an Euler path with its Brownian increments");
    }
    require_checkpoints(path, checkpoints);
    const auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };

    // correction[k] = - sum_{j<k} sgn dW_j + sum_{j<k} sgn alpha(t_j) X_j h
    std::vector<double> correction(path.values.size(), 0.0);
    for (std::size_t j = 0; j + 1 < path.values.size(); ++j) {
        const double xj = path.values[j];
        const double s = sgn(xj - x);
        const double drift = eval_alpha(spec, path.times[j]) * xj * path.step;
        correction[j + 1] = correction[j] - s * path.brownian_increments[j] + s * drift;
    }

    LocalTimeCurve curve;
    curve.level = x;
    curve.checkpoints = checkpoints;
    curve.estimator = Estimator::tanaka;
    curve.source_seed = path.seed;
    const double start = std::abs(path.values[0] - x);
    const std::size_t last = path.values.size() - 1;
    for (double t : checkpoints) {
        const std::size_t k = std::min(last, static_cast<std::size_t>(std::floor(t / path.step + 1e-9)));
        curve.values.push_back(std::abs(path.values[k] - x) - start + correction[k]);
    }
    return curve;
}

std::vector<double> kernel_level_sweep(const SamplePath& path, const LevelGrid& levels,
                                       double eps, std::size_t upto) {
    if (!(eps > 0.0)) throw DomainError("kernel smoothing eps must be > 0");
    if (!(levels.spacing > 0.0) || levels.count == 0) throw DomainError("empty level grid");
    if (upto >= path.values.size()) throw DomainError("sweep index beyond path end");

    std::vector<double> out(levels.count, 0.0);
    if (upto == 0) return out;
    const double reach = kKernelCutoffSigmas * std::sqrt(eps);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * eps);
    const double inv_two_eps = 1.0 / (2.0 * eps);
    const double top = static_cast<double>(levels.count - 1);
    for (std::size_t k = 0; k <= upto; ++k) {
        const double weight = (k == 0 || k == upto) ? 0.5 * path.step : path.step;
        const double v = path.values[k];
        const double lo = std::ceil((v - reach - levels.first) / levels.spacing);
        const double hi = std::floor((v + reach - levels.first) / levels.spacing);
        if (hi < 0.0 || lo > top) continue;
        const auto i0 = static_cast<std::size_t>(std::max(0.0, lo));
        const auto i1 = static_cast<std::size_t>(std::min(top, hi));
        for (std::size_t i = i0; i <= i1; ++i) {
            const double y = v - levels.level(i);
            out[i] += weight * norm * std::exp(-y * y * inv_two_eps);
        }
    }
    return out;
}

std::vector<double> cauchy_diagnostic(const DriftSpec& spec, double x, double t,
                                      const std::vector<double>& eps_ladder,
                                      std::size_t n_paths, std::uint64_t seed,
                                      const EnsembleOptions& options) {
    if (eps_ladder.size() < 2) return {};
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0.0)) throw DomainError("eps ladder must be positive");
        if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) {
            throw DomainError("eps ladder must be strictly decreasing");
        }
    }
    if (n_paths < 500) throw DomainError("cauchy_diagnostic needs n_paths >= 500");
    if (!(t > 0.0)) throw DomainError("t must be > 0");

    const double h = options.h > 0.0 ? options.h : std::min(eps_ladder.back(), t / 1000.0);
    const std::size_t m = eps_ladder.size();
    std::vector<double> per_path(n_paths * (m - 1));
    TransitionTable table;
    if (options.scheme == Scheme::exact) table = build_transition_table(spec, make_grid(t, h));

    parallel_for(n_paths, options.threads, [&](std::size_t i) {
        const SamplePath p = options.scheme == Scheme::exact ? exact_path(table, seed, i)
                                                             : euler_path(spec, t, h, seed, i);
        double prev = kernel_estimate(p, x, eps_ladder[0], {t}).values[0];
        for (std::size_t j = 1; j < m; ++j) {
            const double cur = kernel_estimate(p, x, eps_ladder[j], {t}).values[0];
            per_path[i * (m - 1) + j - 1] = (prev - cur) * (prev - cur);
            prev = cur;
        }
    });

    std::vector<double> out(m - 1, 0.0);
    for (std::size_t i = 0; i < n_paths; ++i) {
        for (std::size_t j = 0; j + 1 < m; ++j) out[j] += per_path[i * (m - 1) + j];
    }
    for (double& v : out) v /= static_cast<double>(n_paths);
    return out;
}

GrowthProbe growth_probe(const DriftSpec& spec, double x, const std::vector<int>& horizons,
                         double h, std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                         double eps, unsigned threads) {
    if (horizons.empty()) throw DomainError("growth probe needs horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] <= 0) throw DomainError("growth probe horizons must be positive");
        if (i > 0 && horizons[i] <= horizons[i - 1]) {
            throw DomainError("growth probe horizons must be increasing");
        }
    }
    if (n_paths < 2) throw DomainError("growth probe needs at least two paths");
    if (eps <= 0.0) eps = h;

    const double horizon = horizons.back();
    std::vector<double> checkpoints(horizons.begin(), horizons.end());
    const std::size_t m = checkpoints.size();
    std::vector<double> per_path(n_paths * m);
    TransitionTable table;
    if (scheme == Scheme::exact) table = build_transition_table(spec, make_grid(horizon, h));

    parallel_for(n_paths, threads, [&](std::size_t i) {
        const SamplePath p = scheme == Scheme::exact ? exact_path(table, seed, i)
                                                     : euler_path(spec, horizon, h, seed, i);
        const auto curve = kernel_estimate(p, x, eps, checkpoints);
        std::copy(curve.values.begin(), curve.values.end(), per_path.begin() + i * m);
    });

    GrowthProbe probe;
    probe.horizons = checkpoints;
    const double n = static_cast<double>(n_paths);
    for (std::size_t j = 0; j < m; ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n_paths; ++i) {
            const double v = per_path[i * m + j];
            s1 += v;
            s2 += v * v;
        }
        const double mean = s1 / n;
        probe.mean_local_time.push_back(mean);
        probe.std_err.push_back(std::sqrt(std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) / n));
    }
    probe.strictly_increasing = true;
    for (std::size_t j = 1; j < m; ++j) {
        if (!(probe.mean_local_time[j] > probe.mean_local_time[j - 1])) {
            probe.strictly_increasing = false;
        }
    }
    std::vector<double> lx, ly;
    for (std::size_t j = 0; j < m; ++j) {
        if (probe.mean_local_time[j] > 0.0) {
            lx.push_back(std::log(checkpoints[j]));
            ly.push_back(std::log(probe.mean_local_time[j]));
        }
    }
    probe.fitted_exponent = lx.size() >= 2 ? least_squares_line(lx, ly).slope
                                           : std::numeric_limits<double>::quiet_NaN();
    probe.conjectured_exponent = spec.family == DriftFamily::power
                                     ? spec.beta / 2.0
                                     : std::numeric_limits<double>::quiet_NaN();
    return probe;
}

}  // namespace bridgelab
