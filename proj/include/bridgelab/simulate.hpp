#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bridgelab/drift.hpp"

namespace bridgelab {

enum class Scheme { euler, exact };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// One trajectory on the uniform grid t_k = k h, k = 0..N, started at X_0 = 0.
/// Euler paths also keep the driving increments dW_k = W_{t_{k+1}} - W_{t_k}.
struct SamplePath {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> brownian_increments;
    Scheme scheme = Scheme::euler;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    double step = 0.0;
    /// Set when h alpha(t_k) > 1 somewhere on an Euler grid.
    bool stability_warning = false;

    std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }

    /// Wraps given values on the grid k h; for tests and file round-trips.
    static SamplePath from_values(double h, std::vector<double> values,
                                  std::vector<double> increments = {},
                                  Scheme scheme = Scheme::euler);
};

/// Uniform grid covering [0, T]: N = ceil(T / h), so the last point is N h >= T.
struct TimeGrid {
    double step = 0.0;
    std::size_t steps = 0;

    double time(std::size_t k) const noexcept { return static_cast<double>(k) * step; }
    double horizon() const noexcept { return time(steps); }
    /// Grid index nearest to t.
    std::size_t index_of(double t) const;
};

TimeGrid make_grid(double T, double h);

/// Replaces the Philox normal draw for step k (test hook, e.g. zero noise).
using NoiseSource = std::function<double(std::uint64_t step)>;

/// X_{k+1} = X_k - alpha(t_k) X_k h + sqrt(h) xi_k with xi_k keyed by
/// (seed, path_index, k).
SamplePath euler_path(const DriftSpec& spec, double T, double h, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise = {});

/// Per-step transition X_{k+1} = decay_k X_k + stddev_k xi_k of the exact scheme.
struct TransitionTable {
    TimeGrid grid;
    std::vector<double> decay;   ///< exp(-(A(t_{k+1}) - A(t_k)))
    std::vector<double> stddev;  ///< sqrt(Var(X_{t_{k+1}} | X_{t_k}))
};

TransitionTable build_transition_table(const DriftSpec& spec, const TimeGrid& grid);

/// Samples each step from the exact Gaussian transition, so every marginal
/// X_{t_k} ~ N(0, Var(X_{t_k})) at any step size.
SamplePath exact_path(const DriftSpec& spec, double T, double h, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise = {});

SamplePath exact_path(const TransitionTable& table, std::uint64_t seed,
                      std::uint64_t path_index, const NoiseSource& noise = {});

SamplePath simulate_path(const DriftSpec& spec, Scheme scheme, double T, double h,
                         std::uint64_t seed, std::uint64_t path_index);

/// X^{a,b}_t = b + (a - b) exp(-A(t)) + X_t on the same grid.
SamplePath shift_to_ab(const SamplePath& path, double a, double b, const DriftSpec& spec);

struct DecayStats {
    std::vector<double> horizons;  ///< grid times actually used
    std::vector<double> mean_abs;
    std::vector<double> mean_sq;
    std::vector<double> std_err_abs;
    std::vector<double> std_err_sq;
    std::size_t n_paths = 0;
};

/// Monte Carlo E|X_T| and E X_T^2 with standard errors at each horizon.
/// Path i uses path_index i, so the result is independent of `threads`.
DecayStats batch_terminal_stats(const DriftSpec& spec, const std::vector<double>& horizons,
                                std::size_t n_paths, Scheme scheme, double h,
                                std::uint64_t seed, unsigned threads = 0);

}  // namespace bridgelab
