#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/drift.hpp"
#include "bridgelab/simulate.hpp"

namespace bridgelab {

enum class Estimator { kernel, binned, tanaka };

std::string to_string(Estimator estimator);
Estimator estimator_from_string(const std::string& name);

/// Estimated L_t^x at increasing checkpoints.
struct LocalTimeCurve {
    double level = 0.0;
    std::vector<double> checkpoints;
    std::vector<double> values;
    Estimator estimator = Estimator::kernel;
    /// eps for the kernel estimator, delta for the binned one, empty for Tanaka.
    std::optional<double> smoothing;
    std::uint64_t source_seed = 0;
};

/// Heat kernel p_eps(y) = exp(-y^2 / (2 eps)) / sqrt(2 pi eps).
double heat_kernel(double y, double eps);

/// Trapezoid rule for int_0^t p_eps(X_r - x) dr on the path grid. Between grid
/// points the running integral is interpolated linearly.
LocalTimeCurve kernel_estimate(const SamplePath& path, double x, double eps,
                               const std::vector<double>& checkpoints);

/// Kernel curve at every grid time of the path.
LocalTimeCurve kernel_estimate_on_grid(const SamplePath& path, double x, double eps);

/// (1 / (2 delta)) Leb{r <= t : |X_r - x| < delta}, trapezoid on the indicator.
LocalTimeCurve binned_estimate(const SamplePath& path, double x, double delta,
                               const std::vector<double>& checkpoints);

/// Ito-Tanaka reconstruction
///   |X_t - x| - |X_0 - x| - sum sgn(X_k - x) dW_k + sum sgn(X_k - x) alpha(t_k) X_k h
/// over grid steps t_k < t, with sgn(0) = 0. Checkpoints snap down to the grid.
/// Needs the Brownian increments of an Euler path.
LocalTimeCurve tanaka_estimate(const SamplePath& path, const DriftSpec& spec, double x,
                               const std::vector<double>& checkpoints);

/// Uniform level grid x_i = first + i * spacing, i < count.
struct LevelGrid {
    double first = -1.0;
    double spacing = 1.0 / 128.0;
    std::size_t count = 257;

    double level(std::size_t i) const noexcept { return first + static_cast<double>(i) * spacing; }
};

/// Kernel local time at grid time index `upto` for every level, in one pass
/// over the path. Kernel contributions beyond kKernelCutoffSigmas standard
/// deviations are dropped (relative size below e^{-50}).
std::vector<double> kernel_level_sweep(const SamplePath& path, const LevelGrid& levels,
                                       double eps, std::size_t upto);

inline constexpr double kKernelCutoffSigmas = 10.0;

struct EnsembleOptions {
    Scheme scheme = Scheme::euler;
    /// Grid step; 0 picks the estimator default.
    double h = 0.0;
    unsigned threads = 0;
};

/// Monte Carlo E|L_{t,eps_i} - L_{t,eps_{i+1}}|^2 along a strictly decreasing
/// ladder. The default step is min(eps_min, t / 1000).
std::vector<double> cauchy_diagnostic(const DriftSpec& spec, double x, double t,
                                      const std::vector<double>& eps_ladder,
                                      std::size_t n_paths, std::uint64_t seed,
                                      const EnsembleOptions& options = {});

struct GrowthProbe {
    std::vector<double> horizons;
    std::vector<double> mean_local_time;
    std::vector<double> std_err;
    double fitted_exponent = 0.0;
    bool strictly_increasing = false;
    /// rho / 2 for a power drift t^rho, where growth like t^{rho/2} is
    /// conjectured; NaN for other families. Reported only.
    double conjectured_exponent = 0.0;
};

/// Ensemble mean of the kernel local time at the given integer horizons and
/// the log-log growth exponent. eps defaults to h.
GrowthProbe growth_probe(const DriftSpec& spec, double x, const std::vector<int>& horizons,
                         double h, std::size_t n_paths, std::uint64_t seed,
                         Scheme scheme = Scheme::exact, double eps = 0.0,
                         unsigned threads = 0);

}  // namespace bridgelab
