#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bridgelab/drift.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/simulate.hpp"

namespace bridgelab::holder {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t used = 0;
    /// Set when zero values were dropped before the fit.
    bool dropped_zeros = false;
};

/// Least squares on (log scale, log value). Zero values are dropped; fewer than
/// three usable points raise InsufficientDataError.
LogLogFit loglog_slope(std::span<const std::pair<double, double>> points);

/// Uniform modulus of continuity: for each scale eta, the sup of
/// |f(t) - f(s)| over |t - s| <= eta, with its log-log fit.
struct ModulusProfile {
    std::vector<double> scales;          ///< strictly decreasing
    std::vector<double> sup_increments;  ///< nondecreasing in scale
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
    /// False when fewer than three increments were nonzero; the fit fields
    /// are then NaN.
    bool fit_ok = false;
    bool dropped_zeros = false;
};

/// max over windows of lag+1 consecutive samples of (max - min), i.e. the sup
/// of |v_i - v_j| over |i - j| <= lag. Linear time.
double window_oscillation(std::span<const double> values, std::size_t lag);

/// Modulus of a curve on a uniform checkpoint grid; each scale must be at
/// least the grid spacing.
ModulusProfile time_modulus(const LocalTimeCurve& curve, const std::vector<double>& scales);

/// Kernel variance used for local-time curves fed to the time modulus.
inline double default_time_modulus_eps(double h) { return h / 4.0; }

/// Dyadic scales 2^{-coarse}, ..., 2^{-fine}.
std::vector<double> dyadic_scales(int coarse_exponent, int fine_exponent);

/// Max over dyadic lags eta < 1 (pairs inside [0, T]) of
/// |L_{s+eta} - L_s| / ( sqrt(eta) sqrt((T+1) alpha*(T+1)) + sqrt(eta log(1/eta)) ).
double time_modulus_bound_fit(const LocalTimeCurve& curve, double T, const DriftSpec& spec);

struct SpaceSweepParams {
    Scheme scheme = Scheme::euler;
    double h = 1.0 / 65536.0;
    /// Kernel variance; 0 means eps = h.
    double eps = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    /// Empty picks dyadic multiples of the level spacing up to a quarter of
    /// the grid width.
    std::vector<double> scales;
    /// Optional noise override (e.g. zero noise for a degenerate path).
    NoiseSource noise;
};

/// For each path, L_t^x on the level grid by one kernel sweep, then the sup
/// over x of the increments at each scale; the per-path moduli are averaged
/// in path order and fitted in log-log coordinates.
ModulusProfile space_modulus(const DriftSpec& spec, double t, const LevelGrid& levels,
                             const SpaceSweepParams& params, std::size_t n_paths);

}  // namespace bridgelab::holder
