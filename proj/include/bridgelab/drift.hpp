#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bridgelab {

enum class DriftFamily { power, exponential, constant, tabulated };

std::string to_string(DriftFamily family);
DriftFamily drift_family_from_string(const std::string& name);

/// Deterministic mean-reversion rate alpha(t) of dX = -alpha(t) X dt + dW.
///
///   power        alpha(t) = scale * t^beta          (beta > 0)
///   exponential  alpha(t) = scale * exp(beta * t)   (beta > 0)
///   constant     alpha(t) = scale                   (scale = 0 is Brownian motion)
///   tabulated    piecewise-linear through (time, alpha) pairs, times from 0
struct DriftSpec {
    DriftFamily family = DriftFamily::constant;
    double beta = 0.0;
    double scale = 1.0;
    std::vector<std::pair<double, double>> table;
    /// Source file of `table`, kept for config round-trips; may be empty.
    std::string table_path;

    static DriftSpec power(double beta, double scale = 1.0);
    static DriftSpec exponential(double beta, double scale = 1.0);
    static DriftSpec constant(double scale);
    static DriftSpec brownian() { return constant(0.0); }
    static DriftSpec tabulated(std::vector<std::pair<double, double>> table);

    /// Throws DomainError when an invariant is violated.
    void validate() const;

    bool operator==(const DriftSpec&) const = default;
};

struct GrowthReport {
    bool condition_i_holds = false;
    bool condition_ii_holds = false;
    /// Minus the log-log slope of (alpha*(t+1))^{2 gamma} / alpha(t).
    double fitted_decay_exponent = 0.0;
    std::vector<double> probe_grid;
    /// Empirical constant: max over the grid of ratio(t) * t^{fitted exponent}.
    double worst_ratio = 0.0;
    /// Largest |alpha'/alpha| seen on the grid.
    double max_log_derivative = 0.0;
};

/// Pass threshold on the fitted decay exponent for condition (i).
inline constexpr double kDecayExponentThreshold = 0.05;
inline constexpr int kGrowthProbePoints = 32;

double eval_alpha(const DriftSpec& spec, double t);

/// A(t) = integral of alpha over [0, t].
double eval_antiderivative(const DriftSpec& spec, double t);

/// A(t) - A(s) for s <= t, evaluated without forming A(t) and A(s) separately
/// when a closed form allows it.
double drift_integral(const DriftSpec& spec, double s, double t);

/// sup of alpha over [0, t].
double running_sup(const DriftSpec& spec, double t);

/// d alpha / dt: central difference with step 1e-4 max(1, t) for the smooth
/// families, secant slope of the enclosing segment for tabulated drifts.
double alpha_derivative(const DriftSpec& spec, double t);

/// Probes the two growth conditions that make X_t -> 0 almost surely:
/// (i) (alpha*(t+1))^{2 gamma} / alpha(t) decays polynomially, decided by a
/// log-log fit over a log-spaced grid on [1, probe_horizon];
/// (ii) |alpha'/alpha| stays bounded (its log-log trend does not grow).
GrowthReport check_growth_conditions(const DriftSpec& spec, double gamma,
                                     double probe_horizon);

/// alpha(t) * int_0^t exp(-kappa (A(t) - A(s))) ds. Tends to 1/kappa.
double laplace_asymptotic_ratio(const DriftSpec& spec, double kappa, double t);

using KeyValues = std::map<std::string, std::string>;

/// Writes drift.family / drift.beta / drift.scale / drift.table.
void write_drift_fragment(const DriftSpec& spec, KeyValues& out);

/// Reads the drift.* keys; drift.table names a two-column CSV (time, alpha).
/// Unrelated keys are ignored.
DriftSpec read_drift_fragment(const KeyValues& kv);

std::vector<std::pair<double, double>> load_drift_table(const std::string& path);

}  // namespace bridgelab
