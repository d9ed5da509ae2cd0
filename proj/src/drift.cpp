#include "bridgelab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bridgelab/csv.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/quadrature.hpp"
#include "bridgelab/regression.hpp"

namespace bridgelab {

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (n < 2 || sxx == 0.0) {
        throw InsufficientDataError("least squares needs two distinct abscissae");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

std::string to_string(DriftFamily family) {
    switch (family) {
        case DriftFamily::power: return "power";
        case DriftFamily::exponential: return "exponential";
        case DriftFamily::constant: return "constant";
        case DriftFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

DriftFamily drift_family_from_string(const std::string& name) {
    if (name == "power") return DriftFamily::power;
    if (name == "exponential") return DriftFamily::exponential;
    if (name == "constant") return DriftFamily::constant;
    if (name == "tabulated") return DriftFamily::tabulated;
    throw std::invalid_argument("unknown drift family '" + name + "'");
}

DriftSpec DriftSpec::power(double beta, double scale) {
    DriftSpec s;
    s.family = DriftFamily::power;
    s.beta = beta;
    s.scale = scale;
    s.validate();
    return s;
}

DriftSpec DriftSpec::exponential(double beta, double scale) {
    DriftSpec s;
    s.family = DriftFamily::exponential;
    s.beta = beta;
    s.scale = scale;
    s.validate();
    return s;
}

DriftSpec DriftSpec::constant(double scale) {
    DriftSpec s;
    s.family = DriftFamily::constant;
    s.scale = scale;
    s.validate();
    return s;
}

DriftSpec DriftSpec::tabulated(std::vector<std::pair<double, double>> table) {
    DriftSpec s;
    s.family = DriftFamily::tabulated;
    s.table = std::move(table);
    s.validate();
    return s;
}

void DriftSpec::validate() const {
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw DomainError("drift scale must be finite and >= 0");
    }
    switch (family) {
        case DriftFamily::power:
        case DriftFamily::exponential:
            if (!(beta > 0.0) || !std::isfinite(beta)) {
                throw DomainError("drift beta must be > 0 for the " + to_string(family) +
                                  " family");
            }
            break;
        case DriftFamily::constant: break;
        case DriftFamily::tabulated:
            if (table.size() < 2) throw DomainError("drift table needs at least two rows");
            if (table.front().first != 0.0) throw DomainError("drift table must start at t = 0");
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (i > 0 && !(table[i].first > table[i - 1].first)) {
                    throw DomainError("drift table times must be strictly increasing");
                }
                if (!(table[i].second >= 0.0) || !std::isfinite(table[i].second)) {
                    throw DomainError("drift table values must be finite and >= 0");
                }
            }
            break;
    }
}

namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("time must be finite and >= 0, got " + std::to_string(t));
    }
}

// Index of the segment [t_i, t_{i+1}] holding t.
std::size_t table_segment(const DriftSpec& spec, double t) {
    const auto& tab = spec.table;
    if (t > tab.back().first) {
        throw ExtrapolationError("t = " + std::to_string(t) + " beyond drift table end " +
                                 std::to_string(tab.back().first));
    }
    auto it = std::upper_bound(tab.begin(), tab.end(), t,
                               [](double v, const auto& row) { return v < row.first; });
    std::size_t i = static_cast<std::size_t>(it - tab.begin());
    i = i == 0 ? 0 : i - 1;
    return std::min(i, tab.size() - 2);
}

double table_alpha(const DriftSpec& spec, double t) {
    const std::size_t i = table_segment(spec, t);
    const auto [t0, a0] = spec.table[i];
    const auto [t1, a1] = spec.table[i + 1];
    const double w = (t - t0) / (t1 - t0);
    return a0 + w * (a1 - a0);
}

double table_integral(const DriftSpec& spec, double s, double t) {
    table_segment(spec, t);  // range check
    const auto alpha = [&spec](double u) { return table_alpha(spec, u); };
    std::vector<double> points{s};
    for (const auto& row : spec.table) {
        if (row.first > s && row.first < t) points.push_back(row.first);
    }
    points.push_back(t);
    const quad::Result r = quad::adaptive_pieces(alpha, points);
    if (!r.converged) {
        throw NumericError("drift table quadrature did not converge", r.value, r.error);
    }
    return r.value;
}

}  // namespace

double eval_alpha(const DriftSpec& spec, double t) {
    require_time(t);
    switch (spec.family) {
        case DriftFamily::power: return spec.scale * std::pow(t, spec.beta);
        case DriftFamily::exponential: return spec.scale * std::exp(spec.beta * t);
        case DriftFamily::constant: return spec.scale;
        case DriftFamily::tabulated: return table_alpha(spec, t);
    }
    return 0.0;
}

double eval_antiderivative(const DriftSpec& spec, double t) {
    return drift_integral(spec, 0.0, t);
}

double drift_integral(const DriftSpec& spec, double s, double t) {
    require_time(s);
    require_time(t);
    if (s > t) return -drift_integral(spec, t, s);
    if (s == t) return 0.0;
    const double c = spec.scale;
    switch (spec.family) {
        case DriftFamily::power: {
            const double p = spec.beta + 1.0;
            if (s == 0.0) return c * std::pow(t, p) / p;
            // s^p ((t/s)^p - 1) without cancellation when t is close to s.
            return c * std::pow(s, p) * std::expm1(p * std::log1p((t - s) / s)) / p;
        }
        case DriftFamily::exponential:
            return c * std::exp(spec.beta * s) * std::expm1(spec.beta * (t - s)) / spec.beta;
        case DriftFamily::constant: return c * (t - s);
        case DriftFamily::tabulated: return table_integral(spec, s, t);
    }
    return 0.0;
}

double running_sup(const DriftSpec& spec, double t) {
    require_time(t);
    if (spec.family != DriftFamily::tabulated) {
        // power, exponential and constant are nondecreasing in t
        return eval_alpha(spec, t);
    }
    double sup = table_alpha(spec, t);
    for (const auto& [ti, ai] : spec.table) {
        if (ti > t) break;
        sup = std::max(sup, ai);
    }
    return sup;
}

double alpha_derivative(const DriftSpec& spec, double t) {
    require_time(t);
    if (spec.family == DriftFamily::tabulated) {
        const std::size_t i = table_segment(spec, t);
        const auto [t0, a0] = spec.table[i];
        const auto [t1, a1] = spec.table[i + 1];
        return (a1 - a0) / (t1 - t0);
    }
    const double step = 1e-4 * std::max(1.0, t);
    const double lo = std::max(0.0, t - step);
    const double hi = t + step;
    return (eval_alpha(spec, hi) - eval_alpha(spec, lo)) / (hi - lo);
}

GrowthReport check_growth_conditions(const DriftSpec& spec, double gamma,
                                     double probe_horizon) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) throw DomainError("gamma must lie in [0, 1/2]");
    if (!(probe_horizon >= 16.0)) throw DomainError("probe_horizon must be >= 16");

    GrowthReport report;
    const int n = kGrowthProbePoints;
    const double log_hi = std::log(probe_horizon);
    for (int i = 0; i < n; ++i) {
        report.probe_grid.push_back(std::exp(log_hi * i / (n - 1)));
    }
    report.probe_grid.back() = probe_horizon;

    // The tabulated sup needs alpha at t + 1; keep the grid inside the table.
    if (spec.family == DriftFamily::tabulated) {
        const double end = spec.table.back().first;
        if (probe_horizon + 1.0 > end) {
            throw ExtrapolationError("growth probe needs the drift table to reach " +
                                     std::to_string(probe_horizon + 1.0));
        }
    }

    std::vector<double> log_t, log_ratio, log_t_nonflat, log_dlog;
    bool has_flat_points = false;
    bool ratio_defined = true;
    bool derivative_defined = true;
    for (double t : report.probe_grid) {
        const double a = eval_alpha(spec, t);
        const double sup = running_sup(spec, t + 1.0);
        if (!(a > 0.0)) {
            ratio_defined = false;
            derivative_defined = false;
            continue;
        }
        const double log_r = 2.0 * gamma * (sup > 0.0 ? std::log(sup) : 0.0) - std::log(a);
        log_t.push_back(std::log(t));
        log_ratio.push_back(log_r);

        const double dlog = std::abs(alpha_derivative(spec, t) / a);
        report.max_log_derivative = std::max(report.max_log_derivative, dlog);
        if (dlog > 1e-12) {
            log_t_nonflat.push_back(std::log(t));
            log_dlog.push_back(std::log(dlog));
        } else {
            has_flat_points = true;
        }
    }

    if (ratio_defined && log_t.size() >= 2) {
        const LineFit fit = least_squares_line(log_t, log_ratio);
        report.fitted_decay_exponent = -fit.slope;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < log_t.size(); ++i) {
            worst = std::max(worst, log_ratio[i] + report.fitted_decay_exponent * log_t[i]);
        }
        report.worst_ratio = std::exp(worst);
        report.condition_i_holds = report.fitted_decay_exponent > kDecayExponentThreshold;
    } else {
        report.fitted_decay_exponent = 0.0;
        report.worst_ratio = std::numeric_limits<double>::infinity();
        report.condition_i_holds = false;
    }

    if (!derivative_defined || !std::isfinite(report.max_log_derivative)) {
        report.condition_ii_holds = false;
    } else if (has_flat_points || log_dlog.size() < 2) {
        // alpha' vanishes somewhere on the grid: bounded as long as it is finite
        report.condition_ii_holds = true;
    } else {
        const LineFit trend = least_squares_line(log_t_nonflat, log_dlog);
        report.condition_ii_holds = trend.slope <= kDecayExponentThreshold;
    }
    return report;
}

double laplace_asymptotic_ratio(const DriftSpec& spec, double kappa, double t) {
    if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    const double a = eval_alpha(spec, t);
    if (!(a > 0.0)) throw DomainError("alpha must be strictly positive at t");
    const auto integrand = [&](double s) { return std::exp(-kappa * drift_integral(spec, s, t)); };
    const quad::Result r = quad::adaptive_toward_upper(integrand, 0.0, t, 1.0 / (kappa * a));
    if (!r.converged) {
        throw NumericError("Laplace ratio quadrature did not converge", a * r.value, a * r.error);
    }
    return a * r.value;
}

void write_drift_fragment(const DriftSpec& spec, KeyValues& out) {
    out["drift.family"] = to_string(spec.family);
    if (spec.family == DriftFamily::tabulated) {
        out["drift.table"] = spec.table_path;
        return;
    }
    if (spec.family != DriftFamily::constant || spec.beta != 0.0)
        out["drift.beta"] = csv::format_double(spec.beta);
    out["drift.scale"] = csv::format_double(spec.scale);
}

DriftSpec read_drift_fragment(const KeyValues& kv) {
    const auto get = [&kv](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    const auto number = [&](const std::string& key, double fallback) {
        const std::string* v = get(key);
        if (!v) return fallback;
        try {
            return csv::parse_double(*v);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument(key + ": expected a number, got '" + *v + "'");
        }
    };

    const std::string* family = get("drift.family");
    if (!family) throw std::invalid_argument("drift.family: missing required key");
    DriftSpec spec;
    try {
        spec.family = drift_family_from_string(*family);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("drift.family: ") + e.what());
    }
    spec.scale = number("drift.scale", 1.0);
    if (spec.family == DriftFamily::power || spec.family == DriftFamily::exponential) {
        if (!get("drift.beta")) throw std::invalid_argument("drift.beta: missing required key");
        spec.beta = number("drift.beta", 0.0);
    } else if (get("drift.beta")) {
        spec.beta = number("drift.beta", 0.0);
    }
    if (spec.family == DriftFamily::tabulated) {
        const std::string* path = get("drift.table");
        if (!path) throw std::invalid_argument("drift.table: missing required key");
        spec.table_path = *path;
        spec.table = load_drift_table(*path);
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw std::invalid_argument(std::string("drift: ") + e.what());
    }
    return spec;
}

std::vector<std::pair<double, double>> load_drift_table(const std::string& path) {
    const std::string text = csv::read_text_file(path);
    std::vector<std::pair<double, double>> rows;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected two columns");
        }
        try {
            rows.emplace_back(csv::parse_double(line.substr(0, comma)),
                              csv::parse_double(line.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
            if (rows.empty() && line_no == 1) continue;  // header row
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number");
        }
    }
    return rows;
}

}  // namespace bridgelab
