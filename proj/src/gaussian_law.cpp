#include "bridgelab/gaussian_law.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bridgelab/errors.hpp"
#include "bridgelab/quadrature.hpp"

namespace bridgelab::law {
namespace {

void require_time(double t, const char* name) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(name) + " must be finite and >= 0");
    }
}

// Integrand exp(-2 (A(t) - A(r))) peaks at r = t with width ~ 1 / (2 alpha(t)).
double decayed_integral(const DriftSpec& spec, double s, double t, const quad::Tolerance& tol) {
    if (t == s) return 0.0;
    const double a = eval_alpha(spec, t);
    const double width = a > 0.0 ? 1.0 / (2.0 * a) : std::numeric_limits<double>::infinity();
    const auto f = [&](double r) { return std::exp(-2.0 * drift_integral(spec, r, t)); };
    const quad::Result res = quad::adaptive_toward_upper(f, s, t, width, tol);
    if (!res.converged) {
        throw NumericError("variance quadrature did not converge", res.value, res.error);
    }
    return res.value;
}

void require_grid(std::span<const double> times) {
    if (times.empty()) throw DomainError("time grid must not be empty");
    if (!(times[0] > 0.0)) throw DomainError("time grid must start strictly after 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("time grid must be strictly increasing");
        }
    }
    if (!std::isfinite(times.back())) throw DomainError("time grid must be finite");
}

}  // namespace

double variance(const DriftSpec& spec, double t) {
    require_time(t, "t");
    return decayed_integral(spec, 0.0, t, {});
}

double covariance(const DriftSpec& spec, double s, double t) {
    require_time(s, "s");
    require_time(t, "t");
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    if (lo == 0.0) return 0.0;
    return std::exp(-drift_integral(spec, lo, hi)) * variance(spec, lo);
}

double conditional_variance(const DriftSpec& spec, double s, double t) {
    require_time(s, "s");
    require_time(t, "t");
    if (s > t) throw DomainError("conditional_variance needs s <= t");
    return decayed_integral(spec, s, t, {});
}

IncrementVariance increment_variance(const DriftSpec& spec, double t1, double t2, double gamma) {
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("increment_variance needs t1, t2 > 0");
    if (!(gamma >= 0.0 && gamma <= 0.5)) throw DomainError("gamma must lie in [0, 1/2]");
    const double lo = std::min(t1, t2);
    const double hi = std::max(t1, t2);

    IncrementVariance out;
    if (lo != hi) {
        // Var(X_hi) + Var(X_lo) - 2 Cov rewritten as (1 - e^{-I})^2 Var(X_lo) + Var(X_hi | X_lo)
        const double shrink = std::expm1(-drift_integral(spec, lo, hi));
        out.variance = shrink * shrink * variance(spec, lo) + conditional_variance(spec, lo, hi);
    }

    const double a_lo = eval_alpha(spec, lo);
    const double a_hi = eval_alpha(spec, hi);
    const double sup_hi = running_sup(spec, hi);
    const double inf = std::numeric_limits<double>::infinity();
    const double first = a_lo > 0.0 ? std::pow(sup_hi, 2.0 * gamma) / a_lo : inf;
    const double second = a_hi > 0.0 ? std::pow(a_hi, 2.0 * gamma - 1.0)
                                     : (gamma == 0.5 ? 1.0 : inf);
    out.bound = std::pow(hi - lo, 2.0 * gamma) * (first + second);
    if (lo == hi && std::isinf(out.bound)) out.bound = 0.0;
    return out;
}

CovarianceMatrix::CovarianceMatrix(std::vector<double> times, std::vector<double> entries)
    : times_(std::move(times)), entries_(std::move(entries)) {
    if (entries_.size() != times_.size() * times_.size()) {
        throw std::invalid_argument("covariance matrix entries do not match its grid");
    }
}

double CovarianceMatrix::determinant() const { return lu_determinant(entries_, size()); }

double lu_determinant(std::span<const double> entries, std::size_t p) {
    if (entries.size() != p * p) throw std::invalid_argument("matrix is not p x p");
    std::vector<double> a(entries.begin(), entries.end());
    double det = 1.0;
    for (std::size_t k = 0; k < p; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < p; ++i) {
            if (std::abs(a[i * p + k]) > std::abs(a[pivot * p + k])) pivot = i;
        }
        if (a[pivot * p + k] == 0.0) return 0.0;
        if (pivot != k) {
            for (std::size_t j = 0; j < p; ++j) std::swap(a[k * p + j], a[pivot * p + j]);
            det = -det;
        }
        const double diag = a[k * p + k];
        det *= diag;
        for (std::size_t i = k + 1; i < p; ++i) {
            const double factor = a[i * p + k] / diag;
            for (std::size_t j = k + 1; j < p; ++j) a[i * p + j] -= factor * a[k * p + j];
        }
    }
    return det;
}

CovarianceMatrix build_cov_matrix(const DriftSpec& spec, std::span<const double> times) {
    require_grid(times);
    const std::size_t p = times.size();
    std::vector<double> var(p);
    for (std::size_t i = 0; i < p; ++i) var[i] = variance(spec, times[i]);
    std::vector<double> entries(p * p);
    for (std::size_t i = 0; i < p; ++i) {
        entries[i * p + i] = var[i];
        for (std::size_t j = i + 1; j < p; ++j) {
            const double c = std::exp(-drift_integral(spec, times[i], times[j])) * var[i];
            entries[i * p + j] = c;
            entries[j * p + i] = c;
        }
    }
    return CovarianceMatrix({times.begin(), times.end()}, std::move(entries));
}

double det_by_conditioning(const DriftSpec& spec, std::span<const double> times) {
    require_grid(times);
    double det = variance(spec, times[0]);
    for (std::size_t k = 1; k < times.size(); ++k) {
        det *= conditional_variance(spec, times[k - 1], times[k]);
    }
    return det;
}

DetBounds det_bounds(const DriftSpec& spec, std::span<const double> times) {
    require_grid(times);
    DetBounds b;
    b.upper = times[0];
    for (std::size_t k = 1; k < times.size(); ++k) b.upper *= times[k] - times[k - 1];
    const double last = times.back();
    b.lower = b.upper * std::exp(-2.0 * running_sup(spec, last) * last);
    b.det = det_by_conditioning(spec, times);
    b.holds = b.lower <= b.det + kDetBoundSlack && b.det <= b.upper + kDetBoundSlack;
    return b;
}

double abs_moment(double sigma_sq, int m) {
    if (!(sigma_sq >= 0.0)) throw DomainError("sigma_sq must be >= 0");
    if (m < 1) throw DomainError("moment order must be >= 1");
    if (m % 2 == 1) return 0.0;
    // (2n)! / (2^n n!) = (2n - 1)!!
    double value = 1.0;
    for (int k = m - 1; k > 1; k -= 2) value *= k;
    return value * std::pow(sigma_sq, m / 2);
}

double localtime_second_moment(const DriftSpec& spec, double t, double eps, double theta) {
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    if (!(eps >= 0.0) || !(theta >= 0.0)) throw DomainError("eps and theta must be >= 0");

    const quad::Tolerance inner_tol{1e-14, 1e-8, 40};
    const quad::Tolerance outer_tol{1e-14, 1e-7, 40};
    bool converged = true;

    const auto inner = [&](double s) {
        const double var_s = variance(spec, s);
        const auto integrand = [&](double phi) {
            const double sn = std::sin(phi);
            const double r = s * sn * sn;
            const double var_r = variance(spec, r);
            const double cond = conditional_variance(spec, r, s);
            const double det = var_r * cond + theta * var_r + eps * var_s + eps * theta;
            if (!(det > 0.0)) return 0.0;
            return s * std::sin(2.0 * phi) / std::sqrt(det);
        };
        const quad::Result res = quad::adaptive(integrand, 0.0, std::numbers::pi / 2, inner_tol);
        converged = converged && res.converged;
        return res.value;
    };
    // Outer variable s = t u^2.
    const auto outer_integrand = [&](double u) { return 2.0 * t * u * inner(t * u * u); };
    const quad::Result outer = quad::adaptive(outer_integrand, 0.0, 1.0, outer_tol);
    const double value = outer.value / std::numbers::pi;
    if (!(converged && outer.converged)) {
        throw NumericError("local-time second moment quadrature did not converge", value,
                           outer.error / std::numbers::pi);
    }
    return value;
}

}  // namespace bridgelab::law
