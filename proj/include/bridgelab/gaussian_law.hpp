#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bridgelab/drift.hpp"

// Exact second-order law of X_t = int_0^t exp(-(A(t) - A(s))) dW_s.
// Every exponential is formed as exp(-c (A(t) - A(s))) with s <= t, so all
// integrands lie in (0, 1] whatever the size of A.
namespace bridgelab::law {

/// Var(X_t) = int_0^t exp(-2 (A(t) - A(s))) ds.
double variance(const DriftSpec& spec, double t);

/// E(X_s X_t) = exp(-(A(s v t) - A(s ^ t))) Var(X_{s ^ t}).
double covariance(const DriftSpec& spec, double s, double t);

/// Var(X_t | X_s) = int_s^t exp(-2 (A(t) - A(r))) dr for s <= t.
double conditional_variance(const DriftSpec& spec, double s, double t);

struct IncrementVariance {
    double variance = 0.0;  ///< E|X_{t2} - X_{t1}|^2
    double bound = 0.0;     ///< bracket of the increment bound, without its constant
};

/// E|X_{t2} - X_{t1}|^2 together with
/// |t2 - t1|^{2 gamma} [ alpha*(t1 v t2)^{2 gamma} / alpha(t1 ^ t2) + alpha(t1 v t2)^{2 gamma - 1} ].
/// The bound is +inf where alpha vanishes.
IncrementVariance increment_variance(const DriftSpec& spec, double t1, double t2, double gamma);

/// Covariance matrix a_ij = E(X_{u_i} X_{u_j}) on 0 < u_1 < ... < u_p.
class CovarianceMatrix {
public:
    CovarianceMatrix(std::vector<double> times, std::vector<double> entries);

    std::size_t size() const noexcept { return times_.size(); }
    const std::vector<double>& times() const noexcept { return times_; }
    std::span<const double> entries() const noexcept { return entries_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }

    /// Determinant by LU decomposition with partial pivoting.
    double determinant() const;

private:
    std::vector<double> times_;
    std::vector<double> entries_;
};

/// Determinant of a row-major p x p matrix via LU with partial pivoting.
double lu_determinant(std::span<const double> entries, std::size_t p);

CovarianceMatrix build_cov_matrix(const DriftSpec& spec, std::span<const double> times);

/// Var(X_{u_1}) prod_k Var(X_{u_k} | X_{u_{k-1}}); by the Markov property this
/// is the product of conditional variances given the whole past.
double det_by_conditioning(const DriftSpec& spec, std::span<const double> times);

struct DetBounds {
    double lower = 0.0;
    double upper = 0.0;
    double det = 0.0;
    bool holds = false;  ///< lower <= det <= upper up to kDetBoundSlack
};

inline constexpr double kDetBoundSlack = 1e-12;

/// upper = u_1 (u_2 - u_1) ... (u_p - u_{p-1}), lower = upper exp(-2 alpha*(u_p) u_p).
DetBounds det_bounds(const DriftSpec& spec, std::span<const double> times);

/// Signed moment E X^m of N(0, sigma_sq): (2n)! sigma^{2n} / (2^n n!) for
/// m = 2n, zero for odd m.
double abs_moment(double sigma_sq, int m);

/// E(L_{t,eps} L_{t,theta}) at level 0:
/// (1/pi) int_0^t int_0^s det(A_{eps,theta}(s, r))^{-1/2} dr ds with
/// A = [[Var X_s + theta, Cov], [Cov, Var X_r + eps]].
/// The inner integral uses r = s sin^2(phi), which removes the Beta-type
/// endpoint singularities when eps = theta = 0, and the outer integral uses
/// s = t u^2.
///
/// Only level x = 0 is computed; a level x multiplies the integrand by
/// exp(-x^2 1'A^{-1}1 / 2).
double localtime_second_moment(const DriftSpec& spec, double t, double eps, double theta);

}  // namespace bridgelab::law
