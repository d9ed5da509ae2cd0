#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bridgelab::quad {

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-10;
    int max_depth = 60;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Single 21-point Gauss-Kronrod panel on [a, b]. The error is |K21 - G10|.
Result gauss_kronrod21(const Integrand& f, double a, double b);

/// Adaptive bisection of Gauss-Kronrod panels. Each panel must meet
/// max(abs, rel*|local|) scaled by its share of the interval; panels at
/// max_depth are accepted and flagged non-converged.
Result adaptive(const Integrand& f, double a, double b, const Tolerance& tol = {});

/// Integrates over consecutive breakpoints a = p0 < p1 < ... < pn = b,
/// running `adaptive` on each piece.
Result adaptive_pieces(const Integrand& f, std::span<const double> breakpoints,
                       const Tolerance& tol = {});

/// Integrand concentrated in a boundary layer of width `width` at the upper
/// limit b. Breakpoints are laid geometrically: b - width, b - 2 width,
/// b - 4 width, ..., down to a, so no panel hides the layer from the rule.
Result adaptive_toward_upper(const Integrand& f, double a, double b, double width,
                             const Tolerance& tol = {});

/// Same as `adaptive` but throws NumericError when any panel fails to converge.
double integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

}  // namespace bridgelab::quad
