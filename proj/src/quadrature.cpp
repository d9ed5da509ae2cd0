#include "bridgelab/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "bridgelab/errors.hpp"

namespace bridgelab::quad {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980221191, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    int depth;
};

}  // namespace

Result gauss_kronrod21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    Result r;
    r.value = kronrod * half;
    r.error = std::abs((kronrod - gauss) * half);
    r.evaluations = 21;
    return r;
}

Result adaptive(const Integrand& f, double a, double b, const Tolerance& tol) {
    Result total;
    if (a == b) return total;
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw DomainError("quadrature limits must be finite");
    }
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);
    const double length = b - a;

    std::vector<Panel> stack{{a, b, 0}};
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const Result r = gauss_kronrod21(f, p.a, p.b);
        total.evaluations += r.evaluations;
        if (!std::isfinite(r.value)) {
            throw NumericError("non-finite integrand value", r.value, r.error);
        }
        const double share = (p.b - p.a) / length;
        const double allowed = std::max(tol.abs * share, tol.rel * std::abs(r.value));
        const double mid = 0.5 * (p.a + p.b);
        const bool resolvable = mid > p.a && mid < p.b;
        if (r.error <= allowed || !resolvable || p.depth >= tol.max_depth) {
            if (r.error > allowed) total.converged = false;
            total.value += r.value;
            total.error += r.error;
            continue;
        }
        stack.push_back({mid, p.b, p.depth + 1});
        stack.push_back({p.a, mid, p.depth + 1});
    }
    total.value *= sign;
    return total;
}

Result adaptive_pieces(const Integrand& f, std::span<const double> breakpoints,
                       const Tolerance& tol) {
    Result total;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const Result r = adaptive(f, breakpoints[i - 1], breakpoints[i], tol);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

Result adaptive_toward_upper(const Integrand& f, double a, double b, double width,
                             const Tolerance& tol) {
    if (!(b > a)) return adaptive(f, a, b, tol);
    std::vector<double> points{b};
    if (width > 0.0 && std::isfinite(width)) {
        for (double w = width; b - w > a; w *= 2.0) points.push_back(b - w);
    }
    points.push_back(a);
    std::vector<double> ascending(points.rbegin(), points.rend());
    return adaptive_pieces(f, ascending, tol);
}

double integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
    const Result r = adaptive(f, a, b, tol);
    if (!r.converged) {
        throw NumericError("adaptive quadrature did not converge", r.value, r.error);
    }
    return r.value;
}

}  // namespace bridgelab::quad
