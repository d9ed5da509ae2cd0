#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bridgelab/errors.hpp"
#include "bridgelab/holder.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/rng.hpp"
#include "bridgelab/simulate.hpp"

using namespace bridgelab;
using holder::LogLogFit;
using holder::ModulusProfile;

namespace {

std::vector<std::pair<double, double>> sample(double (*f)(double), int coarse = 4, int fine = 16) {
    std::vector<std::pair<double, double>> pts;
    for (double e : holder::dyadic_scales(coarse, fine)) pts.emplace_back(e, f(e));
    return pts;
}

LocalTimeCurve curve_of(double (*f)(double), std::size_t n, double T = 1.0) {
    LocalTimeCurve c;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = T * static_cast<double>(k) / static_cast<double>(n);
        c.checkpoints.push_back(t);
        c.values.push_back(f(t));
    }
    return c;
}

double brute_oscillation(const std::vector<double>& v, std::size_t lag) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i; j < v.size() && j <= i + lag; ++j) best = std::max(best, std::abs(v[i] - v[j]));
    return best;
}

}  // namespace

TEST(LogLog, Examples) {
    const LogLogFit root = holder::loglog_slope(sample([](double e) { return std::sqrt(e); }));
    EXPECT_NEAR(root.slope, 0.5, 1e-12);
    EXPECT_NEAR(root.intercept, 0.0, 1e-11);

    const LogLogFit linear = holder::loglog_slope(sample([](double e) { return 3.0 * e; }));
    EXPECT_NEAR(linear.slope, 1.0, 1e-12);
    EXPECT_NEAR(linear.intercept, std::log(3.0), 1e-11);
    EXPECT_EQ(linear.used, 13u);
    EXPECT_FALSE(linear.dropped_zeros);
}

TEST(LogLog, LogarithmicCorrectionLowersSlope) {
    const auto pts = sample([](double e) { return std::sqrt(e * std::log(1.0 / e)); }, 6, 14);
    // Independent least-squares oracle.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [e, v] : pts) {
        const double x = std::log(e), y = std::log(v);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double oracle = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const LogLogFit fit = holder::loglog_slope(pts);
    EXPECT_NEAR(fit.slope, oracle, 1e-12);
    EXPECT_NEAR(fit.slope, 0.4248, 5e-4);
    EXPECT_GT(fit.slope, 0.40);
    EXPECT_LT(fit.slope, 0.45);
}

TEST(LogLog, ZerosAndTooFewPoints) {
    std::vector<std::pair<double, double>> pts{{0.5, 0.0}, {0.25, 0.5}, {0.125, 0.25}, {0.0625, 0.125}};
    const LogLogFit fit = holder::loglog_slope(pts);
    EXPECT_TRUE(fit.dropped_zeros);
    EXPECT_EQ(fit.used, 3u);
    EXPECT_NEAR(fit.slope, 1.0, 1e-12);

    pts[1].second = 0.0;
    EXPECT_THROW(holder::loglog_slope(pts), InsufficientDataError);
    const std::vector<std::pair<double, double>> two{{0.5, 1.0}, {0.25, 0.5}};
    EXPECT_THROW(holder::loglog_slope(two), InsufficientDataError);
    const std::vector<std::pair<double, double>> bad{{-0.5, 1.0}, {0.25, 0.5}, {0.1, 0.2}};
    EXPECT_THROW(holder::loglog_slope(bad), DomainError);
}

TEST(WindowOscillation, MatchesBruteForce) {
    const rng::UniformStream u(5, 0);
    std::vector<double> v(300);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u(i) - 0.5 + 0.01 * static_cast<double>(i % 17);
    for (std::size_t lag : {0u, 1u, 2u, 7u, 64u, 299u, 500u}) {
        EXPECT_DOUBLE_EQ(holder::window_oscillation(v, lag), brute_oscillation(v, lag)) << lag;
    }
}

TEST(TimeModulus, DeterministicCurves) {
    const auto scales = holder::dyadic_scales(2, 10);
    const ModulusProfile lin = holder::time_modulus(curve_of([](double t) { return t; }, 1024), scales);
    EXPECT_TRUE(lin.fit_ok);
    EXPECT_NEAR(lin.fitted_slope, 1.0, 1e-9);
    for (std::size_t i = 0; i < scales.size(); ++i) EXPECT_NEAR(lin.sup_increments[i], scales[i], 1e-12);

    const ModulusProfile root = holder::time_modulus(curve_of([](double t) { return std::sqrt(t); }, 1024), scales);
    EXPECT_NEAR(root.fitted_slope, 0.5, 1e-9);

    const ModulusProfile flat = holder::time_modulus(curve_of([](double) { return 2.0; }, 1024), scales);
    EXPECT_FALSE(flat.fit_ok);
    EXPECT_TRUE(std::isnan(flat.fitted_slope));
    for (double v : flat.sup_increments) EXPECT_EQ(v, 0.0);
}

TEST(TimeModulus, Invariances) {
    const SamplePath p = euler_path(DriftSpec::power(0.8), 1.0, 1.0 / 4096, 3, 0);
    const LocalTimeCurve c = kernel_estimate_on_grid(p, 0.0, 1.0 / 4096);
    const auto scales = holder::dyadic_scales(3, 11);
    const ModulusProfile base = holder::time_modulus(c, scales);

    LocalTimeCurve shifted = c, scaled = c;
    for (double& v : shifted.values) v += 7.0;
    for (double& v : scaled.values) v *= 3.0;
    const ModulusProfile ps = holder::time_modulus(shifted, scales);
    const ModulusProfile pm = holder::time_modulus(scaled, scales);
    EXPECT_NEAR(ps.fitted_slope, base.fitted_slope, 1e-9);
    EXPECT_NEAR(pm.fitted_slope, base.fitted_slope, 1e-9);
    EXPECT_NEAR(pm.fitted_intercept, base.fitted_intercept + std::log(3.0), 1e-9);

    // omega(2 eta) <= 2 omega(eta), omega nondecreasing.
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        EXPECT_LE(base.sup_increments[i], 2.0 * base.sup_increments[i + 1] * (1 + 1e-12));
        EXPECT_GE(base.sup_increments[i], base.sup_increments[i + 1]);
    }
}

TEST(TimeModulus, RejectsBadScales) {
    const LocalTimeCurve c = curve_of([](double t) { return t; }, 100);
    EXPECT_THROW(holder::time_modulus(c, {0.1, 0.001}), DomainError);
    EXPECT_THROW(holder::time_modulus(c, {0.01, 0.1}), DomainError);
    LocalTimeCurve uneven = c;
    uneven.checkpoints[3] += 0.004;
    EXPECT_THROW(holder::time_modulus(uneven, {0.1, 0.05, 0.02}), DomainError);
}

TEST(TimeModulus, BridgeSlopeNearHalf) {
    const double h = std::ldexp(1.0, -16);
    double slope = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) {
        const SamplePath p = euler_path(DriftSpec::power(0.8), 1.0, h, 42, i);
        const LocalTimeCurve c = kernel_estimate_on_grid(p, 0.0, holder::default_time_modulus_eps(h));
        slope += holder::time_modulus(c, holder::dyadic_scales(6, 14)).fitted_slope / 4;
    }
    EXPECT_GE(slope, 0.4);
    EXPECT_LE(slope, 0.6);
    EXPECT_EQ(holder::default_time_modulus_eps(h), h / 4);
}

TEST(BoundFit, DeterministicCurves) {
    EXPECT_EQ(holder::time_modulus_bound_fit(curve_of([](double) { return 1.0; }, 1024), 1.0, DriftSpec::constant(1.0)),
              0.0);

    // Oracle: direct maximization over dyadic lags and all pair starts.
    const std::size_t n = 1024;
    const LocalTimeCurve root = curve_of([](double t) { return std::sqrt(t); }, n);
    double oracle = 0.0;
    for (std::size_t lag = 1; lag < n; lag *= 2) {
        const double eta = static_cast<double>(lag) / n;
        const double bracket = std::sqrt(eta) * std::sqrt(2.0) + std::sqrt(eta * std::log(1.0 / eta));
        for (std::size_t i = 0; i + lag <= n; ++i)
            oracle = std::max(oracle, (std::sqrt(static_cast<double>(i + lag) / n) - std::sqrt(static_cast<double>(i) / n)) / bracket);
    }
    const double fitted = holder::time_modulus_bound_fit(root, 1.0, DriftSpec::constant(1.0));
    EXPECT_NEAR(fitted, oracle, 1e-12);
    EXPECT_LE(fitted, 1.0 / std::sqrt(2.0));
    EXPECT_THROW(holder::time_modulus_bound_fit(root, 0.0, DriftSpec::constant(1.0)), DomainError);
}

TEST(BoundFit, UsesOnlyPairsInsideHorizon) {
    const DriftSpec spec = DriftSpec::power(2.0);
    const double h = 1.0 / 4096;
    const SamplePath p = euler_path(spec, 4.0, h, 8, 0);
    const LocalTimeCurve full = kernel_estimate_on_grid(p, 0.0, h / 4);
    LocalTimeCurve prefix = full;
    const std::size_t keep = 2 * 4096 + 1;
    prefix.checkpoints.resize(keep);
    prefix.values.resize(keep);
    const double a = holder::time_modulus_bound_fit(full, 2.0, spec);
    const double b = holder::time_modulus_bound_fit(prefix, 2.0, spec);
    EXPECT_DOUBLE_EQ(a, b);
    EXPECT_GT(a, 0.0);
    EXPECT_TRUE(std::isfinite(a));
}

TEST(BoundFit, ConstantStableAcrossHorizons) {
    const DriftSpec spec = DriftSpec::power(0.8);
    const double h = std::ldexp(1.0, -14);
    const auto mean_c = [&](double T) {
        double c = 0.0;
        for (std::uint64_t i = 0; i < 8; ++i) {
            const LocalTimeCurve curve = kernel_estimate_on_grid(euler_path(spec, T, h, 77, i), 0.0, h / 4);
            c += holder::time_modulus_bound_fit(curve, T, spec) / 8;
        }
        return c;
    };
    const double c2 = mean_c(2.0), c8 = mean_c(8.0);
    EXPECT_LE(std::max(c2, c8) / std::min(c2, c8), 2.0) << c2 << " " << c8;
}

TEST(SpaceModulus, SmoothProfileHasSlopeOne) {
    holder::SpaceSweepParams params;
    params.h = 0.01;
    params.eps = 0.25;
    params.noise = [](std::size_t) { return 0.0; };
    params.scales = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    const ModulusProfile m = holder::space_modulus(DriftSpec::power(1.0), 1.0, LevelGrid{-1.0, 1.0 / 128, 257}, params, 2);
    EXPECT_TRUE(m.fit_ok);
    EXPECT_NEAR(m.fitted_slope, 1.0, 0.05);
}

TEST(SpaceModulus, RoughProfilesNearHalf) {
    holder::SpaceSweepParams params;
    params.h = std::ldexp(1.0, -16);
    params.seed = 5;
    const LevelGrid levels{-1.0, 1.0 / 128, 257};
    for (const DriftSpec& spec : {DriftSpec::power(0.8), DriftSpec::brownian()}) {
        const ModulusProfile m = holder::space_modulus(spec, 1.0, levels, params, 8);
        EXPECT_GE(m.fitted_slope, 0.35);
        EXPECT_LE(m.fitted_slope, 0.6);
        EXPECT_EQ(m.scales.size(), 7u);
    }
}

TEST(SpaceModulus, Preconditions) {
    holder::SpaceSweepParams params;
    params.h = 0.01;
    EXPECT_THROW(holder::space_modulus(DriftSpec::brownian(), 1.0, LevelGrid{-1.0, 0.5, 5}, params, 1), DomainError);
    EXPECT_THROW(holder::space_modulus(DriftSpec::brownian(), 1.0, LevelGrid{}, params, 0), DomainError);
}

TEST(SpaceModulus, ThreadIndependent) {
    holder::SpaceSweepParams params;
    params.h = 1.0 / 1024;
    params.seed = 9;
    params.threads = 1;
    const ModulusProfile a = holder::space_modulus(DriftSpec::power(0.8), 1.0, LevelGrid{}, params, 6);
    params.threads = 3;
    const ModulusProfile b = holder::space_modulus(DriftSpec::power(0.8), 1.0, LevelGrid{}, params, 6);
    EXPECT_EQ(a.sup_increments, b.sup_increments);
}
