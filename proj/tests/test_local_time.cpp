#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bridgelab/errors.hpp"
#include "bridgelab/local_time.hpp"
#include "bridgelab/simulate.hpp"

using namespace bridgelab;

namespace {

SamplePath zero_path(double h, std::size_t steps) {
    return SamplePath::from_values(h, std::vector<double>(steps + 1, 0.0), std::vector<double>(steps, 0.0));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Kernel, ZeroPathGivesPeakDensity) {
    const double eps = 0.01;
    const auto c = kernel_estimate(zero_path(0.01, 100), 0.0, eps, {1.0});
    EXPECT_NEAR(c.values[0], 1.0 / std::sqrt(2 * std::numbers::pi * eps), 1e-12);
    EXPECT_EQ(c.estimator, Estimator::kernel);
    EXPECT_EQ(*c.smoothing, eps);
}

TEST(Kernel, FarLevelIsNegligible) {
    const SamplePath p = euler_path(DriftSpec::power(2.0), 1.0, 0.001, 1, 0);
    double top = 0;
    for (double v : p.values) top = std::max(top, std::abs(v));
    ASSERT_LT(top, 3.0);
    EXPECT_LT(kernel_estimate(p, 10.0, 0.01, {1.0}).values[0], 1e-8);
}

TEST(Kernel, BrownianMeanMatchesExactExpectation) {
    // For BM on the grid, E p_eps(X_{t_k}) = p_{eps + t_k}(0), so the mean of
    // the trapezoid estimator is a deterministic sum.
    const double eps = 1e-4, h = 1e-4;
    const std::size_t n = 2000, steps = 10000;
    double oracle = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double w = (k == 0 || k == steps) ? 0.5 * h : h;
        oracle += w / std::sqrt(2 * std::numbers::pi * (eps + static_cast<double>(k) * h));
    }
    double s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double L = kernel_estimate(euler_path(DriftSpec::brownian(), 1.0, h, 4, i), 0.0, eps, {1.0}).values[0];
        s1 += L;
        s2 += L * L;
    }
    const double mean = s1 / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, oracle, 4 * se);
    EXPECT_NEAR(mean, std::sqrt(2 / std::numbers::pi), 0.03);
}

TEST(Kernel, CheckpointErrors) {
    const SamplePath p = zero_path(0.1, 10);
    EXPECT_THROW(kernel_estimate(p, 0.0, 0.01, {1.5}), DomainError);
    EXPECT_THROW(kernel_estimate(p, 0.0, 0.01, {0.5, 0.2}), DomainError);
    EXPECT_THROW(kernel_estimate(p, 0.0, 0.0, {0.5}), DomainError);
}

TEST(Kernel, InterpolatesBetweenGridPoints) {
    const SamplePath p = euler_path(DriftSpec::power(1.0), 1.0, 0.1, 2, 0);
    const auto c = kernel_estimate(p, 0.0, 0.05, {0.3, 0.35, 0.4});
    EXPECT_NEAR(c.values[1], 0.5 * (c.values[0] + c.values[2]), 1e-14);
}

TEST(Kernel, AdditiveOverIntervals) {
    const DriftSpec spec = DriftSpec::power(0.8);
    const SamplePath p = euler_path(spec, 2.0, 0.001, 6, 0);
    const double eps = 0.001;
    const auto c = kernel_estimate(p, 0.0, eps, {0.7, 2.0});
    double piece = 0.0;
    for (std::size_t k = 700; k < 2000; ++k)
        piece += 0.5 * 0.001 * (heat_kernel(p.values[k], eps) + heat_kernel(p.values[k + 1], eps));
    EXPECT_NEAR(c.values[1], c.values[0] + piece, 1e-11);
}

TEST(Kernel, TranslationInvariant) {
    const SamplePath p = euler_path(DriftSpec::power(0.8), 1.0, 0.001, 8, 0);
    SamplePath shifted = p;
    for (double& v : shifted.values) v -= 0.2;
    const auto a = kernel_estimate(p, 0.2, 0.001, {0.5, 1.0});
    const auto b = kernel_estimate(shifted, 0.0, 0.001, {0.5, 1.0});
    EXPECT_DOUBLE_EQ(a.values[0], b.values[0]);
    EXPECT_DOUBLE_EQ(a.values[1], b.values[1]);
}

TEST(Estimators, MonotoneAndNonnegative) {
    std::vector<double> cps;
    for (int k = 0; k <= 50; ++k) cps.push_back(k * 0.02);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SamplePath p = euler_path(DriftSpec::power(0.8), 1.0, 0.001, seed, 0);
        for (const auto& c : {kernel_estimate(p, 0.1, 1e-3, cps), kernel_estimate(p, -0.3, 1e-2, cps),
                              binned_estimate(p, 0.0, 0.05, cps), binned_estimate(p, 0.2, 0.01, cps)}) {
            EXPECT_GE(c.values.front(), 0.0);
            for (std::size_t i = 1; i < c.values.size(); ++i) EXPECT_GE(c.values[i], c.values[i - 1]);
        }
    }
}

TEST(Binned, Examples) {
    EXPECT_NEAR(binned_estimate(zero_path(0.01, 100), 0.0, 0.1, {1.0}).values[0], 5.0, 1e-12);
    std::vector<double> line(10001);
    for (std::size_t k = 0; k < line.size(); ++k) line[k] = static_cast<double>(k) * 1e-4;
    const auto c = binned_estimate(SamplePath::from_values(1e-4, line), 0.5, 0.1, {1.0});
    EXPECT_NEAR(c.values[0], 1.0, 1e-3);
    EXPECT_EQ(c.estimator, Estimator::binned);
}

TEST(Binned, AgreesWithKernelOnBridgePath) {
    const DriftSpec spec = DriftSpec::power(0.8);
    const SamplePath p = euler_path(spec, 5.0, 1e-4, 11, 0);
    const double k = kernel_estimate(p, 0.0, 1e-3, {5.0}).values[0];
    const double b = binned_estimate(p, 0.0, 0.05, {5.0}).values[0];
    ASSERT_GE(k, 0.1);
    EXPECT_LT(rel(k, b), 0.1) << k << " " << b;
}

TEST(Tanaka, PathAwayFromLevelGivesZero) {
    const DriftSpec spec = DriftSpec::power(0.8);
    const double h = 1e-3;
    const SamplePath p = euler_path(spec, 1.0, h, 2, 0);
    const auto c = tanaka_estimate(p, spec, -10.0, {0.5, 1.0});
    EXPECT_LT(std::abs(c.values[1]), 3 * std::sqrt(h));
    EXPECT_LT(std::abs(c.values[1]), 1e-12);
    EXPECT_EQ(c.estimator, Estimator::tanaka);
    EXPECT_FALSE(c.smoothing.has_value());
}

TEST(Tanaka, ZeroNoisePath) {
    const auto c = tanaka_estimate(zero_path(0.01, 100), DriftSpec::power(1.0), 1.0, {1.0});
    EXPECT_EQ(c.values[0], 0.0);
}

TEST(Tanaka, RejectsExactPaths) {
    const SamplePath p = exact_path(DriftSpec::power(1.0), 1.0, 0.01, 0, 0);
    EXPECT_THROW(tanaka_estimate(p, DriftSpec::power(1.0), 0.0, {1.0}), UnsupportedSchemeError);
}

TEST(Tanaka, AgreesWithKernelAndBinned) {
    const DriftSpec spec = DriftSpec::power(0.8);
    double k = 0, b = 0, t = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const SamplePath p = euler_path(spec, 1.0, 1e-4, 12, i);
        k += kernel_estimate(p, 0.0, 1e-3, {1.0}).values[0] / 20;
        b += binned_estimate(p, 0.0, 0.05, {1.0}).values[0] / 20;
        t += tanaka_estimate(p, spec, 0.0, {1.0}).values[0] / 20;
    }
    ASSERT_GE((k + b + t) / 3, 0.1);
    EXPECT_LT(rel(k, t), 0.1) << k << " " << t;
    EXPECT_LT(rel(b, t), 0.1) << b << " " << t;
    EXPECT_LT(rel(k, b), 0.1);
}

TEST(LevelSweep, MatchesPerLevelKernel) {
    const SamplePath p = euler_path(DriftSpec::power(0.8), 1.0, 1e-3, 3, 0);
    const LevelGrid levels{-1.0, 1.0 / 16, 33};
    const auto sweep = kernel_level_sweep(p, levels, 1e-3, p.steps());
    for (std::size_t i = 0; i < levels.count; ++i) {
        const double direct = kernel_estimate(p, levels.level(i), 1e-3, {1.0}).values[0];
        EXPECT_NEAR(sweep[i], direct, 1e-12 * std::max(1.0, direct)) << i;
    }
    for (double v : kernel_level_sweep(p, levels, 1e-3, 0)) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(kernel_level_sweep(p, levels, 1e-3, p.steps() + 1), DomainError);
}

TEST(SecondMoment, MonteCarloNearOne) {
    const std::size_t n = 5000;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double L = kernel_estimate(euler_path(DriftSpec::brownian(), 1.0, 1e-4, 21, i), 0.0, 1e-4, {1.0}).values[0];
        s += L * L;
    }
    EXPECT_NEAR(s / n, 1.0, 0.1);
}

TEST(Cauchy, LadderDecreases) {
    const auto d = cauchy_diagnostic(DriftSpec::brownian(), 0.0, 1.0, {1e-1, 1e-2, 1e-3, 1e-4}, 500, 5);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_GT(d[0], d[1]);
    EXPECT_GT(d[1], d[2]);
}

TEST(Cauchy, EdgeCases) {
    EXPECT_TRUE(cauchy_diagnostic(DriftSpec::brownian(), 0.0, 1.0, {1e-2}, 500, 0).empty());
    const auto huge = cauchy_diagnostic(DriftSpec::brownian(), 0.0, 1.0, {1e6, 5e5}, 500, 0, {Scheme::euler, 0.01, 0});
    EXPECT_LT(huge[0], 1e-6);
    EXPECT_THROW(cauchy_diagnostic(DriftSpec::brownian(), 0.0, 1.0, {1e-2, 1e-3}, 100, 0), DomainError);
    EXPECT_THROW(cauchy_diagnostic(DriftSpec::brownian(), 0.0, 1.0, {1e-3, 1e-2}, 500, 0), DomainError);
}

TEST(Growth, PowerThreeIncreasing) {
    std::vector<int> horizons;
    for (int n = 2; n <= 20; ++n) horizons.push_back(n);
    const GrowthProbe g = growth_probe(DriftSpec::power(3.0), 0.0, horizons, 1e-3, 200, 9);
    EXPECT_TRUE(g.strictly_increasing);
    EXPECT_GT(g.fitted_exponent, 0.5);
    EXPECT_DOUBLE_EQ(g.conjectured_exponent, 1.5);
    EXPECT_EQ(g.horizons.size(), horizons.size());
}

TEST(Growth, BrownianSquareRootGrowth) {
    std::vector<int> horizons;
    for (int n = 1; n <= 16; ++n) horizons.push_back(n);
    const GrowthProbe g = growth_probe(DriftSpec::brownian(), 0.0, horizons, 1e-3, 400, 10);
    EXPECT_NEAR(g.fitted_exponent, 0.5, 0.08);
    EXPECT_TRUE(std::isnan(g.conjectured_exponent));
    EXPECT_NEAR(g.mean_local_time.back(), std::sqrt(2 * 16 / std::numbers::pi), 5 * g.std_err.back() + 0.05);
}
