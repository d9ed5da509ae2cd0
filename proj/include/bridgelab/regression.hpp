#pragma once

#include <span>

namespace bridgelab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Requires at least two
/// distinct x values.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace bridgelab
