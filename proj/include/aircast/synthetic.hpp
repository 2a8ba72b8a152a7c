#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/rng.hpp"

namespace aircast {

/// Generating coefficients behind a synthetic dataset, in raw units
/// (millions of RPKs per unit of each predictor).
struct TrueCoefficients {
    double intercept = 0.0;
    std::vector<double> coef;  // aligned with default_schema() order
    double noise_sd = 0.0;
};

/// Stand-in for the unpublished quarterly series: six smooth trending
/// economic columns, four event dummies, and a target that is a known linear
/// combination plus Gaussian noise. Deterministic for a given (n, seed,
/// noise_sd).
inline std::pair<Dataset, TrueCoefficients> synthesize(std::size_t n, std::uint64_t seed,
                                                       double noise_sd) {
    if (n < 4) throw BadConfig("synthesize: need at least 4 rows");
    if (noise_sd < 0.0) throw BadConfig("synthesize: noise_sd must be non-negative");

    Rng rng(seed);
    auto specs = default_schema();
    const std::size_t p = specs.size();
    Mat x(n, p);

    // Trends carry distinct seasonal components (different periods and
    // phases) so the scaled design stays well conditioned.
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i);
        x(i, 0) = 225.0 - 1.1 * t + 14.0 * std::sin(0.5 * t + 0.3) + 2.0 * rng.gaussian();
        x(i, 1) = 55.0 + 0.42 * t + 3.5 * std::sin(0.23 * t + 1.1) + 0.5 * rng.gaussian();
        x(i, 2) = 630.0 - 1.4 * t + 30.0 * std::sin(0.7 * t + 2.0) + 4.0 * rng.gaussian();
        x(i, 3) = 5.4 + 1.6 * std::sin(0.11 * t + 0.7) + 0.15 * rng.gaussian();
        x(i, 4) = 48.0 + 1.05 * t + 16.0 * std::sin(0.9 * t + 2.4) + 2.5 * rng.gaussian();
        x(i, 5) = 182.0 + 0.85 * t + 9.0 * std::sin(1.7 * t + 0.2) + 1.0 * rng.gaussian();
    }

    // Event windows, placed at fixed fractions of the sample so they stay
    // non-degenerate for any n >= 4.
    auto window = [n](double lo_frac, double hi_frac, std::size_t i) {
        auto lo = static_cast<std::size_t>(std::ceil(lo_frac * static_cast<double>(n)));
        auto hi = static_cast<std::size_t>(std::floor(hi_frac * static_cast<double>(n)));
        return i >= lo && i <= hi;
    };
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 6) = window(0.14, 0.23, i) ? 1.0 : 0.0;   // d911
        x(i, 7) = window(0.50, 0.97, i) ? 1.0 : 0.0;   // dvirgin
        x(i, 8) = window(0.04, 0.12, i) ? 1.0 : 0.0;   // dolympics
        x(i, 9) = window(0.55, 0.65, i) ? 1.0 : 0.0;   // dcommgames
    }

    TrueCoefficients truth;
    truth.intercept = 5200.0;
    truth.coef = {-6.5, 48.0, -2.2, -85.0, -9.5, 7.4, -320.0, 240.0, 180.0, 95.0};
    truth.noise_sd = noise_sd;

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = truth.intercept;
        for (std::size_t j = 0; j < p; ++j) v += truth.coef[j] * x(i, j);
        y[i] = v + noise_sd * rng.gaussian();
    }

    return {make_dataset(std::move(x), std::move(y), std::move(specs)), truth};
}

}  // namespace aircast
