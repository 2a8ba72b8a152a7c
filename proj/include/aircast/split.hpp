#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "aircast/errors.hpp"
#include "aircast/rng.hpp"

namespace aircast {

enum class SplitMode { random, chronological };

/// Disjoint index partition shared by every model in a run.
struct SplitPlan {
    std::vector<std::size_t> train_idx, test_idx, valid_idx;

    bool operator==(const SplitPlan&) const = default;
};

namespace detail {

// Largest-remainder allocation: floor(n*p_i) each, leftover rows go to the
// sets with the biggest fractional parts (earlier set wins ties).
inline std::array<std::size_t, 3> allocate_sizes(std::size_t n,
                                                 const std::array<double, 3>& p) {
    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> frac{};
    std::size_t used = 0;
    for (int i = 0; i < 3; ++i) {
        double exact = static_cast<double>(n) * p[i];
        sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-12));
        frac[i] = exact - static_cast<double>(sizes[i]);
        used += sizes[i];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; used + r < n; ++r) ++sizes[order[r % 3]];
    return sizes;
}

}  // namespace detail

inline SplitPlan make_split(std::size_t n, std::array<double, 3> proportions,
                            std::uint64_t seed, SplitMode mode = SplitMode::random) {
    double sum = proportions[0] + proportions[1] + proportions[2];
    for (double p : proportions)
        if (p < 0.0) throw BadProportions("split proportions must be non-negative");
    if (std::fabs(sum - 1.0) > 1e-9)
        throw BadProportions("split proportions must sum to 1");
    if (n == 0) throw BadProportions("cannot split an empty dataset");

    auto sizes = detail::allocate_sizes(n, proportions);
    if (sizes[0] == 0) throw BadProportions("training proportion allocates zero rows");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (mode == SplitMode::random) {
        Rng rng(seed);
        shuffle(idx, rng);
    }

    SplitPlan plan;
    plan.train_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(sizes[0]));
    plan.test_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(sizes[0]),
                         idx.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]));
    plan.valid_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]),
                          idx.end());
    std::sort(plan.train_idx.begin(), plan.train_idx.end());
    std::sort(plan.test_idx.begin(), plan.test_idx.end());
    std::sort(plan.valid_idx.begin(), plan.valid_idx.end());
    return plan;
}

}  // namespace aircast
