#pragma once

// Shared fixtures for the test suite: tiny hand-built datasets and an
// all-rows-training split.

#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/split.hpp"

namespace testutil {

/// Dataset with `p` continuous predictor columns built from a row-major table.
inline aircast::Dataset toy_dataset(const std::vector<std::vector<double>>& rows,
                                    const std::vector<double>& target) {
    const std::size_t n = rows.size(), p = rows.front().size();
    aircast::Mat x(n, p);
    std::vector<aircast::VariableSpec> specs;
    for (std::size_t j = 0; j < p; ++j)
        specs.push_back({"x" + std::to_string(j), aircast::VarKind::continuous, ""});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = rows[i][j];
    return aircast::make_dataset(std::move(x), target, std::move(specs));
}

/// Every row in the training set; test and validation empty.
inline aircast::SplitPlan all_train(std::size_t n) {
    aircast::SplitPlan plan;
    for (std::size_t i = 0; i < n; ++i) plan.train_idx.push_back(i);
    return plan;
}

}  // namespace testutil
