#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/split.hpp"

namespace aircast {

/// Ordinary-least-squares model in raw predictor units.
struct MlrModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    double condition_estimate = 0.0;
};

/// OLS over the training rows. The design is standardized internally before
/// the pivoted-QR solve (stability on strongly scaled economic columns) and
/// the solution is mapped back to raw units.
inline MlrModel fit_mlr(const Dataset& ds, const SplitPlan& plan) {
    const auto& tr = plan.train_idx;
    const std::size_t n = tr.size(), p = ds.n_features();
    if (n <= p + 1)
        throw TooFewRows("fit_mlr: need more than " + std::to_string(p + 1) +
                         " training rows, got " + std::to_string(n));

    // Internal z-scoring; constant columns pass through so that rank detection
    // still sees the collinearity with the intercept.
    std::vector<double> mean(p, 0.0), sd(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        double m = 0.0;
        for (std::size_t i : tr) m += ds.predictors(i, j);
        m /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i : tr) {
            double d = ds.predictors(i, j) - m;
            ss += d * d;
        }
        double s = std::sqrt(ss / static_cast<double>(n > 1 ? n - 1 : 1));
        if (s > 0.0) {
            mean[j] = m;
            sd[j] = s;
        }
    }

    Mat design(n, p + 1);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        design(r, 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j)
            design(r, j + 1) = (ds.predictors(tr[r], j) - mean[j]) / sd[j];
        y[r] = ds.target[tr[r]];
    }

    auto ls = least_squares(design, y);  // throws RankDeficient when rank < p+1

    MlrModel m;
    m.coefficients.resize(p);
    m.intercept = ls.coef[0];
    for (std::size_t j = 0; j < p; ++j) {
        m.coefficients[j] = ls.coef[j + 1] / sd[j];
        m.intercept -= ls.coef[j + 1] * mean[j] / sd[j];
    }
    m.condition_estimate = ls.condition;
    return m;
}

inline double predict_mlr(const MlrModel& m, const std::vector<double>& x) {
    if (x.size() != m.coefficients.size())
        throw DimensionMismatch("predict_mlr: feature vector length " +
                                std::to_string(x.size()) + " != " +
                                std::to_string(m.coefficients.size()));
    return m.intercept + dot(m.coefficients, x);
}

inline std::string serialize(const MlrModel& m) {
    std::ostringstream out;
    char buf[64];
    out << "model mlr\n";
    std::snprintf(buf, sizeof buf, "%.17g", m.intercept);
    out << "intercept " << buf << "\n";
    out << "coefficients";
    for (double c : m.coefficients) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out << ' ' << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "%.6g", m.condition_estimate);
    out << "condition " << buf << "\n";
    return out.str();
}

}  // namespace aircast
