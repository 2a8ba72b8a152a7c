#pragma once

#include <cmath>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/split.hpp"

namespace aircast {

/// Per-column feature standardization plus a min-max target transform, all of
/// it fitted from training rows only. Continuous predictor columns are
/// z-scored; dichotomous columns pass through untouched.
struct Scaler {
    struct Column {
        bool passthrough = false;
        double mean = 0.0;
        double sd = 1.0;
    };
    std::vector<Column> columns;
    double target_min = 0.0;
    double target_max = 1.0;

    std::vector<double> transform_row(const std::vector<double>& x) const {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = columns[j].passthrough ? x[j] : (x[j] - columns[j].mean) / columns[j].sd;
        return out;
    }

    std::vector<double> inverse_row(const std::vector<double>& z) const {
        std::vector<double> out(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            out[j] = columns[j].passthrough ? z[j] : z[j] * columns[j].sd + columns[j].mean;
        return out;
    }

    Mat transform_matrix(const Mat& x) const {
        Mat out(x.rows, x.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t j = 0; j < x.cols; ++j)
                out(i, j) = columns[j].passthrough
                                ? x(i, j)
                                : (x(i, j) - columns[j].mean) / columns[j].sd;
        return out;
    }

    // Target transform maps the training range onto [0, 1]; constant targets
    // map to 0 and invert back to the constant.
    double scale_target(double y) const {
        double d = target_max - target_min;
        return d == 0.0 ? 0.0 : (y - target_min) / d;
    }
    double unscale_target(double s) const {
        double d = target_max - target_min;
        return d == 0.0 ? target_min : target_min + s * d;
    }
    std::vector<double> scale_target(const std::vector<double>& y) const {
        std::vector<double> out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = scale_target(y[i]);
        return out;
    }
};

inline Scaler fit_scaler(const Dataset& ds, const SplitPlan& plan) {
    const auto& tr = plan.train_idx;
    if (tr.size() < 2) throw DataError("fit_scaler: need at least 2 training rows");

    Scaler sc;
    sc.columns.resize(ds.n_features());
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        if (ds.specs[j].kind == VarKind::dichotomous) {
            sc.columns[j].passthrough = true;
            continue;
        }
        double mean = 0.0;
        for (std::size_t i : tr) mean += ds.predictors(i, j);
        mean /= static_cast<double>(tr.size());
        double ss = 0.0;
        for (std::size_t i : tr) {
            double d = ds.predictors(i, j) - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(tr.size() - 1));
        if (sd == 0.0) throw ZeroVarianceColumn(ds.specs[j].name);
        sc.columns[j].mean = mean;
        sc.columns[j].sd = sd;
    }

    sc.target_min = ds.target[tr[0]];
    sc.target_max = ds.target[tr[0]];
    for (std::size_t i : tr) {
        sc.target_min = std::min(sc.target_min, ds.target[i]);
        sc.target_max = std::max(sc.target_max, ds.target[i]);
    }
    return sc;
}

}  // namespace aircast
