#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/scaler.hpp"
#include "aircast/split.hpp"

namespace aircast {

enum class Activation { tanh_unit, logistic };

struct AnnConfig {
    int hidden = 10;
    int epochs = 2000;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::uint64_t seed = 1;
    int patience = 200;
    Activation activation = Activation::tanh_unit;
};

/// One-hidden-layer perceptron with a linear output unit. Weights live in the
/// scaled space (z-scored inputs, min-max target); predict() undoes both.
struct AnnModel {
    std::size_t inputs = 0, hidden = 0;
    Activation activation = Activation::tanh_unit;
    Mat w1;                    // hidden x inputs
    std::vector<double> b1;    // hidden
    std::vector<double> w2;    // hidden
    double b2 = 0.0;
    std::vector<double> trace;  // training RMSE per executed epoch, scaled units
    Scaler scaling;
};

struct AnnGradient {
    Mat w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

namespace detail {

inline double activate(Activation a, double z) {
    return a == Activation::tanh_unit ? std::tanh(z) : 1.0 / (1.0 + std::exp(-z));
}
inline double activate_deriv(Activation a, double h) {
    // expressed through the activation value
    return a == Activation::tanh_unit ? 1.0 - h * h : h * (1.0 - h);
}

inline double ann_forward_scaled(const AnnModel& m, const std::vector<double>& xs,
                                 std::vector<double>* hidden_out = nullptr) {
    std::vector<double> h(m.hidden);
    for (std::size_t j = 0; j < m.hidden; ++j) {
        double z = m.b1[j];
        for (std::size_t i = 0; i < m.inputs; ++i) z += m.w1(j, i) * xs[i];
        h[j] = activate(m.activation, z);
    }
    double out = m.b2;
    for (std::size_t j = 0; j < m.hidden; ++j) out += m.w2[j] * h[j];
    if (hidden_out) *hidden_out = std::move(h);
    return out;
}

}  // namespace detail

/// Exact gradient of the batch mean squared error with respect to every
/// weight and bias, evaluated in the model's scaled space.
inline AnnGradient ann_gradient(const AnnModel& m, const Mat& xs, const std::vector<double>& ys) {
    if (xs.rows == 0 || xs.rows != ys.size())
        throw DimensionMismatch("ann_gradient: empty or mismatched batch");
    AnnGradient g;
    g.w1 = Mat(m.hidden, m.inputs);
    g.b1.assign(m.hidden, 0.0);
    g.w2.assign(m.hidden, 0.0);
    g.b2 = 0.0;

    const double scale = 2.0 / static_cast<double>(xs.rows);
    std::vector<double> h;
    for (std::size_t r = 0; r < xs.rows; ++r) {
        auto row = xs.row(r);
        double out = detail::ann_forward_scaled(m, row, &h);
        double delta = scale * (out - ys[r]);
        g.b2 += delta;
        for (std::size_t j = 0; j < m.hidden; ++j) {
            g.w2[j] += delta * h[j];
            double dh = delta * m.w2[j] * detail::activate_deriv(m.activation, h[j]);
            g.b1[j] += dh;
            for (std::size_t i = 0; i < m.inputs; ++i) g.w1(j, i) += dh * row[i];
        }
    }
    return g;
}

inline AnnModel fit_ann(const Dataset& ds, const SplitPlan& plan, const AnnConfig& cfg = {}) {
    if (cfg.hidden < 1 || cfg.epochs < 1 || cfg.learning_rate <= 0.0 || cfg.patience < 1 ||
        cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw BadConfig("fit_ann: bad configuration");

    AnnModel m;
    m.inputs = ds.n_features();
    m.hidden = static_cast<std::size_t>(cfg.hidden);
    m.activation = cfg.activation;
    m.scaling = fit_scaler(ds, plan);

    Mat xtr = m.scaling.transform_matrix(gather_rows(ds.predictors, plan.train_idx));
    std::vector<double> ytr = m.scaling.scale_target(gather(ds.target, plan.train_idx));
    Mat xte = m.scaling.transform_matrix(gather_rows(ds.predictors, plan.test_idx));
    std::vector<double> yte = m.scaling.scale_target(gather(ds.target, plan.test_idx));

    // Seeded uniform(-r, r) with r = 1/sqrt(fan-in) per layer.
    Rng rng(cfg.seed);
    double r1 = 1.0 / std::sqrt(static_cast<double>(m.inputs));
    double r2 = 1.0 / std::sqrt(static_cast<double>(m.hidden));
    m.w1 = Mat(m.hidden, m.inputs);
    for (double& w : m.w1.a) w = rng.uniform(-r1, r1);
    m.b1.assign(m.hidden, 0.0);
    for (double& b : m.b1) b = rng.uniform(-r1, r1);
    m.w2.assign(m.hidden, 0.0);
    for (double& w : m.w2) w = rng.uniform(-r2, r2);
    m.b2 = rng.uniform(-r2, r2);

    auto subset_rmse = [&](const Mat& x, const std::vector<double>& y) {
        double ss = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) {
            double d = detail::ann_forward_scaled(m, x.row(i)) - y[i];
            ss += d * d;
        }
        return std::sqrt(ss / static_cast<double>(x.rows));
    };

    // Momentum buffers.
    Mat vw1(m.hidden, m.inputs);
    std::vector<double> vb1(m.hidden, 0.0), vw2(m.hidden, 0.0);
    double vb2 = 0.0;

    // Early stopping watches the test subset; without one it falls back to
    // the training error so toy fits still terminate sensibly.
    const bool has_test = !yte.empty();
    double best = 1e308;
    AnnModel best_model = m;
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto g = ann_gradient(m, xtr, ytr);
        for (std::size_t i = 0; i < m.w1.a.size(); ++i) {
            vw1.a[i] = cfg.momentum * vw1.a[i] - cfg.learning_rate * g.w1.a[i];
            m.w1.a[i] += vw1.a[i];
        }
        for (std::size_t j = 0; j < m.hidden; ++j) {
            vb1[j] = cfg.momentum * vb1[j] - cfg.learning_rate * g.b1[j];
            m.b1[j] += vb1[j];
            vw2[j] = cfg.momentum * vw2[j] - cfg.learning_rate * g.w2[j];
            m.w2[j] += vw2[j];
        }
        vb2 = cfg.momentum * vb2 - cfg.learning_rate * g.b2;
        m.b2 += vb2;

        double train_rmse = subset_rmse(xtr, ytr);
        if (!std::isfinite(train_rmse)) throw Diverged("fit_ann: training loss is not finite");
        m.trace.push_back(train_rmse);

        double watch = has_test ? subset_rmse(xte, yte) : train_rmse;
        if (watch < best) {
            best = watch;
            best_model = m;
            best_model.trace.clear();
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    best_model.trace = std::move(m.trace);
    return best_model;
}

inline double predict_ann(const AnnModel& m, const std::vector<double>& x) {
    if (x.size() != m.inputs)
        throw DimensionMismatch("predict_ann: feature vector length mismatch");
    double out = detail::ann_forward_scaled(m, m.scaling.transform_row(x));
    return m.scaling.unscale_target(out);
}

inline std::string serialize(const AnnModel& m) {
    std::ostringstream out;
    char buf[64];
    out << "model ann\n";
    out << "layers " << m.inputs << ' ' << m.hidden << " 1\n";
    out << "activation " << (m.activation == Activation::tanh_unit ? "tanh" : "logistic")
        << "\n";
    auto dump = [&](const char* name, const double* v, std::size_t count) {
        out << name;
        for (std::size_t i = 0; i < count; ++i) {
            std::snprintf(buf, sizeof buf, " %.17g", v[i]);
            out << buf;
        }
        out << "\n";
    };
    dump("w1", m.w1.a.data(), m.w1.a.size());
    dump("b1", m.b1.data(), m.b1.size());
    dump("w2", m.w2.data(), m.w2.size());
    dump("b2", &m.b2, 1);
    return out.str();
}

}  // namespace aircast
