#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/scaler.hpp"
#include "aircast/split.hpp"

namespace aircast {

enum class KernelKind { linear, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 0.0;  // 0 means "resolve to 1/p when fitting"
};

inline double kernel_eval(const KernelSpec& spec, const std::vector<double>& x1,
                          const std::vector<double>& x2) {
    if (x1.size() != x2.size())
        throw DimensionMismatch("kernel_eval: vectors differ in length");
    if (spec.kind == KernelKind::linear) return dot(x1, x2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        double d = x1[i] - x2[i];
        d2 += d * d;
    }
    return std::exp(-spec.gamma * d2);
}

struct SvrConfig {
    KernelSpec kernel;          // rbf with gamma = 1/p by default
    double C = 10.0;
    double epsilon = 0.1;       // tube half-width, scaled target units
    double tolerance = 1e-3;    // KKT slack
    int max_passes = 10000;     // pairwise updates before giving up
    bool scale_target = true;   // min-max map of the target onto [0, 1]
};

/// Dual solution: beta_i = alpha_i - alpha_i^* for rows with |beta| > 0.
struct SvrModel {
    KernelSpec kernel;
    double bias = 0.0;
    std::vector<std::size_t> sv_index;  // original dataset row numbers
    std::vector<double> sv_beta;
    Mat sv_x;                           // scaled coordinates, one row per SV
    Scaler scaling;
    bool scale_target = true;
};

/// Maximization-form dual value -1/2 b'Kb + y'b - eps*sum|b|.
inline double svr_dual_objective(const Mat& kernel_matrix, const std::vector<double>& y,
                                 double epsilon, const std::vector<double>& beta) {
    const std::size_t n = y.size();
    double quad = 0.0, lin = 0.0, reg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) quad += beta[i] * kernel_matrix(i, j) * beta[j];
        lin += y[i] * beta[i];
        reg += std::fabs(beta[i]);
    }
    return -0.5 * quad + lin - epsilon * reg;
}

/// Scaled training problem shared by the fitter and by oracle-style tests.
struct SvrProblem {
    Mat x;                  // scaled training inputs
    std::vector<double> y;  // (optionally scaled) training targets
    KernelSpec kernel;      // gamma resolved
    Scaler scaling;
};

inline SvrProblem svr_training_problem(const Dataset& ds, const SplitPlan& plan,
                                       const SvrConfig& cfg) {
    SvrProblem prob;
    prob.scaling = fit_scaler(ds, plan);
    prob.x = prob.scaling.transform_matrix(gather_rows(ds.predictors, plan.train_idx));
    prob.y = gather(ds.target, plan.train_idx);
    if (cfg.scale_target) prob.y = prob.scaling.scale_target(prob.y);
    prob.kernel = cfg.kernel;
    if (prob.kernel.kind == KernelKind::rbf && prob.kernel.gamma == 0.0)
        prob.kernel.gamma = 1.0 / static_cast<double>(ds.n_features());
    return prob;
}

namespace detail {

// One exact minimization of the dual along beta_i += t, beta_j -= t. The
// epsilon terms make the restriction piecewise quadratic with breakpoints
// where either coefficient crosses zero; phi' is non-decreasing, so we walk
// the segments until it changes sign.
inline double svr_step_length(double beta_i, double beta_j, double ci, double cj, double eta,
                              double epsilon, double t_max) {
    std::vector<double> knots = {0.0};
    if (beta_i < 0.0 && -beta_i < t_max) knots.push_back(-beta_i);
    if (beta_j > 0.0 && beta_j < t_max) knots.push_back(beta_j);
    knots.push_back(t_max);
    std::sort(knots.begin(), knots.end());

    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
        double a = knots[s], b = knots[s + 1];
        if (b <= a) continue;
        double mid = 0.5 * (a + b);
        double si = beta_i + mid >= 0.0 ? 1.0 : -1.0;
        double sj = beta_j - mid > 0.0 ? 1.0 : -1.0;
        double deriv_a = cj - ci + eta * a + epsilon * (si - sj);
        if (deriv_a >= 0.0) return a;
        if (eta > 0.0) {
            double t = a - deriv_a / eta;
            if (t <= b) return t;
        }
    }
    return t_max;
}

}  // namespace detail

/// SMO-style solver: repeatedly picks the most violating pair and solves the
/// two-variable subproblem exactly. `on_update`, when set, sees the dual
/// coefficients after every update (used by the invariant tests).
inline std::vector<double> solve_svr_dual(
    const Mat& kernel_matrix, const std::vector<double>& y, double C, double epsilon,
    double tolerance, int max_passes, double& bias_out,
    const std::function<void(const std::vector<double>&)>& on_update = nullptr) {
    const std::size_t n = y.size();
    std::vector<double> beta(n, 0.0), f0(n, 0.0);

    auto lo_of = [&](std::size_t i) {
        double c = y[i] - f0[i];
        return beta[i] >= 0.0 ? c - epsilon : c + epsilon;
    };
    auto hi_of = [&](std::size_t i) {
        double c = y[i] - f0[i];
        return beta[i] > 0.0 ? c - epsilon : c + epsilon;
    };

    int passes = 0;
    for (;;) {
        // Most violating pair: largest lower bound on b vs smallest upper bound.
        std::size_t bi = n, bj = n;
        double lo = -1e308, hi = 1e308;
        for (std::size_t i = 0; i < n; ++i) {
            if (beta[i] < C && lo_of(i) > lo) {
                lo = lo_of(i);
                bi = i;
            }
            if (beta[i] > -C && hi_of(i) < hi) {
                hi = hi_of(i);
                bj = i;
            }
        }
        bool converged = bi == n || bj == n || bi == bj || lo - hi <= tolerance;

        if (converged || passes >= max_passes) {
            // Bias: average over free support vectors when any exist, else the
            // midpoint of the KKT-derived bounds.
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (beta[i] != 0.0 && std::fabs(beta[i]) < C - tolerance) {
                    sum += (y[i] - f0[i]) - (beta[i] > 0.0 ? epsilon : -epsilon);
                    ++cnt;
                }
            bias_out = cnt > 0 ? sum / static_cast<double>(cnt) : 0.5 * (lo + hi);
            if (converged) return beta;

            std::size_t violations = 0;
            for (std::size_t i = 0; i < n; ++i)
                if ((beta[i] < C && lo_of(i) > bias_out + tolerance) ||
                    (beta[i] > -C && hi_of(i) < bias_out - tolerance))
                    ++violations;
            throw NotConverged("fit_svr: SMO pass budget exhausted", violations);
        }
        ++passes;

        double eta = kernel_matrix(bi, bi) + kernel_matrix(bj, bj) - 2.0 * kernel_matrix(bi, bj);
        eta = std::max(eta, 0.0);
        double t_max = std::min(C - beta[bi], beta[bj] + C);
        double ci = y[bi] - f0[bi], cj = y[bj] - f0[bj];
        double t = detail::svr_step_length(beta[bi], beta[bj], ci, cj, eta, epsilon, t_max);

        beta[bi] += t;
        beta[bj] -= t;
        for (std::size_t l = 0; l < n; ++l)
            f0[l] += t * (kernel_matrix(l, bi) - kernel_matrix(l, bj));
        if (on_update) on_update(beta);
    }
}

inline SvrModel fit_svr(const Dataset& ds, const SplitPlan& plan, const SvrConfig& cfg = {},
                        const std::function<void(const std::vector<double>&)>& on_update = nullptr) {
    if (cfg.C <= 0.0) throw BadConfig("fit_svr: C must be positive");
    if (cfg.epsilon < 0.0) throw BadConfig("fit_svr: epsilon must be non-negative");
    if (cfg.tolerance <= 0.0) throw BadConfig("fit_svr: tolerance must be positive");
    if (cfg.max_passes < 1) throw BadConfig("fit_svr: max_passes must be >= 1");
    if (cfg.kernel.kind == KernelKind::rbf && cfg.kernel.gamma < 0.0)
        throw BadConfig("fit_svr: rbf gamma must be positive");

    auto prob = svr_training_problem(ds, plan, cfg);
    const std::size_t n = prob.y.size();
    Mat K(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            K(i, j) = K(j, i) = kernel_eval(prob.kernel, prob.x.row(i), prob.x.row(j));

    double bias = 0.0;
    auto beta = solve_svr_dual(K, prob.y, cfg.C, cfg.epsilon, cfg.tolerance, cfg.max_passes,
                               bias, on_update);

    SvrModel m;
    m.kernel = prob.kernel;
    m.bias = bias;
    m.scaling = prob.scaling;
    m.scale_target = cfg.scale_target;
    for (std::size_t i = 0; i < n; ++i)
        if (beta[i] != 0.0) {
            m.sv_index.push_back(plan.train_idx[i]);
            m.sv_beta.push_back(beta[i]);
        }
    m.sv_x = Mat(m.sv_beta.size(), prob.x.cols);
    for (std::size_t r = 0, k = 0; r < n; ++r)
        if (beta[r] != 0.0) {
            for (std::size_t c = 0; c < prob.x.cols; ++c) m.sv_x(k, c) = prob.x(r, c);
            ++k;
        }
    return m;
}

inline double predict_svr(const SvrModel& m, const std::vector<double>& x) {
    if (x.size() != m.scaling.columns.size())
        throw DimensionMismatch("predict_svr: feature vector length mismatch");
    auto xs = m.scaling.transform_row(x);
    double f = m.bias;
    for (std::size_t k = 0; k < m.sv_beta.size(); ++k)
        f += m.sv_beta[k] * kernel_eval(m.kernel, m.sv_x.row(k), xs);
    return m.scale_target ? m.scaling.unscale_target(f) : f;
}

inline std::string serialize(const SvrModel& m) {
    std::ostringstream out;
    char buf[96];
    out << "model svr\n";
    out << "kernel " << (m.kernel.kind == KernelKind::linear ? "linear" : "rbf");
    if (m.kernel.kind == KernelKind::rbf) {
        std::snprintf(buf, sizeof buf, " gamma %.17g", m.kernel.gamma);
        out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", m.bias);
    out << "bias " << buf << "\n";
    for (std::size_t k = 0; k < m.sv_beta.size(); ++k) {
        std::snprintf(buf, sizeof buf, "sv %zu %.17g", m.sv_index[k], m.sv_beta[k]);
        out << buf;
        for (std::size_t c = 0; c < m.sv_x.cols; ++c) {
            std::snprintf(buf, sizeof buf, " %.17g", m.sv_x(k, c));
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace aircast
