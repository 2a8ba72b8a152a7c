#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/linalg.hpp"
#include "aircast/rng.hpp"
#include "aircast/scaler.hpp"
#include "aircast/split.hpp"

namespace aircast {

/// Gaussian membership over one scaled input dimension.
struct MembershipFn {
    double center = 0.0;
    double width = 1.0;  // sigma, kept strictly positive
};

/// First-order Takagi-Sugeno rule: one membership per input plus an affine
/// consequent laid out as [slope_1 .. slope_p, constant].
struct FuzzyRule {
    std::vector<MembershipFn> antecedent;
    std::vector<double> consequent;
};

struct AnfisConfig {
    int n_rules = 2;  // k*(p+1) consequent parameters must stay under |train|
    int epochs = 100;
    double premise_learning_rate = 0.01;
    std::uint64_t seed = 1;
    int patience = 20;
};

struct AnfisModel {
    std::vector<FuzzyRule> rules;
    std::size_t inputs = 0;
    std::vector<double> trace;  // training RMSE per executed epoch, scaled units
    Scaler scaling;
};

struct AnfisForward {
    double output = 0.0;               // scaled target units
    std::vector<double> firing;        // w_i
    std::vector<double> normalized;    // w_i / sum_j w_j
};

inline AnfisForward anfis_forward(const AnfisModel& m, const std::vector<double>& xs) {
    if (xs.size() != m.inputs)
        throw DimensionMismatch("anfis_forward: feature vector length mismatch");
    AnfisForward f;
    f.firing.resize(m.rules.size());

    // Normalization happens in log space: raw products underflow a few
    // cluster widths away from every rule, yet the normalized strengths are
    // still perfectly well defined there.
    std::vector<double> logw(m.rules.size());
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m.rules.size(); ++r) {
        double lw = 0.0;
        for (std::size_t d = 0; d < m.inputs; ++d) {
            const auto& mf = m.rules[r].antecedent[d];
            double z = (xs[d] - mf.center) / mf.width;
            lw -= 0.5 * z * z;
        }
        logw[r] = lw;
        max_logw = std::max(max_logw, lw);
        f.firing[r] = std::exp(lw);
    }
    if (std::isinf(max_logw))
        throw AllRulesSilent("anfis_forward: all rule activations vanish");

    double shifted_total = 0.0;
    for (double lw : logw) shifted_total += std::exp(lw - max_logw);

    f.normalized.resize(m.rules.size());
    for (std::size_t r = 0; r < m.rules.size(); ++r) {
        f.normalized[r] = std::exp(logw[r] - max_logw) / shifted_total;
        const auto& c = m.rules[r].consequent;
        double g = c[m.inputs];
        for (std::size_t d = 0; d < m.inputs; ++d) g += c[d] * xs[d];
        f.output += f.normalized[r] * g;
    }
    return f;
}

/// Seeded k-means (k-means++ start, Lloyd refinement) over the scaled
/// training inputs. Widths are per-dimension in-cluster standard deviations
/// floored at 0.1; consequents start at zero.
inline std::vector<FuzzyRule> init_rules(const Dataset& ds, const SplitPlan& plan,
                                         int n_rules, std::uint64_t seed) {
    const std::size_t n = plan.train_idx.size(), p = ds.n_features();
    if (n_rules < 1 || static_cast<std::size_t>(n_rules) > n)
        throw BadConfig("init_rules: rule count must be in [1, |train|]");
    const auto k = static_cast<std::size_t>(n_rules);

    Scaler sc = fit_scaler(ds, plan);
    Mat x = sc.transform_matrix(gather_rows(ds.predictors, plan.train_idx));

    auto dist2 = [&](std::size_t row, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t d = 0; d < p; ++d) {
            double diff = x(row, d) - c[d];
            s += diff * diff;
        }
        return s;
    };

    // k-means++ seeding
    Rng rng(seed);
    std::vector<std::vector<double>> centers;
    centers.push_back(x.row(rng.index(n)));
    std::vector<double> d2(n);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = 1e308;
            for (const auto& c : centers) best = std::min(best, dist2(i, c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double u = rng.uniform01() * total, acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u <= acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.index(n);  // all points coincide with some center
        }
        centers.push_back(x.row(pick));
    }

    // Lloyd iterations until assignments settle.
    std::vector<std::size_t> assign(n, 0);
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bestd = dist2(i, centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                double d = dist2(i, centers[c]);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(p, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t d = 0; d < p; ++d) sums[assign[i]][d] += x(i, d);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // re-seed an empty cluster at the point farthest from its center
                std::size_t far = 0;
                double fard = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = dist2(i, centers[assign[i]]);
                    if (d > fard) {
                        fard = d;
                        far = i;
                    }
                }
                centers[c] = x.row(far);
                changed = true;
                continue;
            }
            for (std::size_t d = 0; d < p; ++d)
                centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
        if (!changed) break;
    }

    std::vector<FuzzyRule> rules(k);
    for (std::size_t c = 0; c < k; ++c) {
        rules[c].antecedent.resize(p);
        rules[c].consequent.assign(p + 1, 0.0);
        std::vector<double> ss(p, 0.0);
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (assign[i] == c) {
                ++cnt;
                for (std::size_t d = 0; d < p; ++d) {
                    double diff = x(i, d) - centers[c][d];
                    ss[d] += diff * diff;
                }
            }
        for (std::size_t d = 0; d < p; ++d) {
            rules[c].antecedent[d].center = centers[c][d];
            double sd = cnt > 0 ? std::sqrt(ss[d] / static_cast<double>(cnt)) : 0.0;
            rules[c].antecedent[d].width = std::max(sd, 0.1);
        }
    }
    return rules;
}

/// Global linear least squares over the consequents with premises held fixed.
/// The stacked design has k*(p+1) columns; when it is wider than the row
/// count a basic least-squares solution is taken (rank-truncated pivoted QR).
inline void lse_consequents(AnfisModel& m, const Mat& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.rows, p = m.inputs, k = m.rules.size();
    if (n == 0) throw TooFewRows("lse_consequents: no training rows");

    Mat design(n, k * (p + 1));
    for (std::size_t i = 0; i < n; ++i) {
        auto f = anfis_forward(m, xs.row(i));  // uses current consequents only for output
        for (std::size_t r = 0; r < k; ++r) {
            double w = f.normalized[r];
            for (std::size_t d = 0; d < p; ++d) design(i, r * (p + 1) + d) = w * xs(i, d);
            design(i, r * (p + 1) + p) = w;
        }
    }
    auto ls = least_squares(design, ys, /*require_full_rank=*/false);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t d = 0; d <= p; ++d)
            m.rules[r].consequent[d] = ls.coef[r * (p + 1) + d];
}

struct PremiseGradient {
    Mat d_center;  // k x p
    Mat d_width;   // k x p
};

/// Analytic gradient of the training MSE with respect to every membership
/// center and width.
inline PremiseGradient premise_gradient(const AnfisModel& m, const Mat& xs,
                                        const std::vector<double>& ys) {
    const std::size_t n = xs.rows, p = m.inputs, k = m.rules.size();
    PremiseGradient g;
    g.d_center = Mat(k, p);
    g.d_width = Mat(k, p);

    for (std::size_t i = 0; i < n; ++i) {
        auto row = xs.row(i);
        auto f = anfis_forward(m, row);
        double err = 2.0 * (f.output - ys[i]) / static_cast<double>(n);

        for (std::size_t r = 0; r < k; ++r) {
            const auto& c = m.rules[r].consequent;
            double gr = c[p];
            for (std::size_t d = 0; d < p; ++d) gr += c[d] * row[d];
            // d output / d log w_r = (g_r - output) * wbar_r, and log w_r is
            // what the centers and widths move; this form stays finite even
            // where the raw firing strengths underflow.
            double dout_dlogw = (gr - f.output) * f.normalized[r];
            for (std::size_t d = 0; d < p; ++d) {
                const auto& mf = m.rules[r].antecedent[d];
                double z = row[d] - mf.center;
                g.d_center(r, d) += err * dout_dlogw * z / (mf.width * mf.width);
                g.d_width(r, d) +=
                    err * dout_dlogw * z * z / (mf.width * mf.width * mf.width);
            }
        }
    }
    return g;
}

inline double anfis_training_rmse(const AnfisModel& m, const Mat& xs,
                                  const std::vector<double>& ys) {
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.rows; ++i) {
        double d = anfis_forward(m, xs.row(i)).output - ys[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(xs.rows));
}

/// Hybrid learning: exact consequent LSE each epoch plus one gradient step on
/// the premise parameters, early-stopped on the test subset.
inline AnfisModel fit_anfis(const Dataset& ds, const SplitPlan& plan,
                            const AnfisConfig& cfg = {}) {
    if (cfg.epochs < 0 || cfg.premise_learning_rate < 0.0 || cfg.patience < 1)
        throw BadConfig("fit_anfis: bad configuration");

    AnfisModel m;
    m.inputs = ds.n_features();
    m.rules = init_rules(ds, plan, cfg.n_rules, cfg.seed);
    m.scaling = fit_scaler(ds, plan);

    Mat xtr = m.scaling.transform_matrix(gather_rows(ds.predictors, plan.train_idx));
    std::vector<double> ytr = m.scaling.scale_target(gather(ds.target, plan.train_idx));
    Mat xte = m.scaling.transform_matrix(gather_rows(ds.predictors, plan.test_idx));
    std::vector<double> yte = m.scaling.scale_target(gather(ds.target, plan.test_idx));

    lse_consequents(m, xtr, ytr);

    const bool has_test = !yte.empty();
    auto watch_rmse = [&]() {
        return has_test ? anfis_training_rmse(m, xte, yte) : anfis_training_rmse(m, xtr, ytr);
    };

    double best = watch_rmse();
    AnfisModel best_model = m;
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto g = premise_gradient(m, xtr, ytr);
        for (std::size_t r = 0; r < m.rules.size(); ++r)
            for (std::size_t d = 0; d < m.inputs; ++d) {
                auto& mf = m.rules[r].antecedent[d];
                mf.center -= cfg.premise_learning_rate * g.d_center(r, d);
                mf.width -= cfg.premise_learning_rate * g.d_width(r, d);
                if (!(mf.width >= 1e-3)) mf.width = 1e-3;
                if (!std::isfinite(mf.center)) throw Diverged("fit_anfis: premise diverged");
            }

        lse_consequents(m, xtr, ytr);

        double train_rmse = anfis_training_rmse(m, xtr, ytr);
        if (!std::isfinite(train_rmse)) throw Diverged("fit_anfis: training loss not finite");
        m.trace.push_back(train_rmse);

        double watch = watch_rmse();
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

inline double predict_anfis(const AnfisModel& m, const std::vector<double>& x) {
    if (x.size() != m.inputs)
        throw DimensionMismatch("predict_anfis: feature vector length mismatch");
    double out = anfis_forward(m, m.scaling.transform_row(x)).output;
    return m.scaling.unscale_target(out);
}

inline std::string serialize(const AnfisModel& m) {
    std::ostringstream out;
    char buf[64];
    out << "model anfis\n";
    out << "inputs " << m.inputs << " rules " << m.rules.size() << "\n";
    auto dump = [&](const char* tag, std::size_t r, const double* v, std::size_t count) {
        out << tag << ' ' << r;
        for (std::size_t i = 0; i < count; ++i) {
            std::snprintf(buf, sizeof buf, " %.17g", v[i]);
            out << buf;
        }
        out << "\n";
    };
    std::vector<double> tmp;
    for (std::size_t r = 0; r < m.rules.size(); ++r) {
        tmp.clear();
        for (const auto& mf : m.rules[r].antecedent) tmp.push_back(mf.center);
        dump("centers", r, tmp.data(), tmp.size());
        tmp.clear();
        for (const auto& mf : m.rules[r].antecedent) tmp.push_back(mf.width);
        dump("widths", r, tmp.data(), tmp.size());
        dump("consequent", r, m.rules[r].consequent.data(), m.rules[r].consequent.size());
    }
    return out.str();
}

}  // namespace aircast
