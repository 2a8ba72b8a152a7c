#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "aircast/errors.hpp"

namespace aircast {

// ---------------------------------------------------------------------------
// Error metrics and fit diagnostics
// ---------------------------------------------------------------------------

inline double rmse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("rmse: vectors differ in length");
    if (actual.empty()) throw EmptyInput("rmse: empty vectors");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double d = actual[i] - predicted[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

inline double pct_of_reference(double rmse_value, double reference_total) {
    if (reference_total <= 0.0)
        throw NonpositiveReference("pct_of_reference: reference must be positive");
    return 100.0 * rmse_value / reference_total;
}

/// Least-squares line of predicted (response) on actual (explanatory).
/// A perfect model gives beta = 1, alpha = 0, r2 = 1.
struct FitLine {
    double beta = 0.0;
    double alpha = 0.0;
    double r2 = 0.0;
};

inline FitLine fit_line(const std::vector<double>& actual,
                        const std::vector<double>& predicted) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("fit_line: vectors differ in length");
    const std::size_t n = actual.size();
    if (n < 3) throw LengthMismatch("fit_line: need at least 3 points");

    double ma = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += actual[i];
        mp += predicted[i];
    }
    ma /= static_cast<double>(n);
    mp /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = actual[i] - ma, dy = predicted[i] - mp;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ZeroVariance("fit_line: actual values have zero variance");

    FitLine f;
    f.beta = sxy / sxx;
    f.alpha = mp - f.beta * ma;
    // R^2 of the simple regression; a constant response is reproduced exactly
    // by its own mean, so that edge counts as a perfect fit.
    f.r2 = syy == 0.0 ? 1.0 : std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    return f;
}

// ---------------------------------------------------------------------------
// Special functions (support for the t and F p-values)
// ---------------------------------------------------------------------------

/// Regularized incomplete beta I_x(a, b), continued fraction per the classic
/// Lentz scheme with the symmetry switch at x > (a+1)/(a+b+2).
inline double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0))
        throw DomainError("reg_incomplete_beta: need a,b > 0 and x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    auto betacf = [](double aa, double bb, double xx) {
        const double eps = 1e-16, fpmin = 1e-300;
        const int max_iter = 500;
        double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::fabs(d) < fpmin) d = fpmin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= max_iter; ++m) {
            double m2 = 2.0 * m;
            double num = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            h *= d * c;
            num = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + num * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + num / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < eps) break;
        }
        return h;
    };

    double lnfront = a * std::log(x) + b * std::log1p(-x) -
                     (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(lnfront) * betacf(a, b, x) / a;
    return 1.0 - std::exp(lnfront) * betacf(b, a, 1.0 - x) / b;
}

/// Student-t CDF.
inline double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double tail2 = reg_incomplete_beta(0.5 * df, 0.5, x);  // P(|T| > |t|)
    return t > 0.0 ? 1.0 - 0.5 * tail2 : 0.5 * tail2;
}

/// F distribution upper tail P(F > f).
inline double f_sf(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw DomainError("f_sf: dfs must be positive");
    if (f < 0.0) throw DomainError("f_sf: statistic must be non-negative");
    if (f == 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    return reg_incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

// ---------------------------------------------------------------------------
// One-way ANOVA over per-observation squared errors
// ---------------------------------------------------------------------------

struct AnovaTable {
    double ss_between = 0.0, ss_within = 0.0, ss_total = 0.0;
    std::size_t df_between = 0, df_within = 0, df_total = 0;
    double ms_between = 0.0, ms_within = 0.0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

inline AnovaTable anova_oneway(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw TooFewGroups("anova_oneway: need at least 2 groups");
    std::size_t total_n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw TooFewValues("anova_oneway: each group needs >= 2 values");
        total_n += g.size();
    }

    double grand = 0.0;
    for (const auto& g : groups)
        for (double v : g) grand += v;
    grand /= static_cast<double>(total_n);

    AnovaTable t;
    for (const auto& g : groups) {
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= static_cast<double>(g.size());
        double dm = mean - grand;
        t.ss_between += static_cast<double>(g.size()) * dm * dm;
        for (double v : g) {
            double d = v - mean;
            t.ss_within += d * d;
        }
    }
    t.ss_total = t.ss_between + t.ss_within;
    t.df_between = groups.size() - 1;
    t.df_within = total_n - groups.size();
    t.df_total = total_n - 1;
    t.ms_between = t.ss_between / static_cast<double>(t.df_between);
    t.ms_within = t.ss_within / static_cast<double>(t.df_within);
    if (t.ss_between == 0.0) {
        t.f_stat = 0.0;  // identical group means, even if ms_within is 0 too
        t.p_value = 1.0;
    } else if (t.ms_within == 0.0) {
        t.f_stat = std::numeric_limits<double>::infinity();
        t.p_value = 0.0;
    } else {
        t.f_stat = t.ms_between / t.ms_within;
        t.p_value = f_sf(t.f_stat, static_cast<double>(t.df_between),
                         static_cast<double>(t.df_within));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Post-hoc one-sided two-sample t-tests
// ---------------------------------------------------------------------------

enum class TTestVariant { pooled, welch };

/// p-value for the alternative mean(a) < mean(b): p = P(T <= t_stat), so
/// p < 0.5 exactly when mean(a) < mean(b).
inline double t_test_onesided(const std::vector<double>& a, const std::vector<double>& b,
                              TTestVariant variant = TTestVariant::pooled) {
    const std::size_t na = a.size(), nb = b.size();
    if (na < 2 || nb < 2)
        throw DegenerateSample("t_test_onesided: each sample needs >= 2 values");

    auto mean_var = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) {
            double d = x - m;
            ss += d * d;
        }
        return std::pair<double, double>(m, ss / static_cast<double>(v.size() - 1));
    };
    auto [ma, va] = mean_var(a);
    auto [mb, vb] = mean_var(b);
    if (!std::isfinite(va) || !std::isfinite(vb))
        throw DegenerateSample("t_test_onesided: non-finite sample variance");

    double se, df;
    if (variant == TTestVariant::pooled) {
        double sp2 = ((static_cast<double>(na) - 1.0) * va + (static_cast<double>(nb) - 1.0) * vb) /
                     static_cast<double>(na + nb - 2);
        se = std::sqrt(sp2 * (1.0 / static_cast<double>(na) + 1.0 / static_cast<double>(nb)));
        df = static_cast<double>(na + nb - 2);
    } else {
        double qa = va / static_cast<double>(na), qb = vb / static_cast<double>(nb);
        se = std::sqrt(qa + qb);
        double denom = qa * qa / (static_cast<double>(na) - 1.0) +
                       qb * qb / (static_cast<double>(nb) - 1.0);
        df = denom == 0.0 ? static_cast<double>(na + nb - 2) : (qa + qb) * (qa + qb) / denom;
    }
    if (se == 0.0) {
        if (ma == mb) return 0.5;
        throw DegenerateSample("t_test_onesided: zero variance with unequal means");
    }
    return t_cdf((ma - mb) / se, df);
}

// ---------------------------------------------------------------------------
// Model comparison: ANOVA plus the pairwise p-value matrix
// ---------------------------------------------------------------------------

/// p[i][j] tests "model i's squared errors are smaller than model j's".
struct PairwiseMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> p;
    double alpha = 0.05;
};

struct ComparisonReport {
    AnovaTable anova;
    PairwiseMatrix pairwise;
};

inline ComparisonReport compare_models(const std::vector<std::string>& names,
                                       const std::vector<std::vector<double>>& squared_errors,
                                       double alpha = 0.05,
                                       TTestVariant variant = TTestVariant::pooled) {
    if (names.size() != squared_errors.size())
        throw LengthMismatch("compare_models: names/errors count mismatch");
    if (names.size() < 2) throw TooFewGroups("compare_models: need at least 2 models");
    for (const auto& v : squared_errors)
        if (v.size() != squared_errors.front().size())
            throw LengthMismatch("compare_models: error vectors differ in length");

    ComparisonReport rep;
    rep.anova = anova_oneway(squared_errors);
    rep.pairwise.names = names;
    rep.pairwise.alpha = alpha;
    const std::size_t k = names.size();
    rep.pairwise.p.assign(k, std::vector<double>(k, 0.5));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j)
                rep.pairwise.p[i][j] =
                    t_test_onesided(squared_errors[i], squared_errors[j], variant);
    return rep;
}

}  // namespace aircast
