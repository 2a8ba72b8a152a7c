#pragma once

// Independent numerical oracles used only by tests. These deliberately take
// different computational routes from the library code they check.

#include <cmath>
#include <functional>
#include <vector>

#include "aircast/linalg.hpp"

namespace oracle {

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 60) {
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
            int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = f(lm), frm = f(rm);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth >= max_depth || std::fabs(left + right - whole) <= 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1) +
               rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1);
    };
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, tol, 0);
}

/// Student-t CDF by direct integration of the density from 0 to t.
inline double t_cdf_quadrature(double t, double df) {
    double lognorm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                     0.5 * std::log(df * M_PI);
    auto density = [&](double s) {
        return std::exp(lognorm - 0.5 * (df + 1.0) * std::log1p(s * s / df));
    };
    double half = adaptive_simpson(density, 0.0, std::fabs(t));
    return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

/// Regularized incomplete beta by integrating the beta integrand directly.
inline double reg_incomplete_beta_quadrature(double a, double b, double x) {
    double logbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto integrand = [&](double u) {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - logbeta);
    };
    return adaptive_simpson(integrand, 0.0, x);
}

/// F upper tail through the incomplete-beta quadrature.
inline double f_sf_quadrature(double f, double df1, double df2) {
    return reg_incomplete_beta_quadrature(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

/// Exact epsilon-SVR dual optimum by active-set enumeration. Every training
/// point is assigned one of five KKT states (beta at -C, in (-C,0), 0, in
/// (0,C), at C); for each assignment the stationarity system is solved and
/// feasibility checked. Exponential in n, so for desk-scale instances only.
struct SvrDualOracle {
    double objective = -1e308;
    std::vector<double> beta;
    double bias = 0.0;
};

inline SvrDualOracle svr_dual_enumerate(const aircast::Mat& K, const std::vector<double>& y,
                                        double C, double epsilon) {
    const std::size_t n = y.size();
    SvrDualOracle best;
    std::vector<int> state(n, 0);  // 0:-C 1:(-C,0) 2:zero 3:(0,C) 4:C

    auto dual_value = [&](const std::vector<double>& beta) {
        double quad = 0.0, lin = 0.0, reg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) quad += beta[i] * K(i, j) * beta[j];
            lin += y[i] * beta[i];
            reg += std::fabs(beta[i]);
        }
        return -0.5 * quad + lin - epsilon * reg;
    };

    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 5;

    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(c % 5);
            c /= 5;
        }

        std::vector<std::size_t> free;
        std::vector<double> beta(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 0) beta[i] = -C;
            if (state[i] == 4) beta[i] = C;
            if (state[i] == 1 || state[i] == 3) free.push_back(i);
        }

        // Stationarity for free points: (K beta)_i + b = y_i - eps*sign(beta_i),
        // plus the equality constraint sum(beta) = 0. Unknowns: free betas, b.
        const std::size_t m = free.size();

        if (m == 0) {
            // Everything pinned: b only has to satisfy the residual inequalities.
            double s = 0.0;
            for (double v : beta) s += v;
            if (std::fabs(s) > 1e-9) continue;
            double lo = -1e308, hi = 1e308;
            for (std::size_t i = 0; i < n; ++i) {
                double f0 = 0.0;
                for (std::size_t j = 0; j < n; ++j) f0 += K(i, j) * beta[j];
                double ci = y[i] - f0;
                if (state[i] == 2) {
                    lo = std::max(lo, ci - epsilon);
                    hi = std::min(hi, ci + epsilon);
                } else if (state[i] == 4) {
                    hi = std::min(hi, ci - epsilon);
                } else {
                    lo = std::max(lo, ci + epsilon);
                }
            }
            if (lo > hi + 1e-9) continue;
            double v = dual_value(beta);
            if (v > best.objective) {
                best.objective = v;
                best.beta = beta;
                best.bias = 0.5 * (std::max(lo, -1e300) + std::min(hi, 1e300));
            }
            continue;
        }

        aircast::Mat A(m + 1, m + 1);
        std::vector<double> rhs(m + 1, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            std::size_t i = free[r];
            for (std::size_t s = 0; s < m; ++s) A(r, s) = K(i, free[s]);
            A(r, m) = 1.0;
            double fixed = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (state[j] == 0 || state[j] == 4) fixed += K(i, j) * beta[j];
            rhs[r] = y[i] - (state[i] == 3 ? epsilon : -epsilon) - fixed;
        }
        double fixed_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) fixed_sum += beta[j];
        for (std::size_t s = 0; s < m; ++s) A(m, s) = 1.0;
        A(m, m) = 0.0;
        rhs[m] = -fixed_sum;

        std::vector<double> sol;
        double b;
        try {
            auto ls = aircast::least_squares(A, rhs);
            sol = ls.coef;
            b = sol[m];
        } catch (const aircast::Error&) {
            continue;  // singular stationarity system; not this combination
        }

        bool ok = true;
        for (std::size_t r = 0; r < m && ok; ++r) {
            beta[free[r]] = sol[r];
            if (state[free[r]] == 3 && !(sol[r] > 1e-10 && sol[r] < C - 1e-10)) ok = false;
            if (state[free[r]] == 1 && !(sol[r] < -1e-10 && sol[r] > -C + 1e-10)) ok = false;
        }
        if (!ok) continue;
        // Residual conditions for the pinned states.
        for (std::size_t i = 0; i < n && ok; ++i) {
            double f0 = 0.0;
            for (std::size_t j = 0; j < n; ++j) f0 += K(i, j) * beta[j];
            double r = y[i] - f0 - b;
            if (state[i] == 2 && std::fabs(r) > epsilon + 1e-9) ok = false;
            if (state[i] == 4 && r < epsilon - 1e-9) ok = false;
            if (state[i] == 0 && r > -epsilon + 1e-9) ok = false;
        }
        if (!ok) continue;

        double v = dual_value(beta);
        if (v > best.objective) {
            best.objective = v;
            best.beta = beta;
            best.bias = b;
        }
    }
    return best;
}

/// Central finite difference of a scalar function of one perturbed parameter.
inline double central_diff(const std::function<double(double)>& f, double x0,
                           double step = 1e-5) {
    return (f(x0 + step) - f(x0 - step)) / (2.0 * step);
}

}  // namespace oracle
