#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
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

enum class GaForm { linear, quadratic };

struct GaConfig {
    GaForm form = GaForm::linear;
    int population = 100;
    int generations = 500;
    int tournament = 3;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    double mutation_sd = 0.1;   // scaled units
    int elite = 2;
    std::uint64_t seed = 1;
    double bound = 10.0;        // coefficients clipped to [-bound, bound], scaled units
};

/// Coefficients of the fixed model form, found by evolution in the scaled
/// space (z-scored inputs, min-max target). Layout: [a0, a_1..a_p] for the
/// linear form, plus [b_1..b_p] squared-term coefficients for the quadratic.
struct GaModel {
    GaForm form = GaForm::linear;
    std::vector<double> coefficients;
    std::vector<double> fitness_history;  // best training RMSE per generation
    Scaler scaling;
};

inline double ga_phenotype(GaForm form, const std::vector<double>& coef,
                           const std::vector<double>& x) {
    const std::size_t p = x.size();
    const std::size_t expect = form == GaForm::linear ? p + 1 : 2 * p + 1;
    if (coef.size() != expect)
        throw DimensionMismatch("ga_phenotype: coefficient count does not match form");
    double v = coef[0];
    for (std::size_t i = 0; i < p; ++i) v += coef[i + 1] * x[i];
    if (form == GaForm::quadratic)
        for (std::size_t i = 0; i < p; ++i) v += coef[p + 1 + i] * x[i] * x[i];
    return v;
}

inline GaModel fit_ga(const Dataset& ds, const SplitPlan& plan, const GaConfig& cfg = {}) {
    if (cfg.population < 2 || cfg.elite < 0 || cfg.elite >= cfg.population ||
        cfg.generations < 1 || cfg.tournament < 1 || cfg.crossover_rate < 0.0 ||
        cfg.crossover_rate > 1.0 || cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0 ||
        cfg.mutation_sd < 0.0 || cfg.bound <= 0.0)
        throw BadConfig("fit_ga: bad configuration");

    GaModel model;
    model.form = cfg.form;
    model.scaling = fit_scaler(ds, plan);

    Mat x = model.scaling.transform_matrix(gather_rows(ds.predictors, plan.train_idx));
    std::vector<double> y = model.scaling.scale_target(gather(ds.target, plan.train_idx));
    const std::size_t n = x.rows, p = x.cols;
    const std::size_t dim = cfg.form == GaForm::linear ? p + 1 : 2 * p + 1;

    auto fitness = [&](const std::vector<double>& coef) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = coef[0];
            for (std::size_t d = 0; d < p; ++d) v += coef[d + 1] * x(i, d);
            if (cfg.form == GaForm::quadratic)
                for (std::size_t d = 0; d < p; ++d) v += coef[p + 1 + d] * x(i, d) * x(i, d);
            double r = v - y[i];
            ss += r * r;
        }
        return std::sqrt(ss / static_cast<double>(n));
    };

    Rng rng(cfg.seed);
    const auto pop_n = static_cast<std::size_t>(cfg.population);
    std::vector<std::vector<double>> pop(pop_n, std::vector<double>(dim));
    for (auto& ind : pop)
        for (double& c : ind) c = rng.uniform(-cfg.bound, cfg.bound);

    std::vector<double> fit(pop_n);
    std::vector<std::size_t> order(pop_n);
    std::vector<double> best_coef;
    double best_fit = 1e308;

    auto tournament_pick = [&]() {
        std::size_t winner = rng.index(pop_n);
        for (int t = 1; t < cfg.tournament; ++t) {
            std::size_t cand = rng.index(pop_n);
            if (fit[cand] < fit[winner]) winner = cand;
        }
        return winner;
    };

    for (int gen = 0; gen < cfg.generations; ++gen) {
        for (std::size_t i = 0; i < pop_n; ++i) fit[i] = fitness(pop[i]);
        for (std::size_t i = 0; i < pop_n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
        if (fit[order[0]] < best_fit) {
            best_fit = fit[order[0]];
            best_coef = pop[order[0]];
        }
        model.fitness_history.push_back(best_fit);
        if (gen + 1 == cfg.generations) break;

        std::vector<std::vector<double>> next;
        next.reserve(pop_n);
        for (int e = 0; e < cfg.elite; ++e) next.push_back(pop[order[e]]);
        while (next.size() < pop_n) {
            const auto& p1 = pop[tournament_pick()];
            const auto& p2 = pop[tournament_pick()];
            std::vector<double> child = p1;
            if (rng.uniform01() < cfg.crossover_rate)
                for (std::size_t d = 0; d < dim; ++d) {
                    // blend (BLX-0.5): uniform over the parents' interval
                    // widened by half its length on each side
                    double lo = std::min(p1[d], p2[d]), hi = std::max(p1[d], p2[d]);
                    double w = 0.5 * (hi - lo);
                    child[d] = std::clamp(rng.uniform(lo - w, hi + w), -cfg.bound, cfg.bound);
                }
            for (std::size_t d = 0; d < dim; ++d)
                if (rng.uniform01() < cfg.mutation_rate) {
                    child[d] += cfg.mutation_sd * rng.gaussian();
                    child[d] = std::clamp(child[d], -cfg.bound, cfg.bound);
                }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
    }

    model.coefficients = std::move(best_coef);
    return model;
}

inline double predict_ga(const GaModel& m, const std::vector<double>& x) {
    if (x.size() != m.scaling.columns.size())
        throw DimensionMismatch("predict_ga: feature vector length mismatch");
    double v = ga_phenotype(m.form, m.coefficients, m.scaling.transform_row(x));
    return m.scaling.unscale_target(v);
}

/// The scaled-space linear coefficients mapped back to raw units
/// [intercept, slope_1..slope_p]; defined for the linear form only.
inline std::vector<double> ga_raw_linear_coefficients(const GaModel& m) {
    if (m.form != GaForm::linear)
        throw DimensionMismatch("ga_raw_linear_coefficients: linear form only");
    const std::size_t p = m.scaling.columns.size();
    double span = m.scaling.target_max - m.scaling.target_min;
    if (span == 0.0) span = 1.0;
    std::vector<double> out(p + 1);
    out[0] = m.scaling.target_min + span * m.coefficients[0];
    for (std::size_t j = 0; j < p; ++j) {
        const auto& c = m.scaling.columns[j];
        double slope = span * m.coefficients[j + 1];
        if (!c.passthrough) {
            slope /= c.sd;
            out[0] -= slope * c.mean;
        }
        out[j + 1] = slope;
    }
    return out;
}

inline std::string serialize(const GaModel& m) {
    std::ostringstream out;
    char buf[64];
    out << "model ga\n";
    out << "form " << (m.form == GaForm::linear ? "linear" : "quadratic") << "\n";
    out << "coefficients";
    for (double c : m.coefficients) {
        std::snprintf(buf, sizeof buf, " %.17g", c);
        out << buf;
    }
    out << "\n";
    return out.str();
}

}  // namespace aircast
