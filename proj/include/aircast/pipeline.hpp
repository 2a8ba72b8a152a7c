#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/regressor.hpp"
#include "aircast/split.hpp"
#include "aircast/stats.hpp"
#include "aircast/synthetic.hpp"

namespace aircast {

struct SyntheticSpec {
    std::size_t n = 42;
    std::uint64_t seed = 7;
    double noise_sd = 150.0;
};

/// Full run description. Every model section is optional; a missing section
/// means "enabled with defaults".
struct RunConfig {
    std::optional<std::string> csv_path;    // exclusive with synthetic
    SyntheticSpec synthetic;
    bool use_synthetic = true;
    bool dataset_specified = false;  // set when a config names its dataset

    std::array<double, 3> proportions = {0.70, 0.15, 0.15};
    SplitMode split_mode = SplitMode::random;
    std::uint64_t seed = 1;  // master seed; model sections may override theirs

    double alpha = 0.05;
    std::optional<double> reference_total;  // default: sum of the last 4 quarters
    std::string output_dir = "out";
    TTestVariant posthoc_variant = TTestVariant::pooled;

    bool mlr_enabled = true;
    bool ann_enabled = true;
    AnnConfig ann;
    bool anfis_enabled = true;
    AnfisConfig anfis;
    bool ga_enabled = true;
    GaConfig ga;
    bool svr_enabled = true;
    SvrConfig svr;
    bool rtree_enabled = true;
    TreeConfig rtree;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw aircast::ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::maybe;
    RunConfig cfg;
    detail::reject_unknown(j,
                           {"dataset", "split", "alpha", "reference_total", "output_dir",
                            "posthoc", "seed", "models"},
                           "config root");

    maybe(j, "alpha", cfg.alpha);
    maybe(j, "output_dir", cfg.output_dir);
    maybe(j, "seed", cfg.seed);
    if (j.contains("reference_total")) cfg.reference_total = j.at("reference_total").get<double>();
    if (j.contains("posthoc")) {
        std::string v = j.at("posthoc").get<std::string>();
        if (v == "pooled")
            cfg.posthoc_variant = TTestVariant::pooled;
        else if (v == "welch")
            cfg.posthoc_variant = TTestVariant::welch;
        else
            throw ConfigError("posthoc must be \"pooled\" or \"welch\"");
    }

    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        detail::reject_unknown(d, {"csv", "synthetic"}, "dataset");
        if (d.contains("csv") && d.contains("synthetic"))
            throw ConfigError("dataset: csv and synthetic are mutually exclusive");
        if (d.contains("csv")) {
            cfg.csv_path = d.at("csv").get<std::string>();
            cfg.use_synthetic = false;
            cfg.dataset_specified = true;
        } else if (d.contains("synthetic")) {
            const auto& s = d.at("synthetic");
            detail::reject_unknown(s, {"n", "seed", "noise_sd"}, "dataset.synthetic");
            maybe(s, "n", cfg.synthetic.n);
            maybe(s, "seed", cfg.synthetic.seed);
            maybe(s, "noise_sd", cfg.synthetic.noise_sd);
            cfg.use_synthetic = true;
            cfg.dataset_specified = true;
        }
    }

    if (j.contains("split")) {
        const auto& s = j.at("split");
        detail::reject_unknown(s, {"proportions", "mode", "seed"}, "split");
        if (s.contains("proportions")) {
            auto v = s.at("proportions").get<std::vector<double>>();
            if (v.size() != 3) throw ConfigError("split.proportions needs 3 values");
            cfg.proportions = {v[0], v[1], v[2]};
        }
        if (s.contains("mode")) {
            std::string v = s.at("mode").get<std::string>();
            if (v == "random")
                cfg.split_mode = SplitMode::random;
            else if (v == "chronological")
                cfg.split_mode = SplitMode::chronological;
            else
                throw ConfigError("split.mode must be \"random\" or \"chronological\"");
        }
        maybe(s, "seed", cfg.seed);
    }

    // Seed defaults for seeded models follow the master seed unless overridden.
    cfg.ann.seed = cfg.seed;
    cfg.anfis.seed = cfg.seed;
    cfg.ga.seed = cfg.seed;

    if (j.contains("models")) {
        const auto& ms = j.at("models");
        detail::reject_unknown(ms, {"mlr", "ann", "anfis", "ga", "svr", "rtree"}, "models");

        if (ms.contains("mlr")) {
            const auto& s = ms.at("mlr");
            detail::reject_unknown(s, {"enabled"}, "models.mlr");
            maybe(s, "enabled", cfg.mlr_enabled);
        }
        if (ms.contains("ann")) {
            const auto& s = ms.at("ann");
            detail::reject_unknown(
                s, {"enabled", "hidden", "epochs", "learning_rate", "momentum", "seed",
                    "patience", "activation"},
                "models.ann");
            maybe(s, "enabled", cfg.ann_enabled);
            maybe(s, "hidden", cfg.ann.hidden);
            maybe(s, "epochs", cfg.ann.epochs);
            maybe(s, "learning_rate", cfg.ann.learning_rate);
            maybe(s, "momentum", cfg.ann.momentum);
            maybe(s, "seed", cfg.ann.seed);
            maybe(s, "patience", cfg.ann.patience);
            if (s.contains("activation")) {
                std::string v = s.at("activation").get<std::string>();
                if (v == "tanh")
                    cfg.ann.activation = Activation::tanh_unit;
                else if (v == "logistic")
                    cfg.ann.activation = Activation::logistic;
                else
                    throw ConfigError("models.ann.activation must be tanh or logistic");
            }
        }
        if (ms.contains("anfis")) {
            const auto& s = ms.at("anfis");
            detail::reject_unknown(
                s, {"enabled", "rules", "epochs", "premise_learning_rate", "seed", "patience"},
                "models.anfis");
            maybe(s, "enabled", cfg.anfis_enabled);
            maybe(s, "rules", cfg.anfis.n_rules);
            maybe(s, "epochs", cfg.anfis.epochs);
            maybe(s, "premise_learning_rate", cfg.anfis.premise_learning_rate);
            maybe(s, "seed", cfg.anfis.seed);
            maybe(s, "patience", cfg.anfis.patience);
        }
        if (ms.contains("ga")) {
            const auto& s = ms.at("ga");
            detail::reject_unknown(
                s, {"enabled", "form", "population", "generations", "tournament",
                    "crossover_rate", "mutation_rate", "mutation_sd", "elite", "seed", "bound"},
                "models.ga");
            maybe(s, "enabled", cfg.ga_enabled);
            if (s.contains("form")) {
                std::string v = s.at("form").get<std::string>();
                if (v == "linear")
                    cfg.ga.form = GaForm::linear;
                else if (v == "quadratic")
                    cfg.ga.form = GaForm::quadratic;
                else
                    throw ConfigError("models.ga.form must be linear or quadratic");
            }
            maybe(s, "population", cfg.ga.population);
            maybe(s, "generations", cfg.ga.generations);
            maybe(s, "tournament", cfg.ga.tournament);
            maybe(s, "crossover_rate", cfg.ga.crossover_rate);
            maybe(s, "mutation_rate", cfg.ga.mutation_rate);
            maybe(s, "mutation_sd", cfg.ga.mutation_sd);
            maybe(s, "elite", cfg.ga.elite);
            maybe(s, "seed", cfg.ga.seed);
            maybe(s, "bound", cfg.ga.bound);
        }
        if (ms.contains("svr")) {
            const auto& s = ms.at("svr");
            detail::reject_unknown(
                s, {"enabled", "kernel", "gamma", "C", "epsilon", "tolerance", "max_passes",
                    "scale_target"},
                "models.svr");
            maybe(s, "enabled", cfg.svr_enabled);
            if (s.contains("kernel")) {
                std::string v = s.at("kernel").get<std::string>();
                if (v == "linear")
                    cfg.svr.kernel.kind = KernelKind::linear;
                else if (v == "rbf")
                    cfg.svr.kernel.kind = KernelKind::rbf;
                else
                    throw ConfigError("models.svr.kernel must be linear or rbf");
            }
            maybe(s, "gamma", cfg.svr.kernel.gamma);
            maybe(s, "C", cfg.svr.C);
            maybe(s, "epsilon", cfg.svr.epsilon);
            maybe(s, "tolerance", cfg.svr.tolerance);
            maybe(s, "max_passes", cfg.svr.max_passes);
            maybe(s, "scale_target", cfg.svr.scale_target);
        }
        if (ms.contains("rtree")) {
            const auto& s = ms.at("rtree");
            detail::reject_unknown(
                s, {"enabled", "max_depth", "min_samples_leaf", "min_sse_reduction"},
                "models.rtree");
            maybe(s, "enabled", cfg.rtree_enabled);
            maybe(s, "max_depth", cfg.rtree.max_depth);
            maybe(s, "min_samples_leaf", cfg.rtree.min_samples_leaf);
            maybe(s, "min_sse_reduction", cfg.rtree.min_sse_reduction);
        }
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    try {
        return parse_run_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config value error: " + std::string(e.what()));
    }
}

/// Per-model evaluation over all quarters.
struct ModelEvaluation {
    std::string name;
    std::vector<double> predictions;     // one per dataset row
    std::vector<double> squared_errors;  // one per dataset row
    double rmse_train = 0.0, rmse_test = 0.0, rmse_valid = 0.0, rmse_all = 0.0;
    FitLine fit;
    std::string record;
};

struct EvaluationReport {
    Dataset dataset;
    SplitPlan plan;
    std::vector<ModelEvaluation> models;
    double reference_total = 0.0;
};

inline ModelEvaluation evaluate_model(const Regressor& reg, const Dataset& ds,
                                      const SplitPlan& plan) {
    ModelEvaluation ev;
    ev.name = reg.name;
    ev.record = reg.record;
    ev.predictions = reg.predict_all(ds);
    ev.squared_errors.resize(ds.n_rows());
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        double d = ds.target[i] - ev.predictions[i];
        ev.squared_errors[i] = d * d;
    }
    auto scope_rmse = [&](const std::vector<std::size_t>& idx) {
        if (idx.empty()) return 0.0;
        return rmse(gather(ds.target, idx), gather(ev.predictions, idx));
    };
    ev.rmse_train = scope_rmse(plan.train_idx);
    ev.rmse_test = scope_rmse(plan.test_idx);
    ev.rmse_valid = scope_rmse(plan.valid_idx);
    ev.rmse_all = rmse(ds.target, ev.predictions);
    ev.fit = fit_line(ds.target, ev.predictions);
    return ev;
}

/// Loads or synthesizes the dataset, builds one split shared by every model,
/// fits all enabled families, and evaluates them over all rows. Fit failures
/// are rethrown as FitError with the failing model named.
inline EvaluationReport run_evaluation(const RunConfig& cfg) {
    EvaluationReport rep;
    if (cfg.use_synthetic)
        rep.dataset = synthesize(cfg.synthetic.n, cfg.synthetic.seed, cfg.synthetic.noise_sd).first;
    else
        rep.dataset = load_csv(*cfg.csv_path);

    rep.plan = make_split(rep.dataset.n_rows(), cfg.proportions, cfg.seed, cfg.split_mode);

    if (cfg.reference_total) {
        rep.reference_total = *cfg.reference_total;
    } else {
        // Default reference: the most recent four quarters of actual traffic.
        std::size_t n = rep.dataset.n_rows();
        std::size_t k = std::min<std::size_t>(4, n);
        rep.reference_total = 0.0;
        for (std::size_t i = n - k; i < n; ++i) rep.reference_total += rep.dataset.target[i];
    }

    auto fit_guard = [&](const char* name, auto&& fn) {
        try {
            rep.models.push_back(evaluate_model(fn(), rep.dataset, rep.plan));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw FitError(std::string(name) + ": " + e.what());
        }
    };

    if (cfg.mlr_enabled)
        fit_guard("mlr", [&] { return wrap("mlr", fit_mlr(rep.dataset, rep.plan)); });
    if (cfg.ann_enabled)
        fit_guard("ann", [&] { return wrap("ann", fit_ann(rep.dataset, rep.plan, cfg.ann)); });
    if (cfg.anfis_enabled)
        fit_guard("anfis",
                  [&] { return wrap("anfis", fit_anfis(rep.dataset, rep.plan, cfg.anfis)); });
    if (cfg.ga_enabled)
        fit_guard("ga", [&] { return wrap("ga", fit_ga(rep.dataset, rep.plan, cfg.ga)); });
    if (cfg.svr_enabled)
        fit_guard("svr", [&] { return wrap("svr", fit_svr(rep.dataset, rep.plan, cfg.svr)); });
    if (cfg.rtree_enabled)
        fit_guard("rtree",
                  [&] { return wrap("rtree", fit_tree(rep.dataset, rep.plan, cfg.rtree)); });

    if (rep.models.empty()) throw ConfigError("run: no models enabled");
    return rep;
}

inline std::optional<ComparisonReport> run_comparison(const EvaluationReport& rep,
                                                      double alpha,
                                                      TTestVariant variant) {
    if (rep.models.size() < 2) return std::nullopt;
    std::vector<std::string> names;
    std::vector<std::vector<double>> errs;
    for (const auto& m : rep.models) {
        names.push_back(m.name);
        errs.push_back(m.squared_errors);
    }
    return compare_models(names, errs, alpha, variant);
}

}  // namespace aircast
