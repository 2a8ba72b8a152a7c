// Command-line front end: run the full compare pipeline, fit a single model,
// evaluate or compare enabled models, or emit a synthetic CSV.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aircast/aircast.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitFit = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool synthetic = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
};

aircast::RunConfig resolve_config(const CommonOpts& opts) {
    aircast::RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = aircast::load_run_config(opts.config_path);
    else
        cfg.dataset_specified = false;
    if (opts.synthetic) {
        cfg.use_synthetic = true;
        cfg.dataset_specified = true;
    }
    if (opts.seed) {
        cfg.seed = *opts.seed;
        cfg.ann.seed = *opts.seed;
        cfg.anfis.seed = *opts.seed;
        cfg.ga.seed = *opts.seed;
    }
    if (opts.alpha) cfg.alpha = *opts.alpha;
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (!cfg.dataset_specified)
        throw aircast::ConfigError("no dataset: give a config with a dataset section "
                                   "(csv or synthetic), or pass --synthetic");
    return cfg;
}

void print_rmse_summary(const aircast::EvaluationReport& rep) {
    auto sorted = rep.models;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.rmse_all < b.rmse_all; });
    for (const auto& m : sorted)
        std::printf("%-8s rmse_all=%.4f pct=%.4f beta=%.4f alpha=%.4f R2=%.4f\n",
                    m.name.c_str(), m.rmse_all,
                    aircast::pct_of_reference(m.rmse_all, rep.reference_total), m.fit.beta,
                    m.fit.alpha, m.fit.r2);
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const aircast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const aircast::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const aircast::FitError& e) {
        std::cerr << "model fit error: " << e.what() << "\n";
        return kExitFit;
    } catch (const aircast::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aircast: air-transport demand model comparison"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "JSON run configuration");
    app.add_option("--out", opts.out_dir, "output directory (overrides config)");
    app.add_flag("--synthetic", opts.synthetic, "use the built-in synthetic dataset");
    app.add_option("--seed", opts.seed, "master seed (overrides config and model seeds)");
    app.add_option("--alpha", opts.alpha, "significance level for starring");

    auto* cmd_run = app.add_subcommand("run", "full pipeline: fit, evaluate, compare, render");
    auto* cmd_fit = app.add_subcommand("fit", "fit one model and write its text record");
    std::string fit_model;
    cmd_fit->add_option("model", fit_model, "mlr|ann|anfis|ga|svr|rtree")->required();
    auto* cmd_eval = app.add_subcommand("evaluate", "fit enabled models, write the RMSE table "
                                                    "and scatter plots");
    auto* cmd_cmp = app.add_subcommand("compare", "fit enabled models, write the ANOVA and "
                                                  "post-hoc tables");
    auto* cmd_synth = app.add_subcommand("synth", "emit a synthetic dataset as CSV");
    std::size_t synth_n = 42;
    std::uint64_t synth_seed = 7;
    double synth_noise = 150.0;
    std::string synth_file = "synthetic.csv";
    std::string truth_file;
    cmd_synth->add_option("--n", synth_n, "number of quarters");
    cmd_synth->add_option("--noise", synth_noise, "target noise standard deviation");
    cmd_synth->add_option("--file", synth_file, "CSV path to write");
    cmd_synth->add_option("--truth", truth_file, "also write the generating coefficients here");
    cmd_synth->add_option("--gen-seed", synth_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    if (cmd_synth->parsed())
        return run_guarded([&] {
            if (opts.seed) synth_seed = *opts.seed;
            auto [ds, truth] = aircast::synthesize(synth_n, synth_seed, synth_noise);
            aircast::write_csv(ds, synth_file);
            if (!truth_file.empty()) {
                std::ofstream out(truth_file);
                out << "intercept " << truth.intercept << "\n";
                for (std::size_t j = 0; j < truth.coef.size(); ++j)
                    out << ds.specs[j].name << " " << truth.coef[j] << "\n";
                out << "noise_sd " << truth.noise_sd << "\n";
            }
            std::printf("wrote %zu rows to %s\n", ds.n_rows(), synth_file.c_str());
            return 0;
        });

    return run_guarded([&] {
        auto cfg = resolve_config(opts);

        if (cmd_run->parsed()) {
            auto art = aircast::run_pipeline(cfg);
            print_rmse_summary(art.evaluation);
            if (!art.comparison)
                std::printf("comparison skipped: at least 2 enabled models are required\n");
            for (const auto& f : art.files_written) std::printf("wrote %s\n", f.c_str());
            return 0;
        }

        if (cmd_fit->parsed()) {
            bool keep_mlr = fit_model == "mlr", keep_ann = fit_model == "ann",
                 keep_anfis = fit_model == "anfis", keep_ga = fit_model == "ga",
                 keep_svr = fit_model == "svr", keep_rtree = fit_model == "rtree";
            if (!(keep_mlr || keep_ann || keep_anfis || keep_ga || keep_svr || keep_rtree))
                throw aircast::ConfigError("unknown model \"" + fit_model + "\"");
            cfg.mlr_enabled = keep_mlr;
            cfg.ann_enabled = keep_ann;
            cfg.anfis_enabled = keep_anfis;
            cfg.ga_enabled = keep_ga;
            cfg.svr_enabled = keep_svr;
            cfg.rtree_enabled = keep_rtree;
            auto rep = aircast::run_evaluation(cfg);

            std::error_code ec;
            std::filesystem::create_directories(cfg.output_dir, ec);
            if (ec) throw aircast::IoError("cannot create " + cfg.output_dir);
            std::string path = cfg.output_dir + "/model_" + fit_model + ".txt";
            std::ofstream out(path, std::ios::binary);
            if (!out) throw aircast::IoError("cannot write " + path);
            out << rep.models.front().record;
            std::printf("%-8s rmse_all=%.4f\n", fit_model.c_str(),
                        rep.models.front().rmse_all);
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }

        if (cmd_eval->parsed()) {
            auto rep = aircast::run_evaluation(cfg);
            std::error_code ec;
            std::filesystem::create_directories(cfg.output_dir, ec);
            if (ec) throw aircast::IoError("cannot create " + cfg.output_dir);
            std::string path = cfg.output_dir + "/rmse_table.txt";
            std::ofstream(path, std::ios::binary) << aircast::render_rmse_table(rep);
            print_rmse_summary(rep);
            std::printf("wrote %s\n", path.c_str());
            for (const auto& m : rep.models) {
                std::string sp = cfg.output_dir + "/scatter_" + m.name + ".svg";
                std::ofstream(sp, std::ios::binary)
                    << aircast::render_scatter_svg(m, rep.dataset.target);
                std::printf("wrote %s\n", sp.c_str());
            }
            return 0;
        }

        if (!cmd_cmp->parsed()) throw aircast::ConfigError("no subcommand selected");
        auto rep = aircast::run_evaluation(cfg);
        auto cmp = aircast::run_comparison(rep, cfg.alpha, cfg.posthoc_variant);
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw aircast::IoError("cannot create " + cfg.output_dir);
        if (!cmp) {
            std::printf("comparison skipped: at least 2 enabled models are required\n");
            return 0;
        }
        std::vector<std::size_t> order(rep.models.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rep.models[a].rmse_all < rep.models[b].rmse_all;
        });
        std::ofstream(cfg.output_dir + "/anova.txt", std::ios::binary)
            << aircast::render_anova(cmp->anova);
        std::ofstream(cfg.output_dir + "/posthoc.txt", std::ios::binary)
            << aircast::render_posthoc(cmp->pairwise, order);
        std::printf("F = %.4f, p = %.4f\n", cmp->anova.f_stat, cmp->anova.p_value);
        std::printf("wrote %s/anova.txt and %s/posthoc.txt\n", cfg.output_dir.c_str(),
                    cfg.output_dir.c_str());
        return 0;
    });
}
