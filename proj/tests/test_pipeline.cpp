#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aircast/report.hpp"

using namespace aircast;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig fast_config(const std::string& out) {
    RunConfig cfg;
    cfg.synthetic = {42, 7, 150.0};
    cfg.seed = 1;
    cfg.output_dir = out;
    cfg.ann.epochs = 200;
    cfg.ann.seed = 1;
    cfg.anfis.epochs = 15;
    cfg.anfis.n_rules = 3;
    cfg.anfis.seed = 1;
    cfg.ga.generations = 80;
    cfg.ga.population = 40;
    cfg.ga.seed = 1;
    return cfg;
}

}  // namespace

TEST_CASE("run_pipeline emits all artifacts and is byte-deterministic") {
    auto base = fs::temp_directory_path() / "aircast_pipe";
    fs::remove_all(base);
    auto cfg1 = fast_config((base / "r1").string());
    auto cfg2 = fast_config((base / "r2").string());

    auto art1 = run_pipeline(cfg1);
    auto art2 = run_pipeline(cfg2);

    REQUIRE(art1.evaluation.models.size() == 6);
    REQUIRE(art1.comparison.has_value());
    CHECK(art1.comparison->anova.df_between == 5);
    CHECK(art1.comparison->anova.df_within == 246);

    for (const char* name : {"rmse_table.txt", "anova.txt", "posthoc.txt", "scatter_mlr.svg",
                             "scatter_ann.svg", "scatter_anfis.svg", "scatter_ga.svg",
                             "scatter_svr.svg", "scatter_rtree.svg"}) {
        CAPTURE(name);
        CHECK(fs::exists(base / "r1" / name));
        CHECK(slurp(base / "r1" / name) == slurp(base / "r2" / name));
        CHECK(!slurp(base / "r1" / name).empty());
    }

    // One split plan shared by every model in the run.
    CHECK(art1.evaluation.plan == art2.evaluation.plan);
    for (const auto& m : art1.evaluation.models)
        CHECK(m.predictions.size() == art1.evaluation.dataset.n_rows());
    fs::remove_all(base);
}

TEST_CASE("single-model runs skip the comparison with a notice") {
    auto base = fs::temp_directory_path() / "aircast_single";
    fs::remove_all(base);
    auto cfg = fast_config(base.string());
    cfg.ann_enabled = cfg.anfis_enabled = cfg.ga_enabled = false;
    cfg.svr_enabled = cfg.rtree_enabled = false;

    auto art = run_pipeline(cfg);
    CHECK(art.evaluation.models.size() == 1);
    CHECK_FALSE(art.comparison.has_value());
    CHECK(slurp(base / "anova.txt").find("comparison skipped") != std::string::npos);
    CHECK(slurp(base / "posthoc.txt").find("comparison skipped") != std::string::npos);
    fs::remove_all(base);
}

TEST_CASE("rmse table rows are ordered best to worst") {
    auto base = fs::temp_directory_path() / "aircast_order";
    fs::remove_all(base);
    auto cfg = fast_config(base.string());
    auto art = run_pipeline(cfg);
    auto table = slurp(base / "rmse_table.txt");

    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& m : art.evaluation.models) ranked.push_back({m.rmse_all, m.name});
    std::sort(ranked.begin(), ranked.end());
    std::size_t pos = 0;
    for (const auto& [r, name] : ranked) {
        auto at = table.find("\n" + name + " ", pos);
        CAPTURE(name);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
    fs::remove_all(base);
}

TEST_CASE("posthoc matrix has the upper-triangular shape with starring") {
    PairwiseMatrix pm;
    pm.names = {"a", "b", "c"};
    pm.alpha = 0.05;
    pm.p = {{0.5, 0.009, 0.2}, {0.991, 0.5, 0.3}, {0.8, 0.7, 0.5}};
    auto text = render_posthoc(pm, {0, 1, 2});
    CHECK(text.find("0.009*") != std::string::npos);   // starred small p
    CHECK(text.find("0.200") != std::string::npos);    // unstarred entry
    // k(k-1)/2 = 3 entries rendered above the diagonal; the lower triangle
    // shows dashes (one per row below the first column).
    std::size_t dashes = 0;
    for (std::size_t i = 0; (i = text.find(" -", i)) != std::string::npos; ++i) ++dashes;
    CHECK(dashes == 1);
    CHECK(text.find("Bonferroni") != std::string::npos);
}

TEST_CASE("scatter svg carries the fit annotation") {
    ModelEvaluation ev;
    ev.name = "mlr";
    ev.predictions = {1.0, 2.0, 3.0};
    ev.fit = {1.0, 0.0, 1.0};
    auto svg = render_scatter_svg(ev, {1.0, 2.0, 3.0});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("y = 1.000x + 0.000, R2 = 1.000") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("config parsing: defaults, overrides, and unknown keys") {
    auto j = nlohmann::json::parse(R"({
        "dataset": {"synthetic": {"n": 30, "seed": 9, "noise_sd": 50.0}},
        "split": {"proportions": [0.6, 0.2, 0.2], "mode": "chronological", "seed": 5},
        "alpha": 0.01,
        "models": {"ann": {"hidden": 4, "epochs": 10}, "svr": {"enabled": false}}
    })");
    auto cfg = parse_run_config(j);
    CHECK(cfg.use_synthetic);
    CHECK(cfg.synthetic.n == 30);
    CHECK(cfg.split_mode == SplitMode::chronological);
    CHECK(cfg.seed == 5);
    CHECK(cfg.alpha == 0.01);
    CHECK(cfg.ann.hidden == 4);
    CHECK(cfg.ann.epochs == 10);
    CHECK(cfg.ann.seed == 5);  // master seed flows into model seeds
    CHECK_FALSE(cfg.svr_enabled);
    CHECK(cfg.rtree_enabled);

    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(nlohmann::json::parse(R"({"models": {"ann": {"hidden_units": 3}}})")),
        ConfigError);
    CHECK_THROWS_AS(
        parse_run_config(nlohmann::json::parse(
            R"({"dataset": {"csv": "a.csv", "synthetic": {"n": 10}}})")),
        ConfigError);
}

TEST_CASE("fit errors name the failing model") {
    auto cfg = fast_config((fs::temp_directory_path() / "aircast_err").string());
    cfg.synthetic.n = 12;  // 12 rows: mlr needs > 11 training rows, split gives 8
    cfg.ann_enabled = cfg.anfis_enabled = cfg.ga_enabled = false;
    cfg.svr_enabled = cfg.rtree_enabled = false;
    try {
        run_pipeline(cfg);
        FAIL("expected FitError");
    } catch (const FitError& e) {
        CHECK(std::string(e.what()).find("mlr") != std::string::npos);
    }
}
