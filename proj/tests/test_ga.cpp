#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "aircast/ga.hpp"
#include "aircast/mlr.hpp"
#include "aircast/synthetic.hpp"
#include "helpers.hpp"

using namespace aircast;

TEST_CASE("ga_phenotype forms") {
    CHECK(ga_phenotype(GaForm::linear, {0.0, 0.0, 0.0}, {4.0, 5.0}) == 0.0);
    std::vector<double> quad(2 * 3 + 1, 0.0);
    quad[3 + 1] = 1.0;  // b1 only
    CHECK(ga_phenotype(GaForm::quadratic, quad, {3.0, 0.0, 0.0}) == 9.0);
    CHECK_THROWS_AS(ga_phenotype(GaForm::linear, {1.0, 2.0}, {1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("linear phenotype agrees with an MLR prediction for the same coefficients") {
    MlrModel m{3.0, {1.5, -2.0}, 1.0};
    std::vector<double> coef = {3.0, 1.5, -2.0};
    for (auto& x : std::vector<std::vector<double>>{{0.0, 0.0}, {1.0, 2.0}, {-3.0, 0.5}})
        CHECK(ga_phenotype(GaForm::linear, coef, x) == Catch::Approx(predict_mlr(m, x)));
}

TEST_CASE("fitness history is monotone non-increasing and seeded runs repeat") {
    auto [ds, truth] = synthesize(42, 7, 100.0);
    auto plan = make_split(42, {0.7, 0.15, 0.15}, 7, SplitMode::random);
    GaConfig cfg;
    cfg.generations = 60;
    cfg.population = 40;
    cfg.seed = 11;

    auto a = fit_ga(ds, plan, cfg);
    REQUIRE(a.fitness_history.size() == 60);
    for (std::size_t g = 1; g < a.fitness_history.size(); ++g)
        CHECK(a.fitness_history[g] <= a.fitness_history[g - 1]);

    auto b = fit_ga(ds, plan, cfg);
    CHECK(a.fitness_history == b.fitness_history);
    CHECK(a.coefficients == b.coefficients);

    cfg.seed = 12;
    auto c = fit_ga(ds, plan, cfg);
    CHECK(a.fitness_history != c.fitness_history);
}

TEST_CASE("one generation returns the best of the initial population") {
    auto [ds, truth] = synthesize(20, 3, 50.0);
    auto plan = testutil::all_train(20);
    GaConfig cfg;
    cfg.generations = 1;
    cfg.population = 30;
    cfg.seed = 9;
    auto m = fit_ga(ds, plan, cfg);
    CHECK(m.fitness_history.size() == 1);

    // Rebuild the same initial population by hand and take its best fitness.
    auto sc = fit_scaler(ds, plan);
    Mat x = sc.transform_matrix(gather_rows(ds.predictors, plan.train_idx));
    auto y = sc.scale_target(gather(ds.target, plan.train_idx));
    Rng rng(9);
    double best = 1e308;
    std::vector<double> best_coef;
    for (int i = 0; i < 30; ++i) {
        std::vector<double> coef(ds.n_features() + 1);
        for (double& c : coef) c = rng.uniform(-10.0, 10.0);
        double ss = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            double d = ga_phenotype(GaForm::linear, coef, x.row(r)) - y[r];
            ss += d * d;
        }
        double f = std::sqrt(ss / static_cast<double>(x.rows));
        if (f < best) {
            best = f;
            best_coef = coef;
        }
    }
    CHECK(m.fitness_history[0] == Catch::Approx(best).margin(1e-12));
    CHECK(m.coefficients == best_coef);
}

TEST_CASE("ga recovers generating coefficients within 5% on noiseless data") {
    auto [ds, truth] = synthesize(42, 7, 0.0);
    auto plan = make_split(42, {0.7, 0.15, 0.15}, 7, SplitMode::random);
    // Budget sized for the 5% target: coefficient-level recovery needs a few
    // thousand generations of blend contraction (sub-second even so).
    GaConfig cfg;
    cfg.form = GaForm::linear;
    cfg.generations = 2000;
    cfg.population = 200;
    cfg.tournament = 2;
    cfg.crossover_rate = 1.0;
    cfg.mutation_rate = 0.0;
    cfg.bound = 2.0;
    cfg.seed = 7;
    auto m = fit_ga(ds, plan, cfg);

    auto raw = ga_raw_linear_coefficients(m);
    // Continuous (non-dummy) columns only, as the dummies' tiny support makes
    // their coefficients hard for a stochastic search at this budget.
    for (std::size_t j = 0; j < 6; ++j) {
        INFO("column " << ds.specs[j].name << " got " << raw[j + 1] << " want "
                       << truth.coef[j]);
        CHECK(std::fabs(raw[j + 1] - truth.coef[j]) / std::fabs(truth.coef[j]) < 0.05);
    }
}

TEST_CASE("ga serialization is a form tag plus coefficient list") {
    auto [ds, truth] = synthesize(12, 2, 10.0);
    GaConfig cfg;
    cfg.generations = 3;
    cfg.population = 10;
    auto m = fit_ga(ds, testutil::all_train(12), cfg);
    auto rec = serialize(m);
    CHECK(rec.find("model ga") == 0);
    CHECK(rec.find("form linear") != std::string::npos);
    CHECK(rec.find("coefficients ") != std::string::npos);
}

TEST_CASE("fit_ga validates configuration") {
    auto [ds, truth] = synthesize(12, 2, 10.0);
    auto plan = testutil::all_train(12);
    GaConfig bad;
    bad.population = 1;
    CHECK_THROWS_AS(fit_ga(ds, plan, bad), BadConfig);
    bad = {};
    bad.elite = bad.population;
    CHECK_THROWS_AS(fit_ga(ds, plan, bad), BadConfig);
    bad = {};
    bad.crossover_rate = 1.5;
    CHECK_THROWS_AS(fit_ga(ds, plan, bad), BadConfig);
    bad = {};
    bad.mutation_rate = -0.1;
    CHECK_THROWS_AS(fit_ga(ds, plan, bad), BadConfig);
}

TEST_CASE("quadratic form can represent a planted square exactly") {
    // target = 3 + 2*x^2 in scaled space is inside the quadratic phenotype
    // family, so a long run should get close on training rows.
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) {
        double x = -2.0 + 0.2 * i;
        rows.push_back({x});
        y.push_back(3.0 + 2.0 * x * x);
    }
    auto ds = testutil::toy_dataset(rows, y);
    auto plan = testutil::all_train(20);
    GaConfig cfg;
    cfg.form = GaForm::quadratic;
    cfg.generations = 1500;
    cfg.population = 150;
    cfg.tournament = 2;
    cfg.crossover_rate = 1.0;
    cfg.mutation_rate = 0.0;
    cfg.bound = 2.0;
    cfg.seed = 3;
    auto m = fit_ga(ds, plan, cfg);
    CHECK(m.fitness_history.back() < 0.02);  // scaled-target RMSE
}
