// Exercises the installed CLI binary end to end: exit codes, artifacts on
// disk, and byte determinism across reruns.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    std::string cmd = std::string(AIRCAST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path workdir() {
    auto p = fs::temp_directory_path() / "aircast_cli_test";
    fs::create_directories(p);
    return p;
}

void write_fast_config(const fs::path& path, const std::string& out_dir) {
    std::ofstream cfg(path);
    cfg << R"({
  "dataset": {"synthetic": {"n": 42, "seed": 7, "noise_sd": 150.0}},
  "split": {"seed": 1},
  "output_dir": ")" << out_dir
        << R"(",
  "models": {
    "ann": {"epochs": 150},
    "anfis": {"epochs": 10, "rules": 3},
    "ga": {"generations": 60, "population": 30}
  }
})";
}

}  // namespace

TEST_CASE("cli run produces the full artifact set, deterministically") {
    auto dir = workdir();
    write_fast_config(dir / "cfg.json", (dir / "out1").string());
    REQUIRE(run_cli("--config " + (dir / "cfg.json").string() + " run") == 0);
    for (const char* f : {"rmse_table.txt", "anova.txt", "posthoc.txt", "scatter_anfis.svg"})
        CHECK(fs::exists(dir / "out1" / f));

    write_fast_config(dir / "cfg2.json", (dir / "out2").string());
    REQUIRE(run_cli("--config " + (dir / "cfg2.json").string() + " run") == 0);
    for (const char* f : {"rmse_table.txt", "anova.txt", "posthoc.txt"})
        CHECK(slurp(dir / "out1" / f) == slurp(dir / "out2" / f));
    fs::remove_all(dir);
}

TEST_CASE("cli synth emits a loadable csv and fit writes a model record") {
    auto dir = workdir();
    auto csv = (dir / "synth.csv").string();
    REQUIRE(run_cli("synth --n 42 --gen-seed 3 --noise 100 --file " + csv) == 0);
    REQUIRE(fs::exists(csv));
    auto head = slurp(csv).substr(0, 120);
    CHECK(head.find("quarter,rpks,airfare,gdp_pc,unemp,interest,jetfuel,accom,d911,dvirgin,"
                    "dolympics,dcommgames") == 0);

    std::ofstream(dir / "csvcfg.json") << R"({"dataset": {"csv": ")" << csv << R"("}})";
    REQUIRE(run_cli("--config " + (dir / "csvcfg.json").string() + " --out " +
                    (dir / "fitout").string() + " fit mlr") == 0);
    auto rec = slurp(dir / "fitout" / "model_mlr.txt");
    CHECK(rec.find("model mlr") == 0);
    fs::remove_all(dir);
}

TEST_CASE("cli exit codes distinguish config, data, and fit errors") {
    auto dir = workdir();

    // config error: malformed JSON
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK(run_cli("--config " + (dir / "bad.json").string() + " run") == 2);

    // config error: unknown key
    std::ofstream(dir / "unk.json") << R"({"nonsense": true})";
    CHECK(run_cli("--config " + (dir / "unk.json").string() + " run") == 2);

    // config error: no dataset at all
    std::ofstream(dir / "nods.json") << R"({"alpha": 0.05})";
    CHECK(run_cli("--config " + (dir / "nods.json").string() + " run") == 2);

    // data error: missing csv file
    std::ofstream(dir / "nofile.json")
        << R"({"dataset": {"csv": ")" << (dir / "absent.csv").string() << R"("}})";
    CHECK(run_cli("--config " + (dir / "nofile.json").string() + " run") == 3);

    // data error: header-only csv
    std::ofstream(dir / "empty.csv")
        << "quarter,rpks,airfare,gdp_pc,unemp,interest,jetfuel,accom,d911,dvirgin,"
           "dolympics,dcommgames\n";
    std::ofstream(dir / "emptycfg.json")
        << R"({"dataset": {"csv": ")" << (dir / "empty.csv").string() << R"("}})";
    CHECK(run_cli("--config " + (dir / "emptycfg.json").string() + " run") == 3);

    // fit error: too few rows for mlr, reported as exit 4
    std::ofstream(dir / "tiny.json") << R"({
        "dataset": {"synthetic": {"n": 12, "seed": 1, "noise_sd": 10.0}},
        "models": {"ann": {"enabled": false}, "anfis": {"enabled": false},
                   "ga": {"enabled": false}, "svr": {"enabled": false},
                   "rtree": {"enabled": false}}
    })";
    CHECK(run_cli("--config " + (dir / "tiny.json").string() + " run") == 4);

    // unknown subcommand / flag is a CLI parse error
    CHECK(run_cli("frobnicate") != 0);
    fs::remove_all(dir);
}

TEST_CASE("cli compare and evaluate write their artifact subsets") {
    auto dir = workdir();
    write_fast_config(dir / "cfg.json", (dir / "cmp").string());
    REQUIRE(run_cli("--config " + (dir / "cfg.json").string() + " compare") == 0);
    CHECK(fs::exists(dir / "cmp" / "anova.txt"));
    CHECK(fs::exists(dir / "cmp" / "posthoc.txt"));
    CHECK_FALSE(fs::exists(dir / "cmp" / "rmse_table.txt"));

    write_fast_config(dir / "cfg_eval.json", (dir / "ev").string());
    REQUIRE(run_cli("--config " + (dir / "cfg_eval.json").string() + " evaluate") == 0);
    CHECK(fs::exists(dir / "ev" / "rmse_table.txt"));
    CHECK(fs::exists(dir / "ev" / "scatter_mlr.svg"));
    CHECK_FALSE(fs::exists(dir / "ev" / "anova.txt"));
    fs::remove_all(dir);
}

TEST_CASE("cli --synthetic bypasses ingestion and --seed forces reruns to agree") {
    auto dir = workdir();
    REQUIRE(run_cli("--synthetic --seed 5 --out " + (dir / "a").string() + " run") == 0);
    REQUIRE(run_cli("--synthetic --seed 5 --out " + (dir / "b").string() + " run") == 0);
    CHECK(slurp(dir / "a" / "rmse_table.txt") == slurp(dir / "b" / "rmse_table.txt"));
    CHECK(slurp(dir / "a" / "posthoc.txt") == slurp(dir / "b" / "posthoc.txt"));
    fs::remove_all(dir);
}
