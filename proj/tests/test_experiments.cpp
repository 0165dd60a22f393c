#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>

#include "predclusters/experiments.hpp"
#include "test_util.hpp"

using namespace predclusters;
namespace fs = std::filesystem;

namespace {

// 30-point, 2-feature csv with a blocky structure so runs stay fast.
fs::path small_csv(const std::string& tag) {
    const auto dir = testutil::fresh_dir(tag);
    const auto path = dir / "mini.csv";
    std::ofstream out(path);
    out << "x1,x2,y\n";
    RandomStream rng(4004);
    for (int i = 0; i < 30; ++i) {
        const double cx = i < 15 ? 0.0 : 8.0;
        const double x1 = cx + rng.uniform01();
        const double x2 = cx + rng.uniform01();
        const double y = (i < 15 ? 2.0 * x1 : -3.0 * x2) + 0.1 * rng.uniform01();
        out << x1 << ',' << x2 << ',' << y << '\n';
    }
    return path;
}

ExperimentConfig small_config(const fs::path& csv, const fs::path& out_dir) {
    ExperimentConfig cfg;
    cfg.data_path = csv.string();
    cfg.evolution.population_size = 10;
    cfg.evolution.iterations = 5;
    cfg.evolution.seed = 31415;
    cfg.out_dir = out_dir.string();
    return cfg;
}

nlohmann::json parse_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("the model matrix spans all eight design combinations") {
    const auto matrix = build_model_matrix();
    struct Expect { int id; InitMethod init; RegressionMode reg; UpdateMethod update; };
    const Expect expected[] = {
        {1, InitMethod::RSO, RegressionMode::CP, UpdateMethod::CM},
        {2, InitMethod::RC, RegressionMode::CP, UpdateMethod::CM},
        {3, InitMethod::RSO, RegressionMode::LR, UpdateMethod::CM},
        {4, InitMethod::RC, RegressionMode::LR, UpdateMethod::CM},
        {5, InitMethod::RSO, RegressionMode::CP, UpdateMethod::SGD},
        {6, InitMethod::RC, RegressionMode::CP, UpdateMethod::SGD},
        {7, InitMethod::RSO, RegressionMode::LR, UpdateMethod::SGD},
        {8, InitMethod::RC, RegressionMode::LR, UpdateMethod::SGD},
    };
    for (const auto& e : expected) {
        const ModelSpec& m = matrix[static_cast<std::size_t>(e.id - 1)];
        CHECK(m.id == e.id);
        CHECK(m.init == e.init);
        CHECK(m.regression == e.reg);
        CHECK(m.update == e.update);
        const ModelSpec by_id = model_by_id(e.id);
        CHECK(by_id.init == e.init);
        CHECK(by_id.regression == e.reg);
        CHECK(by_id.update == e.update);
    }
    CHECK_THROWS(model_by_id(0));
    CHECK_THROWS(model_by_id(9));
}

TEST_CASE("per-run seeds separate models and replicates") {
    CHECK(run_seed(100, 3, 2) == 100 + 30000 + 2);
    std::vector<std::uint64_t> seen;
    for (int id = 1; id <= 8; ++id)
        for (int rep = 1; rep <= 5; ++rep) seen.push_back(run_seed(42, id, rep));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("the configuration hash reacts to every field") {
    const auto csv = small_csv("hash");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "out");
    cfg.models = {1, 3};
    const std::uint64_t base = config_hash(cfg);
    CHECK(base == config_hash(cfg));  // stable

    auto changed = cfg;
    changed.evolution.seed += 1;
    CHECK(config_hash(changed) != base);
    changed = cfg;
    changed.replicates = 7;
    CHECK(config_hash(changed) != base);
    changed = cfg;
    changed.models = {1, 4};
    CHECK(config_hash(changed) != base);
    changed = cfg;
    changed.sgd.alpha = 0.5;
    CHECK(config_hash(changed) != base);
    changed = cfg;
    changed.normalization = Normalization::ZScore;
    CHECK(config_hash(changed) != base);
}

TEST_CASE("a run dispatches to the model's update engine") {
    const auto csv = small_csv("dispatch");
    const ExperimentConfig cfg = small_config(csv, csv.parent_path() / "out");
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);

    const RunResult cm = execute_run(ds, cfg, model_by_id(3), 5);
    CHECK(cm.update_method == "CM");
    CHECK(cm.model_id == 3);
    CHECK(cm.init_method == "RSO");
    CHECK(cm.regression_mode == "LR");
    CHECK(cm.seed == 5);

    const RunResult sgd = execute_run(ds, cfg, model_by_id(6), 5);
    CHECK(sgd.update_method == "SGD");
    CHECK(sgd.init_method == "RC");
    CHECK(sgd.regression_mode == "CP");
}

TEST_CASE("run files round-trip through disk including infinities") {
    const auto csv = small_csv("roundtrip");
    const ExperimentConfig cfg = small_config(csv, csv.parent_path() / "out");
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);
    const RunResult result = execute_run(ds, cfg, model_by_id(1), 99);

    const auto dir = csv.parent_path() / "run_files";
    write_run_files(result, dir.string());
    CHECK(fs::exists(dir / "result.json"));
    CHECK(fs::exists(dir / "generations.csv"));
    CHECK(fs::exists(dir / "final_population.csv"));

    const std::string gen_csv = testutil::read_text(dir / "generations.csv");
    CHECK(gen_csv.rfind("generation,mean_deviation,min_deviation,mean_mae,min_mae,front1_size", 0) == 0);
    const std::string fin_csv = testutil::read_text(dir / "final_population.csv");
    CHECK(fin_csv.rfind("id,k,deviation,mae,rank,crowding", 0) == 0);

    const RunResult back = load_run_result(dir.string());
    CHECK(back.model_id == result.model_id);
    CHECK(back.seed == result.seed);
    CHECK(back.init_method == result.init_method);
    CHECK(back.regression_mode == result.regression_mode);
    CHECK(back.update_method == result.update_method);
    REQUIRE(back.generations.size() == result.generations.size());
    for (std::size_t i = 0; i < back.generations.size(); ++i) {
        CHECK(back.generations[i].mean_deviation == result.generations[i].mean_deviation);
        CHECK(back.generations[i].min_mae == result.generations[i].min_mae);
        CHECK(back.generations[i].front1_size == result.generations[i].front1_size);
    }
    REQUIRE(back.final_population.size() == result.final_population.size());
    for (std::size_t i = 0; i < back.final_population.size(); ++i) {
        CHECK(back.final_population[i].deviation == result.final_population[i].deviation);
        CHECK(back.final_population[i].crowding == result.final_population[i].crowding);
        CHECK(back.final_population[i].rank == result.final_population[i].rank);
    }
}

TEST_CASE("an experiment writes a manifest plus one directory per run") {
    const auto csv = small_csv("exp");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "exp_out");
    cfg.models = {1, 6};
    cfg.replicates = 2;

    const auto outcomes = run_experiment(cfg);
    REQUIRE(outcomes.size() == 4);
    for (const auto& o : outcomes) {
        CHECK(o.ok);
        CHECK(o.error.empty());
        CHECK(fs::exists(fs::path(cfg.out_dir) / o.dir / "result.json"));
        CHECK(o.seed == run_seed(cfg.evolution.seed, o.model_id, o.replicate));
    }

    const auto manifest = parse_file(fs::path(cfg.out_dir) / "manifest.json");
    CHECK(manifest.at("replicates") == 2);
    CHECK(manifest.at("base_seed") == cfg.evolution.seed);
    CHECK(manifest.at("models") == nlohmann::json::array({1, 6}));
    CHECK(manifest.at("runs").size() == 4);
    CHECK(manifest.at("dataset").at("rows") == 30);
    CHECK(manifest.at("settings").at("population_size") == 10);

    SUBCASE("gathered samples pool one group per model") {
        const GatheredSamples samples = gather_final_samples(cfg.out_dir);
        REQUIRE(samples.deviation.size() == 2);
        REQUIRE(samples.mae.size() == 2);
        CHECK(samples.deviation[0].label == "model 1");
        CHECK(samples.deviation[1].label == "model 6");
        CHECK(samples.deviation[0].values.size() == 20);  // 2 replicates x pop 10
        CHECK(samples.mae[1].values.size() == 20);
    }
}

TEST_CASE("experiment output is identical across reruns and worker counts") {
    const auto csv = small_csv("det");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "det_a");
    cfg.models = {2, 5};
    cfg.replicates = 2;
    run_experiment(cfg);

    ExperimentConfig par = cfg;
    par.out_dir = (csv.parent_path() / "det_b").string();
    par.jobs = 4;
    run_experiment(par);

    for (const auto& run : {"run_2_1", "run_2_2", "run_5_1", "run_5_2"}) {
        for (const auto& file : {"generations.csv", "final_population.csv"}) {
            const auto a = testutil::read_text(fs::path(cfg.out_dir) / run / file);
            const auto b = testutil::read_text(fs::path(par.out_dir) / run / file);
            CHECK(a == b);
            CHECK(!a.empty());
        }
        auto ja = parse_file(fs::path(cfg.out_dir) / run / "result.json");
        auto jb = parse_file(fs::path(par.out_dir) / run / "result.json");
        ja.erase("wall_time_seconds");
        jb.erase("wall_time_seconds");
        CHECK(ja == jb);
    }
}

TEST_CASE("failed runs are recorded without sinking the experiment") {
    const auto csv = small_csv("fail");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "fail_out");
    cfg.models = {1};
    cfg.replicates = 1;
    cfg.evolution.population_size = 1;  // invalid: forces a per-run failure

    const auto outcomes = run_experiment(cfg);
    REQUIRE(outcomes.size() == 1);
    CHECK_FALSE(outcomes[0].ok);
    CHECK(!outcomes[0].error.empty());
    const auto manifest = parse_file(fs::path(cfg.out_dir) / "manifest.json");
    CHECK(manifest.at("runs")[0].at("ok") == false);
}

TEST_CASE("model comparison is invariant to group order and finds double winners") {
    std::vector<SampleGroup> dev, err;
    RandomStream rng(2121);
    for (int m = 0; m < 4; ++m) {
        SampleGroup d{"model " + std::to_string(m + 1), {}};
        SampleGroup e{"model " + std::to_string(m + 1), {}};
        for (int i = 0; i < 40; ++i) {
            d.values.push_back(10.0 * m + rng.uniform01());
            e.values.push_back((m == 0 ? 0.0 : 5.0) + rng.uniform01());
        }
        dev.push_back(d);
        err.push_back(e);
    }
    const ModelComparison c = compare_models(dev, err);
    REQUIRE(c.best_both.size() == 1);
    CHECK(c.best_both[0] == "model 1");
    CHECK(c.deviation.labels[static_cast<std::size_t>(c.deviation.best_group)] == "model 1");

    auto dev2 = dev; auto err2 = err;
    std::reverse(dev2.begin(), dev2.end());
    std::reverse(err2.begin(), err2.end());
    const ModelComparison c2 = compare_models(dev2, err2);
    CHECK(c2.best_both == c.best_both);
}

TEST_CASE("indistinguishable models all count as winners") {
    std::vector<SampleGroup> dev, err;
    for (int m = 0; m < 3; ++m) {
        dev.push_back({"model " + std::to_string(m + 1), {1.0, 2.0, 3.0, 4.0}});
        err.push_back({"model " + std::to_string(m + 1), {0.5, 0.6, 0.7, 0.8}});
    }
    const ModelComparison c = compare_models(dev, err);
    CHECK(c.deviation.anova.p == 1.0);
    CHECK(c.best_both == std::vector<std::string>{"model 1", "model 2", "model 3"});
}

TEST_CASE("comparison files keep both objective reports") {
    const auto csv = small_csv("cmp");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "cmp_out");
    cfg.models = {1, 3};
    cfg.replicates = 2;
    run_experiment(cfg);
    const GatheredSamples samples = gather_final_samples(cfg.out_dir);
    const ModelComparison c = compare_models(samples.deviation, samples.mae);
    const auto path = fs::path(cfg.out_dir) / "comparison.json";
    write_comparison(c, path.string());

    const auto j = parse_file(path);
    CHECK(j.at("alpha") == 0.05);
    CHECK(j.at("deviation").at("labels").size() == 2);
    CHECK(j.at("mae").at("anova").contains("f"));
    CHECK(j.at("mae").at("anova").contains("p"));
    CHECK(j.contains("best_both"));
    CHECK(j.at("deviation").at("subsets").size() >= 1);
}

TEST_CASE("the paired comparison runs both engines at matched seeds") {
    const auto csv = small_csv("paired");
    ExperimentConfig cfg = small_config(csv, csv.parent_path() / "paired_out");
    cfg.replicates = 3;

    std::vector<RunResult> runs;
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);
    const auto reports = compare_multi_vs_single(ds, cfg, {3}, &runs);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].model_id == 3);
    REQUIRE(runs.size() == 6);  // (multi, single) x 3 replicates
    for (std::size_t r = 0; r < runs.size(); r += 2) {
        CHECK(runs[r].update_method == "CM");
        CHECK(runs[r + 1].update_method == "GA");
        CHECK(runs[r].seed == runs[r + 1].seed);
    }
    CHECK(reports[0].ttest.df == 3 * 10 * 2 - 2);
    // only the four crossover+mutation models qualify
    CHECK_THROWS(compare_multi_vs_single(ds, cfg, {5}));
}
