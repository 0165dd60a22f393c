#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "predclusters/experiments.hpp"
#include "predclusters/svg.hpp"

namespace fs = std::filesystem;
using namespace predclusters;

namespace {

struct CommonOpts {
    std::string data;
    std::string target = "last";
    std::string normalize = "none";
    std::string out;
    int pop = 100;
    int iters = 100;
    double crossover_pct = 90.0;
    double mutation_pct = 3.0;
    double sgd_cgamma = 2000.0;
    double sgd_calpha = 1.0;
    double sgd_alpha = 0.75;
    int min_cluster_size = 0;
    std::uint64_t seed = 42;
    bool seed_given = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts, bool with_out) {
    cmd->add_option("--data", opts.data, "input CSV with a header row")->required();
    cmd->add_option("--target", opts.target, "outcome column: name, 0-based index, or 'last'")
        ->capture_default_str();
    cmd->add_option("--normalize", opts.normalize, "feature normalization")
        ->check(CLI::IsMember({"none", "zscore", "minmax"}))
        ->capture_default_str();
    cmd->add_option("--pop", opts.pop, "population size")->capture_default_str();
    cmd->add_option("--iters", opts.iters, "number of iterations")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "random seed (falls back to PREDCLUSTERS_SEED, then 42)")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--crossover-pct", opts.crossover_pct, "crossover percentage")->capture_default_str();
    cmd->add_option("--mutation-pct", opts.mutation_pct, "mutation percentage")->capture_default_str();
    cmd->add_option("--sgd-cgamma", opts.sgd_cgamma, "SGD learning-rate numerator")->capture_default_str();
    cmd->add_option("--sgd-calpha", opts.sgd_calpha, "SGD learning-rate size coefficient")
        ->capture_default_str();
    cmd->add_option("--sgd-alpha", opts.sgd_alpha, "SGD learning-rate exponent")->capture_default_str();
    cmd->add_option("--min-cluster-size", opts.min_cluster_size,
                    "repair clusters smaller than this (0 = off)")
        ->capture_default_str();
    if (with_out) cmd->add_option("--out", opts.out, "output directory")->required();
}

int resolve_seed(CommonOpts& opts) {
    if (opts.seed_given) return 0;
    const char* env = std::getenv("PREDCLUSTERS_SEED");
    if (!env || !*env) return 0;
    std::uint64_t v = 0;
    const char* last = env + std::string(env).size();
    const auto res = std::from_chars(env, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        std::cerr << "PREDCLUSTERS_SEED is not an unsigned integer: '" << env << "'\n";
        return 2;
    }
    opts.seed = v;
    return 0;
}

ExperimentConfig build_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    cfg.data_path = opts.data;
    cfg.target = TargetSelector::parse(opts.target);
    cfg.normalization = normalization_from_string(opts.normalize);
    cfg.evolution.population_size = opts.pop;
    cfg.evolution.iterations = opts.iters;
    cfg.evolution.crossover_pct = opts.crossover_pct;
    cfg.evolution.mutation_pct = opts.mutation_pct;
    cfg.evolution.min_cluster_size = opts.min_cluster_size;
    cfg.evolution.seed = opts.seed;
    cfg.sgd.c_gamma = opts.sgd_cgamma;
    cfg.sgd.c_alpha = opts.sgd_calpha;
    cfg.sgd.alpha = opts.sgd_alpha;
    cfg.out_dir = opts.out;
    return cfg;
}

int cmd_run(const CommonOpts& opts, int model_id) {
    const ExperimentConfig cfg = build_config(opts);
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);
    const RunResult result = execute_run(ds, cfg, model_by_id(model_id), cfg.evolution.seed);
    write_run_files(result, cfg.out_dir);
    std::cout << "model " << model_id << " finished: " << result.generations.size()
              << " generation rows, front 1 size " << result.generations.back().front1_size << "\n";
    return 0;
}

int cmd_matrix(const CommonOpts& opts, int replicates, int jobs) {
    ExperimentConfig cfg = build_config(opts);
    cfg.replicates = replicates;
    cfg.jobs = jobs;
    for (int id = 1; id <= 8; ++id) cfg.models.push_back(id);

    const std::vector<RunOutcome> outcomes = run_experiment(cfg);
    int failures = 0;
    for (const RunOutcome& o : outcomes) {
        if (!o.ok) {
            ++failures;
            std::cerr << "run " << o.dir << " failed: " << o.error << "\n";
        }
    }

    const GatheredSamples samples = gather_final_samples(cfg.out_dir);
    if (samples.deviation.size() >= 2) {
        const ModelComparison comparison = compare_models(samples.deviation, samples.mae);
        write_comparison(comparison, (fs::path(cfg.out_dir) / "comparison.json").string());
        std::cout << "matrix finished: " << outcomes.size() - static_cast<std::size_t>(failures) << "/"
                  << outcomes.size() << " runs ok, best on both objectives:";
        for (const std::string& label : comparison.best_both) std::cout << " " << label;
        std::cout << "\n";
    } else {
        std::cerr << "too few successful models for a comparison\n";
    }
    return failures == 0 ? 0 : 1;
}

int cmd_baseline(const CommonOpts& opts, int model_id, int replicates) {
    ExperimentConfig cfg = build_config(opts);
    cfg.replicates = replicates;
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);

    std::vector<RunResult> runs;
    const std::vector<PairedModelReport> reports =
        compare_multi_vs_single(ds, cfg, {model_id}, &runs);

    for (int rep = 1; rep <= replicates; ++rep) {
        const std::size_t base = static_cast<std::size_t>(2 * (rep - 1));
        const std::string suffix = std::to_string(model_id) + "_" + std::to_string(rep);
        write_run_files(runs[base], (fs::path(cfg.out_dir) / ("run_" + suffix)).string());
        write_run_files(runs[base + 1], (fs::path(cfg.out_dir) / ("soga_" + suffix)).string());
    }
    write_paired_report(reports, (fs::path(cfg.out_dir) / "baseline_report.json").string());

    const PairedModelReport& r = reports.front();
    std::cout << "model " << r.model_id << ": multi mean MAE " << r.multi_mean_mae
              << ", deviation-only GA mean MAE " << r.single_mean_mae << ", t-test p " << r.ttest.p
              << "\n";
    return 0;
}

int cmd_compare(const std::string& in_dir, const std::string& out_path, double alpha) {
    const GatheredSamples samples = gather_final_samples(in_dir);
    if (samples.deviation.size() < 2) {
        std::cerr << "need results from at least two models in " << in_dir << "\n";
        return 1;
    }
    const ModelComparison comparison = compare_models(samples.deviation, samples.mae, alpha);
    const std::string path = out_path.empty() ? (fs::path(in_dir) / "comparison.json").string() : out_path;
    write_comparison(comparison, path);
    std::cout << "comparison written to " << path << "\n";
    return 0;
}

std::vector<Series> trajectory_series(const RunResult& result, bool deviation) {
    std::vector<Series> series;
    Series mean{deviation ? "mean_deviation" : "mean_mae", {}, {}};
    Series min{deviation ? "min_deviation" : "min_mae", {}, {}};
    for (const GenerationRow& row : result.generations) {
        mean.x.push_back(row.generation);
        mean.y.push_back(deviation ? row.mean_deviation : row.mean_mae);
        min.x.push_back(row.generation);
        min.y.push_back(deviation ? row.min_deviation : row.min_mae);
    }
    series.push_back(std::move(mean));
    series.push_back(std::move(min));
    return series;
}

int cmd_plot(const std::string& in_dir, const std::string& out_dir) {
    fs::create_directories(out_dir);
    if (fs::exists(fs::path(in_dir) / "result.json")) {
        const RunResult result = load_run_result(in_dir);
        std::vector<Series> series = trajectory_series(result, true);
        for (Series& s : trajectory_series(result, false)) series.push_back(std::move(s));
        write_line_chart((fs::path(out_dir) / "trajectory.svg").string(),
                         "Objective values per generation", "generation", "objective value", series);

        SampleGroup dev{"deviation", {}};
        SampleGroup mae{"mae", {}};
        for (const FinalRow& row : result.final_population) {
            dev.values.push_back(row.deviation);
            mae.values.push_back(row.mae);
        }
        write_box_plot((fs::path(out_dir) / "boxes.svg").string(), "Final population objectives",
                       "objective value", {dev, mae});
        std::cout << "wrote trajectory.svg and boxes.svg to " << out_dir << "\n";
        return 0;
    }
    if (fs::exists(fs::path(in_dir) / "manifest.json")) {
        const GatheredSamples samples = gather_final_samples(in_dir);
        std::ifstream in((fs::path(in_dir) / "manifest.json").string());
        nlohmann::json manifest = nlohmann::json::parse(in);
        std::vector<Series> dev_series;
        std::vector<Series> mae_series;
        for (const auto& run : manifest.at("runs")) {
            if (!run.at("ok").get<bool>()) continue;
            const RunResult result =
                load_run_result((fs::path(in_dir) / run.at("dir").get<std::string>()).string());
            const std::string name = "model " + std::to_string(result.model_id) + " r" +
                                     std::to_string(run.at("replicate").get<int>());
            Series dev{name, {}, {}};
            Series mae{name, {}, {}};
            for (const GenerationRow& row : result.generations) {
                dev.x.push_back(row.generation);
                dev.y.push_back(row.mean_deviation);
                mae.x.push_back(row.generation);
                mae.y.push_back(row.mean_mae);
            }
            dev_series.push_back(std::move(dev));
            mae_series.push_back(std::move(mae));
        }
        write_line_chart((fs::path(out_dir) / "trajectory_deviation.svg").string(),
                         "Mean deviation per generation", "generation", "deviation", dev_series);
        write_line_chart((fs::path(out_dir) / "trajectory_mae.svg").string(),
                         "Mean MAE per generation", "generation", "MAE", mae_series);
        write_box_plot((fs::path(out_dir) / "boxes_deviation.svg").string(),
                       "Final population deviation by model", "deviation", samples.deviation);
        write_box_plot((fs::path(out_dir) / "boxes_mae.svg").string(), "Final population MAE by model",
                       "MAE", samples.mae);
        std::cout << "wrote 4 SVG files to " << out_dir << "\n";
        return 0;
    }
    std::cerr << in_dir << " holds neither result.json nor manifest.json\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary clustering that balances cluster compactness against outcome predictability"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    int run_model = 1;
    CLI::App* run = app.add_subcommand("run", "run one model");
    run->add_option("--model", run_model, "model id 1..8")->required()->check(CLI::Range(1, 8));
    add_common_options(run, run_opts, true);

    CommonOpts matrix_opts;
    int matrix_replicates = 1;
    int matrix_jobs = 1;
    CLI::App* matrix = app.add_subcommand("matrix", "run all 8 models and compare them");
    add_common_options(matrix, matrix_opts, true);
    matrix->add_option("--replicates", matrix_replicates, "replicates per model")->capture_default_str();
    matrix->add_option("--jobs", matrix_jobs, "parallel worker threads")->capture_default_str();

    CommonOpts baseline_opts;
    int baseline_model = 1;
    int baseline_replicates = 1;
    CLI::App* baseline = app.add_subcommand(
        "baseline", "compare one model against the deviation-only genetic algorithm");
    baseline->add_option("--model", baseline_model, "model id 1..4")->required()->check(CLI::Range(1, 4));
    add_common_options(baseline, baseline_opts, true);
    baseline->add_option("--replicates", baseline_replicates, "seed pairs to run")->capture_default_str();

    std::string compare_in;
    std::string compare_out;
    double compare_alpha = 0.05;
    CLI::App* compare = app.add_subcommand("compare", "statistics over an existing experiment directory");
    compare->add_option("--in", compare_in, "experiment directory with manifest.json")->required();
    compare->add_option("--out", compare_out, "output JSON path (default <in>/comparison.json)");
    compare->add_option("--alpha", compare_alpha, "significance level")->capture_default_str();

    std::string plot_in;
    std::string plot_out;
    CLI::App* plot = app.add_subcommand("plot", "emit SVG charts from result files");
    plot->add_option("--in", plot_in, "run or experiment directory")->required();
    plot->add_option("--out", plot_out, "directory for the SVG files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(run)) {
            if (const int rc = resolve_seed(run_opts)) return rc;
            return cmd_run(run_opts, run_model);
        }
        if (app.got_subcommand(matrix)) {
            if (const int rc = resolve_seed(matrix_opts)) return rc;
            return cmd_matrix(matrix_opts, matrix_replicates, matrix_jobs);
        }
        if (app.got_subcommand(baseline)) {
            if (const int rc = resolve_seed(baseline_opts)) return rc;
            return cmd_baseline(baseline_opts, baseline_model, baseline_replicates);
        }
        if (app.got_subcommand(compare)) return cmd_compare(compare_in, compare_out, compare_alpha);
        if (app.got_subcommand(plot)) return cmd_plot(plot_in, plot_out);
    } catch (const DatasetError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
