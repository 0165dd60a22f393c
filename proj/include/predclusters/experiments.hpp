#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "predclusters/baseline.hpp"
#include "predclusters/dataset.hpp"
#include "predclusters/nsga2.hpp"
#include "predclusters/run_result.hpp"
#include "predclusters/sgd.hpp"
#include "predclusters/stats.hpp"

namespace predclusters {

enum class UpdateMethod { CM, SGD };

std::string to_string(UpdateMethod m);

struct ModelSpec {
    int id = 0;  // 1..8
    InitMethod init = InitMethod::RSO;
    RegressionMode regression = RegressionMode::CP;
    UpdateMethod update = UpdateMethod::CM;
};

// The full 2x2x2 factorial: ids 1..4 update by crossover+mutation, 5..8 by
// the SGD pass; odd ids initialize by RSO, even by RC; 1,2,5,6 use CP and
// 3,4,7,8 use LR.
std::array<ModelSpec, 8> build_model_matrix();
ModelSpec model_by_id(int id);

struct ExperimentConfig {
    std::string data_path;
    TargetSelector target;
    Normalization normalization = Normalization::None;
    std::vector<int> models;  // ids to run
    int replicates = 1;
    EvolutionConfig evolution;  // evolution.seed is the base seed
    SgdParams sgd;
    std::string out_dir;
    int jobs = 1;
};

// Deterministic per-run seed: base + model_id * 10^4 + replicate.
std::uint64_t run_seed(std::uint64_t base, int model_id, int replicate);

// FNV-1a over the canonical config string; recorded in the manifest.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RunOutcome {
    int model_id = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    std::string dir;
    bool ok = false;
    std::string error;
};

// Dispatches the model's update method with the model's initialization and
// regression mode at the given seed.
RunResult execute_run(const Dataset& ds, const ExperimentConfig& cfg, const ModelSpec& model,
                      std::uint64_t seed);

// result.json plus generations.csv and final_population.csv.
void write_run_files(const RunResult& result, const std::string& dir);
RunResult load_run_result(const std::string& dir);

// Every selected model x replicate, optionally across worker threads, each
// run into out_dir/run_{model}_{replicate}/; the manifest records every
// outcome, including failures, and is written once at the end.
std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg);

struct ModelComparison {
    double alpha = 0.05;
    StatsReport deviation;
    StatsReport mae;
    std::vector<std::string> best_both;  // winners on both objectives
};

ModelComparison compare_models(const std::vector<SampleGroup>& deviation_samples,
                               const std::vector<SampleGroup>& mae_samples, double alpha = 0.05);

// Final-population objective values per model, pooled over replicates,
// gathered from an experiment directory written by run_experiment.
struct GatheredSamples {
    std::vector<SampleGroup> deviation;
    std::vector<SampleGroup> mae;
};
GatheredSamples gather_final_samples(const std::string& experiment_dir);

void write_comparison(const ModelComparison& comparison, const std::string& path);

struct PairedModelReport {
    int model_id = 0;
    double multi_mean_mae = 0.0;
    double single_mean_mae = 0.0;
    TTestResult ttest;
};

// For each CM-family model: one multi-objective run and one deviation-only
// GA run per replicate at identical seeds; final-population MAE samples are
// pooled per side and compared with the pooled t-test. When runs_out is
// non-null it receives (multi, single) result pairs in execution order.
std::vector<PairedModelReport> compare_multi_vs_single(const Dataset& ds, const ExperimentConfig& cfg,
                                                       const std::vector<int>& models,
                                                       std::vector<RunResult>* runs_out = nullptr);

void write_paired_report(const std::vector<PairedModelReport>& reports, const std::string& path);

}  // namespace predclusters
