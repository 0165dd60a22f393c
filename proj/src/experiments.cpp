#include "predclusters/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "predclusters/format.hpp"

namespace predclusters {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string target_to_string(const TargetSelector& t) {
    switch (t.kind) {
        case TargetSelector::Kind::Last: return "last";
        case TargetSelector::Kind::Index: return std::to_string(t.index);
        case TargetSelector::Kind::Name: return t.name;
    }
    return "last";
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

json settings_json(const ExperimentConfig& cfg) {
    return json{{"population_size", cfg.evolution.population_size},
                {"iterations", cfg.evolution.iterations},
                {"crossover_pct", cfg.evolution.crossover_pct},
                {"mutation_pct", cfg.evolution.mutation_pct},
                {"min_cluster_size", cfg.evolution.min_cluster_size},
                {"sgd", json{{"c_gamma", cfg.sgd.c_gamma},
                             {"c_alpha", cfg.sgd.c_alpha},
                             {"alpha", cfg.sgd.alpha}}}};
}

json dataset_json(const ExperimentConfig& cfg, const Dataset& ds) {
    return json{{"path", cfg.data_path},
                {"target", target_to_string(cfg.target)},
                {"normalization", to_string(cfg.normalization)},
                {"rows", ds.n()},
                {"features", ds.dims()}};
}

double json_double(const json& v) {
    // Non-finite doubles serialize as null; the only such field we write is
    // crowding, which can legitimately be +infinity.
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

json stats_report_json(const StatsReport& report) {
    json anova{{"f", report.anova.f},
               {"p", report.anova.p},
               {"df_between", report.anova.df_between},
               {"df_within", report.anova.df_within},
               {"ms_within", report.anova.ms_within}};
    json pairwise = json::array();
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        for (std::size_t j = i + 1; j < report.labels.size(); ++j) {
            pairwise.push_back(json{{"a", report.labels[i]},
                                    {"b", report.labels[j]},
                                    {"p", report.tukey.pairwise[i][j]}});
        }
    }
    json subsets = json::array();
    for (const HomogeneousSubset& s : report.tukey.subsets) {
        json groups = json::array();
        json means = json::array();
        for (int g : s.groups) {
            groups.push_back(report.labels[static_cast<std::size_t>(g)]);
            means.push_back(report.means[static_cast<std::size_t>(g)]);
        }
        subsets.push_back(json{{"groups", groups}, {"means", means}, {"sig", s.sig}});
    }
    json equivalents = json::array();
    for (int g : report.best_equivalents) equivalents.push_back(report.labels[static_cast<std::size_t>(g)]);
    return json{{"labels", report.labels},
                {"means", report.means},
                {"anova", anova},
                {"pairwise", pairwise},
                {"subsets", subsets},
                {"best", report.labels[static_cast<std::size_t>(report.best_group)]},
                {"best_equivalents", equivalents}};
}

std::vector<std::string> report_winners(const StatsReport& report) {
    std::vector<std::string> winners;
    winners.push_back(report.labels[static_cast<std::size_t>(report.best_group)]);
    for (int g : report.best_equivalents) winners.push_back(report.labels[static_cast<std::size_t>(g)]);
    std::sort(winners.begin(), winners.end());
    return winners;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace

std::string to_string(UpdateMethod m) { return m == UpdateMethod::CM ? "CM" : "SGD"; }

std::array<ModelSpec, 8> build_model_matrix() {
    std::array<ModelSpec, 8> matrix{};
    for (int id = 1; id <= 8; ++id) {
        ModelSpec& spec = matrix[static_cast<std::size_t>(id - 1)];
        spec.id = id;
        spec.init = id % 2 == 1 ? InitMethod::RSO : InitMethod::RC;
        spec.regression = ((id - 1) / 2) % 2 == 0 ? RegressionMode::CP : RegressionMode::LR;
        spec.update = id <= 4 ? UpdateMethod::CM : UpdateMethod::SGD;
    }
    return matrix;
}

ModelSpec model_by_id(int id) {
    if (id < 1 || id > 8) throw std::invalid_argument("model id must be 1..8");
    return build_model_matrix()[static_cast<std::size_t>(id - 1)];
}

std::uint64_t run_seed(std::uint64_t base, int model_id, int replicate) {
    return base + static_cast<std::uint64_t>(model_id) * 10000ull + static_cast<std::uint64_t>(replicate);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::ostringstream canon;
    canon << cfg.data_path << '|' << target_to_string(cfg.target) << '|' << to_string(cfg.normalization)
          << '|';
    for (int m : cfg.models) canon << m << ',';
    canon << '|' << cfg.replicates << '|' << cfg.evolution.population_size << '|'
          << cfg.evolution.iterations << '|' << format_double(cfg.evolution.crossover_pct) << '|'
          << format_double(cfg.evolution.mutation_pct) << '|' << cfg.evolution.seed << '|'
          << cfg.evolution.min_cluster_size << '|' << format_double(cfg.sgd.c_gamma) << '|'
          << format_double(cfg.sgd.c_alpha) << '|' << format_double(cfg.sgd.alpha);
    const std::string s = canon.str();
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

RunResult execute_run(const Dataset& ds, const ExperimentConfig& cfg, const ModelSpec& model,
                      std::uint64_t seed) {
    EvolutionConfig ec = cfg.evolution;
    ec.seed = seed;
    ec.init_method = model.init;
    ec.regression_mode = model.regression;
    RunResult result = model.update == UpdateMethod::CM ? run_nsga2(ds, ec)
                                                        : run_sgd_evolution(ds, ec, cfg.sgd);
    result.model_id = model.id;
    return result;
}

void write_run_files(const RunResult& result, const std::string& dir) {
    fs::create_directories(dir);

    {
        std::ostringstream csv;
        csv << "generation,mean_deviation,min_deviation,mean_mae,min_mae,front1_size\n";
        for (const GenerationRow& row : result.generations) {
            csv << row.generation << ',' << format_double(row.mean_deviation) << ','
                << format_double(row.min_deviation) << ',' << format_double(row.mean_mae) << ','
                << format_double(row.min_mae) << ',' << row.front1_size << '\n';
        }
        write_text_file((fs::path(dir) / "generations.csv").string(), csv.str());
    }
    {
        std::ostringstream csv;
        csv << "id,k,deviation,mae,rank,crowding\n";
        for (const FinalRow& row : result.final_population) {
            csv << row.id << ',' << row.k << ',' << format_double(row.deviation) << ','
                << format_double(row.mae) << ',' << row.rank << ',' << format_double(row.crowding)
                << '\n';
        }
        write_text_file((fs::path(dir) / "final_population.csv").string(), csv.str());
    }

    json doc;
    doc["model"] = json{{"id", result.model_id},
                        {"init", result.init_method},
                        {"regression", result.regression_mode},
                        {"update", result.update_method}};
    doc["seed"] = result.seed;
    doc["wall_time_seconds"] = result.wall_time_seconds;
    doc["generation_columns"] =
        json::array({"generation", "mean_deviation", "min_deviation", "mean_mae", "min_mae", "front1_size"});
    json gens = json::array();
    for (const GenerationRow& row : result.generations) {
        gens.push_back(json::array({row.generation, row.mean_deviation, row.min_deviation, row.mean_mae,
                                    row.min_mae, row.front1_size}));
    }
    doc["generations"] = std::move(gens);
    doc["final_population_columns"] = json::array({"id", "k", "deviation", "mae", "rank", "crowding"});
    json finals = json::array();
    for (const FinalRow& row : result.final_population) {
        finals.push_back(json::array({row.id, row.k, row.deviation, row.mae, row.rank, row.crowding}));
    }
    doc["final_population"] = std::move(finals);
    write_text_file((fs::path(dir) / "result.json").string(), doc.dump(2) + "\n");
}

RunResult load_run_result(const std::string& dir) {
    const std::string path = (fs::path(dir) / "result.json").string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json doc = json::parse(in);

    RunResult result;
    result.model_id = doc.at("model").at("id").get<int>();
    result.init_method = doc.at("model").at("init").get<std::string>();
    result.regression_mode = doc.at("model").at("regression").get<std::string>();
    result.update_method = doc.at("model").at("update").get<std::string>();
    result.seed = doc.at("seed").get<std::uint64_t>();
    result.wall_time_seconds = doc.at("wall_time_seconds").get<double>();
    for (const json& row : doc.at("generations")) {
        GenerationRow g;
        g.generation = row.at(0).get<int>();
        g.mean_deviation = json_double(row.at(1));
        g.min_deviation = json_double(row.at(2));
        g.mean_mae = json_double(row.at(3));
        g.min_mae = json_double(row.at(4));
        g.front1_size = row.at(5).get<int>();
        result.generations.push_back(g);
    }
    for (const json& row : doc.at("final_population")) {
        FinalRow f;
        f.id = row.at(0).get<int>();
        f.k = row.at(1).get<int>();
        f.deviation = json_double(row.at(2));
        f.mae = json_double(row.at(3));
        f.rank = row.at(4).get<int>();
        f.crowding = json_double(row.at(5));
        result.final_population.push_back(f);
    }
    return result;
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (cfg.models.empty()) throw std::invalid_argument("no models selected");
    const Dataset ds = load_csv(cfg.data_path, cfg.target, cfg.normalization);

    fs::create_directories(cfg.out_dir);

    std::vector<RunOutcome> outcomes;
    for (int model_id : cfg.models) {
        model_by_id(model_id);  // validates the id
        for (int rep = 1; rep <= cfg.replicates; ++rep) {
            RunOutcome o;
            o.model_id = model_id;
            o.replicate = rep;
            o.seed = run_seed(cfg.evolution.seed, model_id, rep);
            o.dir = "run_" + std::to_string(model_id) + "_" + std::to_string(rep);
            outcomes.push_back(std::move(o));
        }
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= outcomes.size()) break;
            RunOutcome& o = outcomes[i];
            try {
                const RunResult result = execute_run(ds, cfg, model_by_id(o.model_id), o.seed);
                write_run_files(result, (fs::path(cfg.out_dir) / o.dir).string());
                o.ok = true;
            } catch (const std::exception& e) {
                o.ok = false;
                o.error = e.what();
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(outcomes.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    json manifest;
    manifest["created_utc"] = utc_now();
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    manifest["config_hash"] = std::string(hash_hex);
    manifest["dataset"] = dataset_json(cfg, ds);
    manifest["settings"] = settings_json(cfg);
    manifest["base_seed"] = cfg.evolution.seed;
    manifest["models"] = cfg.models;
    manifest["replicates"] = cfg.replicates;
    json runs = json::array();
    for (const RunOutcome& o : outcomes) {
        runs.push_back(json{{"model", o.model_id},
                            {"replicate", o.replicate},
                            {"seed", o.seed},
                            {"dir", o.dir},
                            {"ok", o.ok},
                            {"error", o.error}});
    }
    manifest["runs"] = std::move(runs);
    write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");

    return outcomes;
}

ModelComparison compare_models(const std::vector<SampleGroup>& deviation_samples,
                               const std::vector<SampleGroup>& mae_samples, double alpha) {
    ModelComparison cmp;
    cmp.alpha = alpha;
    cmp.deviation = build_stats_report(deviation_samples, alpha);
    cmp.mae = build_stats_report(mae_samples, alpha);
    const std::vector<std::string> dev_winners = report_winners(cmp.deviation);
    const std::vector<std::string> mae_winners = report_winners(cmp.mae);
    std::set_intersection(dev_winners.begin(), dev_winners.end(), mae_winners.begin(),
                          mae_winners.end(), std::back_inserter(cmp.best_both));
    return cmp;
}

GatheredSamples gather_final_samples(const std::string& experiment_dir) {
    const std::string path = (fs::path(experiment_dir) / "manifest.json").string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    const json manifest = json::parse(in);

    std::vector<int> model_ids;
    std::vector<SampleGroup> dev;
    std::vector<SampleGroup> mae;
    for (const json& run : manifest.at("runs")) {
        if (!run.at("ok").get<bool>()) continue;
        const int model_id = run.at("model").get<int>();
        const RunResult result =
            load_run_result((fs::path(experiment_dir) / run.at("dir").get<std::string>()).string());
        std::size_t slot = 0;
        const auto found = std::find(model_ids.begin(), model_ids.end(), model_id);
        if (found == model_ids.end()) {
            slot = model_ids.size();
            model_ids.push_back(model_id);
            dev.push_back({"model " + std::to_string(model_id), {}});
            mae.push_back({"model " + std::to_string(model_id), {}});
        } else {
            slot = static_cast<std::size_t>(found - model_ids.begin());
        }
        for (const FinalRow& row : result.final_population) {
            dev[slot].values.push_back(row.deviation);
            mae[slot].values.push_back(row.mae);
        }
    }
    return {std::move(dev), std::move(mae)};
}

void write_comparison(const ModelComparison& comparison, const std::string& path) {
    json doc;
    doc["alpha"] = comparison.alpha;
    doc["deviation"] = stats_report_json(comparison.deviation);
    doc["mae"] = stats_report_json(comparison.mae);
    doc["best_both"] = comparison.best_both;
    write_text_file(path, doc.dump(2) + "\n");
}

std::vector<PairedModelReport> compare_multi_vs_single(const Dataset& ds, const ExperimentConfig& cfg,
                                                       const std::vector<int>& models,
                                                       std::vector<RunResult>* runs_out) {
    std::vector<PairedModelReport> reports;
    for (int model_id : models) {
        const ModelSpec spec = model_by_id(model_id);
        if (spec.update != UpdateMethod::CM) {
            throw std::invalid_argument("multi vs single comparison covers the CM models (1..4)");
        }
        SampleGroup multi{"multi model " + std::to_string(model_id), {}};
        SampleGroup single{"single model " + std::to_string(model_id), {}};
        for (int rep = 1; rep <= cfg.replicates; ++rep) {
            const std::uint64_t seed = run_seed(cfg.evolution.seed, model_id, rep);
            EvolutionConfig ec = cfg.evolution;
            ec.seed = seed;
            ec.init_method = spec.init;
            ec.regression_mode = spec.regression;

            RunResult multi_run = run_nsga2(ds, ec);
            multi_run.model_id = model_id;
            RunResult single_run = run_soga(ds, ec);
            single_run.model_id = model_id;
            for (const FinalRow& row : multi_run.final_population) multi.values.push_back(row.mae);
            for (const FinalRow& row : single_run.final_population) single.values.push_back(row.mae);
            if (runs_out) {
                runs_out->push_back(std::move(multi_run));
                runs_out->push_back(std::move(single_run));
            }
        }
        PairedModelReport report;
        report.model_id = model_id;
        report.multi_mean_mae =
            std::accumulate(multi.values.begin(), multi.values.end(), 0.0) / multi.values.size();
        report.single_mean_mae =
            std::accumulate(single.values.begin(), single.values.end(), 0.0) / single.values.size();
        report.ttest = ttest_ind(multi, single);
        reports.push_back(report);
    }
    return reports;
}

void write_paired_report(const std::vector<PairedModelReport>& reports, const std::string& path) {
    json rows = json::array();
    for (const PairedModelReport& r : reports) {
        rows.push_back(json{{"model", r.model_id},
                            {"multi_mean_mae", r.multi_mean_mae},
                            {"single_mean_mae", r.single_mean_mae},
                            {"t", r.ttest.t},
                            {"p", r.ttest.p},
                            {"df", r.ttest.df}});
    }
    write_text_file(path, json{{"comparisons", rows}}.dump(2) + "\n");
}

}  // namespace predclusters
