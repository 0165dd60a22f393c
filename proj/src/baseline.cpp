#include "predclusters/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <utility>
#include <vector>

namespace predclusters {

namespace {

int deviation_tournament(const std::vector<Individual>& pop, RandomStream& rng) {
    const int a = static_cast<int>(rng.uniform_index(pop.size()));
    const int b = static_cast<int>(rng.uniform_index(pop.size()));
    const double dev_a = pop[static_cast<std::size_t>(a)].objectives.deviation;
    const double dev_b = pop[static_cast<std::size_t>(b)].objectives.deviation;
    if (dev_a != dev_b) return dev_a < dev_b ? a : b;
    return std::min(a, b);
}

// Ascending deviation, ties to the lower combined index, first `size` kept.
std::vector<Individual> truncate_by_deviation(std::vector<Individual> combined, int size) {
    std::vector<int> order(combined.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return combined[static_cast<std::size_t>(a)].objectives.deviation <
               combined[static_cast<std::size_t>(b)].objectives.deviation;
    });
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(size));
    for (int i : order) {
        if (static_cast<int>(next.size()) == size) break;
        next.push_back(std::move(combined[static_cast<std::size_t>(i)]));
    }
    return next;
}

}  // namespace

RunResult run_soga(const Dataset& ds, const EvolutionConfig& cfg, RandomStream& rng) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    std::vector<Genotype> seeds_pop = init_population(ds, cfg.init_method, cfg.population_size, rng);
    std::vector<Individual> pop;
    pop.reserve(seeds_pop.size());
    for (auto& g : seeds_pop) {
        pop.push_back(make_individual(std::move(g), ds, cfg.regression_mode, cfg.min_cluster_size));
    }
    sort_and_crowd(pop);  // reporting only; selection never reads ranks

    RunResult result;
    result.init_method = to_string(cfg.init_method);
    result.regression_mode = to_string(cfg.regression_mode);
    result.update_method = "GA";
    result.seed = cfg.seed;
    result.generations.push_back(summarize_generation(0, pop));

    for (int gen = 1; gen <= cfg.iterations; ++gen) {
        std::vector<Genotype> offspring =
            make_offspring_genotypes(pop, cfg, rng, deviation_tournament);
        std::vector<Individual> combined = std::move(pop);
        combined.reserve(combined.size() + offspring.size());
        for (auto& g : offspring) {
            combined.push_back(make_individual(std::move(g), ds, cfg.regression_mode, cfg.min_cluster_size));
        }
        pop = truncate_by_deviation(std::move(combined), cfg.population_size);
        sort_and_crowd(pop);
        result.generations.push_back(summarize_generation(gen, pop));
    }

    result.final_population = final_rows(pop);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RunResult run_soga(const Dataset& ds, const EvolutionConfig& cfg) {
    RandomStream rng(cfg.seed);
    return run_soga(ds, cfg, rng);
}

}  // namespace predclusters
