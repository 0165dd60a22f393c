#include "predclusters/nsga2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace predclusters {

namespace {

int crowded_tournament(const std::vector<Individual>& pop, RandomStream& rng) {
    return binary_tournament(pop, rng);
}

}  // namespace

void validate_config(const EvolutionConfig& cfg) {
    if (cfg.population_size < 2) throw std::invalid_argument("population size must be >= 2");
    if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (cfg.crossover_pct < 0.0 || cfg.crossover_pct > 100.0) {
        throw std::invalid_argument("crossover percentage outside [0, 100]");
    }
    if (cfg.mutation_pct < 0.0 || cfg.mutation_pct > 100.0) {
        throw std::invalid_argument("mutation percentage outside [0, 100]");
    }
}

bool dominates(const ObjectiveValues& a, const ObjectiveValues& b) {
    if (a.deviation > b.deviation || a.mae > b.mae) return false;
    return a.deviation < b.deviation || a.mae < b.mae;
}

std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
    std::vector<int> dominators(static_cast<std::size_t>(n), 0);

    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            if (dominates(pop[static_cast<std::size_t>(p)].objectives, pop[static_cast<std::size_t>(q)].objectives)) {
                dominated[static_cast<std::size_t>(p)].push_back(q);
                ++dominators[static_cast<std::size_t>(q)];
            } else if (dominates(pop[static_cast<std::size_t>(q)].objectives,
                                 pop[static_cast<std::size_t>(p)].objectives)) {
                dominated[static_cast<std::size_t>(q)].push_back(p);
                ++dominators[static_cast<std::size_t>(p)];
            }
        }
    }

    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int p = 0; p < n; ++p) {
        if (dominators[static_cast<std::size_t>(p)] == 0) current.push_back(p);
    }
    int rank = 1;
    while (!current.empty()) {
        for (int p : current) pop[static_cast<std::size_t>(p)].rank = rank;
        std::vector<int> next;
        for (int p : current) {
            for (int q : dominated[static_cast<std::size_t>(p)]) {
                if (--dominators[static_cast<std::size_t>(q)] == 0) next.push_back(q);
            }
        }
        // Keep index order inside each front so downstream tie-breaks are
        // deterministic.
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
        ++rank;
    }
    return fronts;
}

void crowding_distance(const std::vector<int>& front, std::vector<Individual>& pop) {
    const double inf = std::numeric_limits<double>::infinity();
    for (int i : front) pop[static_cast<std::size_t>(i)].crowding = 0.0;
    if (front.size() <= 2) {
        for (int i : front) pop[static_cast<std::size_t>(i)].crowding = inf;
        return;
    }

    const auto accumulate = [&](auto objective_of) {
        std::vector<int> order = front;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return objective_of(pop[static_cast<std::size_t>(a)]) < objective_of(pop[static_cast<std::size_t>(b)]);
        });
        const double lo = objective_of(pop[static_cast<std::size_t>(order.front())]);
        const double hi = objective_of(pop[static_cast<std::size_t>(order.back())]);
        pop[static_cast<std::size_t>(order.front())].crowding = inf;
        pop[static_cast<std::size_t>(order.back())].crowding = inf;
        if (hi <= lo) return;  // zero range contributes nothing
        for (std::size_t i = 1; i + 1 < order.size(); ++i) {
            Individual& ind = pop[static_cast<std::size_t>(order[i])];
            if (std::isinf(ind.crowding)) continue;
            const double prev = objective_of(pop[static_cast<std::size_t>(order[i - 1])]);
            const double next = objective_of(pop[static_cast<std::size_t>(order[i + 1])]);
            ind.crowding += (next - prev) / (hi - lo);
        }
    };
    accumulate([](const Individual& ind) { return ind.objectives.deviation; });
    accumulate([](const Individual& ind) { return ind.objectives.mae; });
}

std::vector<std::vector<int>> sort_and_crowd(std::vector<Individual>& pop) {
    auto fronts = fast_nondominated_sort(pop);
    for (const auto& front : fronts) crowding_distance(front, pop);
    return fronts;
}

int binary_tournament(const std::vector<Individual>& pop, RandomStream& rng) {
    const std::size_t n = pop.size();
    const int a = static_cast<int>(rng.uniform_index(n));
    const int b = static_cast<int>(rng.uniform_index(n));
    const Individual& ia = pop[static_cast<std::size_t>(a)];
    const Individual& ib = pop[static_cast<std::size_t>(b)];
    if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
    if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
    return std::min(a, b);
}

Individual make_individual(Genotype g, const Dataset& ds, RegressionMode mode, int min_cluster_size) {
    Partition part = decode(g);
    if (min_cluster_size > 1 && part.k > 1) {
        Partition repaired = repair_small_clusters(part, ds, min_cluster_size);
        if (repaired.k != part.k) {
            std::vector<int> reps(static_cast<std::size_t>(repaired.k));
            for (int c = 0; c < repaired.k; ++c) {
                reps[static_cast<std::size_t>(c)] = repaired.members[static_cast<std::size_t>(c)].front();
            }
            g = encode_star(repaired, reps);
            part = std::move(repaired);
        }
    }
    Individual ind;
    ind.genotype = std::move(g);
    ind.k = part.k;
    ind.objectives = evaluate_partition(part, ds, mode);
    return ind;
}

int crossover_child_count(int population_size, double crossover_pct) {
    if (crossover_pct <= 0.0) return 0;
    const int pairs = static_cast<int>(std::floor(crossover_pct / 100.0 * population_size / 2.0 + 1e-9));
    return pairs > 0 ? 2 * pairs : 2;
}

int mutant_count(int population_size, double mutation_pct) {
    if (mutation_pct <= 0.0) return 0;
    const auto rounded = std::llround(mutation_pct / 100.0 * population_size + 1e-9);
    return rounded > 1 ? static_cast<int>(rounded) : 1;
}

std::vector<Genotype> make_offspring_genotypes(const std::vector<Individual>& pop,
                                               const EvolutionConfig& cfg, RandomStream& rng,
                                               const Selector& select) {
    const int n_children = crossover_child_count(cfg.population_size, cfg.crossover_pct);
    const int n_mutants = mutant_count(cfg.population_size, cfg.mutation_pct);
    std::vector<Genotype> out;
    out.reserve(static_cast<std::size_t>(n_children + n_mutants));
    for (int pair = 0; pair < n_children / 2; ++pair) {
        const int a = select(pop, rng);
        const int b = select(pop, rng);
        auto [c1, c2] = uniform_crossover(pop[static_cast<std::size_t>(a)].genotype,
                                          pop[static_cast<std::size_t>(b)].genotype, rng);
        out.push_back(std::move(c1));
        out.push_back(std::move(c2));
    }
    for (int m = 0; m < n_mutants; ++m) {
        const int a = select(pop, rng);
        out.push_back(swap_mutation(pop[static_cast<std::size_t>(a)].genotype, rng));
    }
    return out;
}

std::vector<Individual> make_offspring(const std::vector<Individual>& pop, const EvolutionConfig& cfg,
                                       RandomStream& rng) {
    std::vector<Genotype> genotypes = make_offspring_genotypes(pop, cfg, rng, crowded_tournament);
    std::vector<Individual> out;
    out.reserve(genotypes.size());
    for (auto& g : genotypes) {
        Individual ind;
        ind.genotype = std::move(g);
        out.push_back(std::move(ind));
    }
    return out;
}

std::vector<Individual> environmental_selection(std::vector<Individual> combined, int size) {
    if (static_cast<int>(combined.size()) <= size) {
        sort_and_crowd(combined);
        return combined;
    }
    const auto fronts = sort_and_crowd(combined);
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(size));
    for (const auto& front : fronts) {
        if (next.size() + front.size() <= static_cast<std::size_t>(size)) {
            for (int i : front) next.push_back(combined[static_cast<std::size_t>(i)]);
            if (static_cast<int>(next.size()) == size) break;
            continue;
        }
        std::vector<int> order = front;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return combined[static_cast<std::size_t>(a)].crowding > combined[static_cast<std::size_t>(b)].crowding;
        });
        for (int i : order) {
            if (static_cast<int>(next.size()) == size) break;
            next.push_back(combined[static_cast<std::size_t>(i)]);
        }
        break;
    }
    return next;
}

GenerationRow summarize_generation(int generation, const std::vector<Individual>& pop) {
    GenerationRow row;
    row.generation = generation;
    row.min_deviation = std::numeric_limits<double>::infinity();
    row.min_mae = std::numeric_limits<double>::infinity();
    double sum_dev = 0.0;
    double sum_mae = 0.0;
    for (const Individual& ind : pop) {
        sum_dev += ind.objectives.deviation;
        sum_mae += ind.objectives.mae;
        row.min_deviation = std::min(row.min_deviation, ind.objectives.deviation);
        row.min_mae = std::min(row.min_mae, ind.objectives.mae);
        if (ind.rank == 1) ++row.front1_size;
    }
    row.mean_deviation = sum_dev / static_cast<double>(pop.size());
    row.mean_mae = sum_mae / static_cast<double>(pop.size());
    return row;
}

std::vector<FinalRow> final_rows(std::vector<Individual>& pop) {
    sort_and_crowd(pop);
    std::vector<FinalRow> rows;
    rows.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const Individual& ind = pop[i];
        rows.push_back({static_cast<int>(i), ind.k, ind.objectives.deviation, ind.objectives.mae,
                        ind.rank, ind.crowding});
    }
    return rows;
}

RunResult run_nsga2(const Dataset& ds, const EvolutionConfig& cfg, RandomStream& rng) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    std::vector<Genotype> seeds_pop = init_population(ds, cfg.init_method, cfg.population_size, rng);
    std::vector<Individual> pop;
    pop.reserve(seeds_pop.size());
    for (auto& g : seeds_pop) {
        pop.push_back(make_individual(std::move(g), ds, cfg.regression_mode, cfg.min_cluster_size));
    }
    sort_and_crowd(pop);

    RunResult result;
    result.init_method = to_string(cfg.init_method);
    result.regression_mode = to_string(cfg.regression_mode);
    result.update_method = "CM";
    result.seed = cfg.seed;
    result.generations.push_back(summarize_generation(0, pop));

    for (int gen = 1; gen <= cfg.iterations; ++gen) {
        std::vector<Individual> offspring = make_offspring(pop, cfg, rng);
        for (Individual& child : offspring) {
            child = make_individual(std::move(child.genotype), ds, cfg.regression_mode, cfg.min_cluster_size);
        }
        std::vector<Individual> combined = pop;
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        pop = environmental_selection(std::move(combined), cfg.population_size);
        result.generations.push_back(summarize_generation(gen, pop));
    }

    result.final_population = final_rows(pop);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RunResult run_nsga2(const Dataset& ds, const EvolutionConfig& cfg) {
    RandomStream rng(cfg.seed);
    return run_nsga2(ds, cfg, rng);
}

}  // namespace predclusters
