#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "predclusters/dataset.hpp"
#include "predclusters/genotype.hpp"
#include "predclusters/objectives.hpp"
#include "predclusters/rng.hpp"
#include "predclusters/run_result.hpp"

namespace predclusters {

struct Individual {
    Genotype genotype;
    ObjectiveValues objectives;
    int rank = 0;           // 1-based front index, 0 = not yet sorted
    double crowding = 0.0;
    int k = 0;              // decoded cluster count
};

struct EvolutionConfig {
    int population_size = 100;
    int iterations = 100;
    double crossover_pct = 90.0;
    double mutation_pct = 3.0;
    RegressionMode regression_mode = RegressionMode::LR;
    InitMethod init_method = InitMethod::RSO;
    std::uint64_t seed = 0;
    int min_cluster_size = 0;  // 0 disables the small-cluster repair
};

// Throws std::invalid_argument when the population size or percentages are
// out of range.
void validate_config(const EvolutionConfig& cfg);

// True iff a is no worse in both objectives and strictly better in one.
bool dominates(const ObjectiveValues& a, const ObjectiveValues& b);

// Peels non-dominated fronts off the population, writing 1-based ranks
// back. Returns the fronts as index lists in rank order.
std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop);

// Writes crowding distances for one front: per objective, boundary
// solutions get +infinity and interior ones accumulate the normalized gap
// between their neighbours; zero-range objectives contribute nothing.
void crowding_distance(const std::vector<int>& front, std::vector<Individual>& pop);

// Runs fast_nondominated_sort and crowding_distance over every front.
std::vector<std::vector<int>> sort_and_crowd(std::vector<Individual>& pop);

// Picks two contestants uniformly with replacement; lower rank wins, then
// larger crowding, then lower index. Returns the winner's index.
int binary_tournament(const std::vector<Individual>& pop, RandomStream& rng);

// Decodes, optionally repairs undersized clusters (re-encoding the genotype
// to match), and evaluates.
Individual make_individual(Genotype g, const Dataset& ds, RegressionMode mode, int min_cluster_size);

// Crossover children plus standalone swap mutants, both from parents chosen
// by the supplied selector. Offspring come back unevaluated.
using Selector = std::function<int(const std::vector<Individual>&, RandomStream&)>;
std::vector<Genotype> make_offspring_genotypes(const std::vector<Individual>& pop,
                                               const EvolutionConfig& cfg, RandomStream& rng,
                                               const Selector& select);
std::vector<Individual> make_offspring(const std::vector<Individual>& pop, const EvolutionConfig& cfg,
                                       RandomStream& rng);

// Offspring head counts implied by the percentages: children are drawn in
// pairs (rounded down to even, but at least one pair when crossover is on)
// and mutants round to the nearest count (at least one when mutation is on).
int crossover_child_count(int population_size, double crossover_pct);
int mutant_count(int population_size, double mutation_pct);

// Keeps whole fronts in rank order and splits the last admitted front by
// descending crowding distance (ties to the lower index). Rank and crowding
// of the survivors reflect the combined sort.
std::vector<Individual> environmental_selection(std::vector<Individual> combined, int size);

RunResult run_nsga2(const Dataset& ds, const EvolutionConfig& cfg, RandomStream& rng);
RunResult run_nsga2(const Dataset& ds, const EvolutionConfig& cfg);

// Shared by every engine: population means/minima plus front-1 size.
GenerationRow summarize_generation(int generation, const std::vector<Individual>& pop);

// Final-population rows; rank and crowding are recomputed on the population
// alone. The population itself is re-sorted in place.
std::vector<FinalRow> final_rows(std::vector<Individual>& pop);

}  // namespace predclusters
