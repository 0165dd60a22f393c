#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "predclusters/nsga2.hpp"
#include "test_util.hpp"

using namespace predclusters;

namespace {

std::vector<Individual> from_objectives(const std::vector<std::pair<double, double>>& points) {
    std::vector<Individual> pop;
    for (const auto& [dev, err] : points) {
        Individual ind;
        ind.objectives = {dev, err};
        pop.push_back(ind);
    }
    return pop;
}

// Quadratic-scan oracle: front number = 1 + longest dominator chain depth,
// computed by repeatedly removing the currently undominated points.
std::vector<int> brute_force_ranks(const std::vector<Individual>& pop) {
    const std::size_t n = pop.size();
    std::vector<int> rank(n, 0);
    std::vector<bool> assigned(n, false);
    int current = 0;
    std::size_t done = 0;
    while (done < n) {
        ++current;
        std::vector<std::size_t> frontier;
        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < n && !dominated; ++j)
                dominated = !assigned[j] && j != i && dominates(pop[j].objectives, pop[i].objectives);
            if (!dominated) frontier.push_back(i);
        }
        for (std::size_t i : frontier) {
            rank[i] = current;
            assigned[i] = true;
            ++done;
        }
    }
    return rank;
}

}  // namespace

TEST_CASE("dominance needs no-worse in both objectives and better in one") {
    CHECK(dominates({1, 1}, {2, 2}));
    CHECK(dominates({1, 2}, {1, 3}));
    CHECK(dominates({1, 2}, {2, 2}));
    CHECK_FALSE(dominates({1, 2}, {1, 2}));
    CHECK_FALSE(dominates({1, 3}, {2, 2}));
    CHECK_FALSE(dominates({2, 2}, {1, 3}));
}

TEST_CASE("front peeling matches the hand example") {
    auto pop = from_objectives({{1, 5}, {2, 2}, {5, 1}, {3, 3}, {4, 4}});
    const auto fronts = fast_nondominated_sort(pop);
    REQUIRE(fronts.size() == 3);
    CHECK(fronts[0] == std::vector<int>{0, 1, 2});
    CHECK(fronts[1] == std::vector<int>{3});
    CHECK(fronts[2] == std::vector<int>{4});
    CHECK(pop[0].rank == 1);
    CHECK(pop[3].rank == 2);
    CHECK(pop[4].rank == 3);
}

TEST_CASE("front peeling matches a quadratic oracle on random populations") {
    RandomStream rng(616);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(199);
        std::vector<Individual> pop;
        for (std::size_t i = 0; i < n; ++i) {
            Individual ind;
            // coarse grid so duplicates and ties appear often
            ind.objectives = {std::floor(rng.uniform01() * 10.0), std::floor(rng.uniform01() * 10.0)};
            pop.push_back(ind);
        }
        const auto expected = brute_force_ranks(pop);
        fast_nondominated_sort(pop);
        for (std::size_t i = 0; i < n; ++i) CHECK(pop[i].rank == expected[i]);
    }
}

TEST_CASE("crowding gives boundaries infinity and interior points their gap") {
    auto pop = from_objectives({{1, 5}, {2, 2}, {5, 1}});
    crowding_distance({0, 1, 2}, pop);
    CHECK(std::isinf(pop[0].crowding));
    CHECK(std::isinf(pop[2].crowding));
    CHECK(pop[1].crowding == doctest::Approx(2.0));  // (5-1)/4 + (5-1)/4
}

TEST_CASE("crowding on tiny or degenerate fronts") {
    SUBCASE("two points are both boundaries") {
        auto pop = from_objectives({{1, 2}, {2, 1}});
        crowding_distance({0, 1}, pop);
        CHECK(std::isinf(pop[0].crowding));
        CHECK(std::isinf(pop[1].crowding));
    }
    SUBCASE("identical objectives leave interior crowding at zero") {
        auto pop = from_objectives({{1, 1}, {1, 1}, {1, 1}});
        crowding_distance({0, 1, 2}, pop);
        int infinities = 0;
        for (const auto& ind : pop) infinities += std::isinf(ind.crowding);
        CHECK(infinities == 2);
        // the remaining point has no spread to accumulate
        for (const auto& ind : pop)
            if (!std::isinf(ind.crowding)) CHECK(ind.crowding == 0.0);
    }
}

TEST_CASE("offspring head counts follow the percentages") {
    CHECK(crossover_child_count(100, 90.0) == 90);
    CHECK(mutant_count(100, 3.0) == 3);
    CHECK(crossover_child_count(10, 90.0) == 8);
    CHECK(mutant_count(10, 3.0) == 1);
    CHECK(crossover_child_count(2, 90.0) == 2);  // never below one pair while on
    CHECK(mutant_count(2, 3.0) == 1);
    CHECK(crossover_child_count(50, 0.0) == 0);
    CHECK(mutant_count(50, 0.0) == 0);
    CHECK(crossover_child_count(7, 100.0) == 6);
    CHECK(mutant_count(100, 100.0) == 100);
}

TEST_CASE("tournament prefers lower rank, then larger crowding, then lower index") {
    std::vector<Individual> pop(4);
    pop[0].rank = 2; pop[0].crowding = 9.0;
    pop[1].rank = 1; pop[1].crowding = 0.5;
    pop[2].rank = 1; pop[2].crowding = 3.0;
    pop[3].rank = 1; pop[3].crowding = 3.0;

    // candidates are drawn with replacement, so replay the stream to learn the
    // pair and demand the winner be the better of the two
    for (int trial = 0; trial < 200; ++trial) {
        RandomStream draw(static_cast<std::uint64_t>(900 + trial));
        const auto a = draw.uniform_index(4);
        const auto b = draw.uniform_index(4);
        RandomStream replay(static_cast<std::uint64_t>(900 + trial));
        const int winner = binary_tournament(pop, replay);
        CHECK((winner == static_cast<int>(a) || winner == static_cast<int>(b)));
        CHECK(pop[static_cast<std::size_t>(winner)].rank ==
              std::min(pop[a].rank, pop[b].rank));
    }
    // exhaustive pairings via a stream that must eventually draw each pair
    std::vector<std::vector<int>> wins(4, std::vector<int>(4, -1));
    for (int trial = 0; trial < 4000; ++trial) {
        RandomStream local(static_cast<std::uint64_t>(trial));
        const auto i = local.uniform_index(4);
        const auto j = local.uniform_index(4);
        RandomStream replay(static_cast<std::uint64_t>(trial));
        wins[i][j] = binary_tournament(pop, replay);
    }
    CHECK(wins[1][2] == 2);  // crowding beats equal rank
    CHECK(wins[2][1] == 2);
    CHECK(wins[2][3] == 2);  // full tie resolves to the lower index
    CHECK(wins[3][2] == 2);
    CHECK(wins[0][1] == 1);  // rank dominates crowding
}

TEST_CASE("environmental selection keeps whole fronts then the most spread") {
    // front 1: three points, front 2: two points, front 3: one point
    auto combined = from_objectives({{1, 5}, {2, 2}, {5, 1}, {3, 4}, {4, 3}, {6, 6}});
    SUBCASE("cut inside the second front") {
        const auto kept = environmental_selection(combined, 4);
        REQUIRE(kept.size() == 4);
        int rank1 = 0, rank2 = 0;
        for (const auto& ind : kept) {
            rank1 += ind.rank == 1;
            rank2 += ind.rank == 2;
        }
        CHECK(rank1 == 3);
        CHECK(rank2 == 1);
    }
    SUBCASE("exact fit keeps everything") {
        const auto kept = environmental_selection(combined, 6);
        CHECK(kept.size() == 6);
    }
    SUBCASE("the last front splits by descending crowding") {
        auto pop = from_objectives({{0, 0}, {10, 10}, {1, 9}, {9, 1}, {5, 5}, {5.2, 4.9}});
        // {0,0} dominates all but is one point; remaining five form front 2
        const auto kept = environmental_selection(pop, 4);
        REQUIRE(kept.size() == 4);
        // boundaries of front 2 (infinite crowding) must be in before interiors
        int boundary = 0;
        for (const auto& ind : kept)
            if (ind.rank == 2 && std::isinf(ind.crowding)) ++boundary;
        CHECK(boundary == 2);
    }
}

TEST_CASE("configuration validation rejects nonsense") {
    EvolutionConfig cfg;
    cfg.population_size = 1;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.population_size = 10;
    cfg.iterations = -1;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.iterations = 5;
    cfg.crossover_pct = 101.0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.crossover_pct = 90.0;
    cfg.mutation_pct = -2.0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.mutation_pct = 3.0;
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("evaluated individuals carry their decoded cluster count") {
    RandomStream rng(21);
    const Dataset ds = testutil::random_dataset(rng, 20, 2);
    const Genotype g = init_rso(ds, 4, rng);
    const Individual ind = make_individual(g, ds, RegressionMode::LR, 0);
    CHECK(ind.k == 4);
    CHECK(ind.objectives.deviation > 0.0);
    CHECK(ind.rank == 0);  // sorting has not happened yet
}

TEST_CASE("repair inside evaluation rewrites the genotype consistently") {
    RandomStream rng(22);
    const Dataset ds = testutil::random_dataset(rng, 20, 2);
    for (int trial = 0; trial < 50; ++trial) {
        Genotype g;
        for (int i = 0; i < 20; ++i) g.alleles.push_back(rng.uniform_allele(20));
        const Individual ind = make_individual(g, ds, RegressionMode::LR, 4);
        const Partition p = decode(ind.genotype);
        CHECK(p.k == ind.k);
        if (p.k > 1)
            for (const auto& members : p.members) CHECK(members.size() >= 4);
        const ObjectiveValues fresh = evaluate(ind.genotype, ds, RegressionMode::LR);
        CHECK(fresh.deviation == ind.objectives.deviation);
        CHECK(fresh.mae == ind.objectives.mae);
    }
}

TEST_CASE("a full run reports one row per generation and a sorted population") {
    RandomStream rng(100);
    const Dataset ds = testutil::random_dataset(rng, 30, 2);
    EvolutionConfig cfg;
    cfg.population_size = 20;
    cfg.iterations = 15;
    cfg.seed = 99;

    const RunResult result = run_nsga2(ds, cfg);
    CHECK(result.update_method == "CM");
    CHECK(result.seed == 99);
    REQUIRE(result.generations.size() == 16);  // initial population plus 15 updates
    REQUIRE(result.final_population.size() == 20);

    for (std::size_t i = 0; i < result.generations.size(); ++i)
        CHECK(result.generations[i].generation == static_cast<int>(i));

    int front1 = 0;
    for (const auto& row : result.final_population) {
        CHECK(row.rank >= 1);
        front1 += row.rank == 1;
        CHECK(row.k >= 1);
    }
    CHECK(front1 == result.generations.back().front1_size);
}

TEST_CASE("zero iterations still summarizes the initial population") {
    RandomStream rng(101);
    const Dataset ds = testutil::random_dataset(rng, 15, 2);
    EvolutionConfig cfg;
    cfg.population_size = 8;
    cfg.iterations = 0;
    const RunResult result = run_nsga2(ds, cfg);
    CHECK(result.generations.size() == 1);
    CHECK(result.final_population.size() == 8);
}

TEST_CASE("identical seeds reproduce a run exactly") {
    RandomStream rng(102);
    const Dataset ds = testutil::random_dataset(rng, 25, 3);
    EvolutionConfig cfg;
    cfg.population_size = 16;
    cfg.iterations = 10;
    cfg.seed = 2718;

    const RunResult a = run_nsga2(ds, cfg);
    const RunResult b = run_nsga2(ds, cfg);
    REQUIRE(a.generations.size() == b.generations.size());
    for (std::size_t i = 0; i < a.generations.size(); ++i) {
        CHECK(a.generations[i].mean_deviation == b.generations[i].mean_deviation);
        CHECK(a.generations[i].min_mae == b.generations[i].min_mae);
        CHECK(a.generations[i].front1_size == b.generations[i].front1_size);
    }
    for (std::size_t i = 0; i < a.final_population.size(); ++i) {
        CHECK(a.final_population[i].deviation == b.final_population[i].deviation);
        CHECK(a.final_population[i].mae == b.final_population[i].mae);
        CHECK(a.final_population[i].k == b.final_population[i].k);
    }

    cfg.seed = 2719;
    const RunResult c = run_nsga2(ds, cfg);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.generations.size() && !any_difference; ++i)
        any_difference = a.generations[i].mean_deviation != c.generations[i].mean_deviation;
    CHECK(any_difference);
}

TEST_CASE("best objective values never get worse across generations") {
    RandomStream rng(103);
    const Dataset ds = testutil::random_dataset(rng, 40, 2);
    for (const auto mode : {RegressionMode::LR, RegressionMode::CP}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            EvolutionConfig cfg;
            cfg.population_size = 24;
            cfg.iterations = 20;
            cfg.seed = seed;
            cfg.regression_mode = mode;
            const RunResult result = run_nsga2(ds, cfg);
            for (std::size_t i = 1; i < result.generations.size(); ++i) {
                CHECK(result.generations[i].min_deviation <=
                      result.generations[i - 1].min_deviation + 1e-12);
                CHECK(result.generations[i].min_mae <= result.generations[i - 1].min_mae + 1e-12);
            }
        }
    }
}
