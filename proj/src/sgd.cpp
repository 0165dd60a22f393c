#include "predclusters/sgd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace predclusters {

double learning_rate(int n_r, const SgdParams& params) {
    return params.c_gamma / std::pow(1.0 + params.c_alpha * static_cast<double>(n_r), params.alpha);
}

Eigen::VectorXd sgd_center_step(const Eigen::VectorXd& center, const Eigen::VectorXd& z, double a) {
    const Eigen::VectorXd diff = center - z;
    const double dist = diff.norm();
    if (dist < 1e-12) return center;
    return center - (a / dist) * diff;
}

Individual improve_solution(const Individual& ind, const Dataset& ds, const SgdParams& params,
                            RandomStream& rng, RegressionMode mode, int min_cluster_size) {
    const Partition part = decode(ind.genotype);
    if (part.k <= 1) return ind;

    const int n = ds.n();
    Centers centers = compute_centers(part, ds);

    std::vector<int> visit_order(static_cast<std::size_t>(part.k));
    std::iota(visit_order.begin(), visit_order.end(), 0);
    rng.shuffle(visit_order);

    for (int r : visit_order) {
        const auto& members = part.members[static_cast<std::size_t>(r)];
        const double a = learning_rate(static_cast<int>(members.size()), params);
        const int z_obs = members[rng.uniform_index(members.size())];
        const Eigen::VectorXd z = ds.features.row(z_obs).transpose();
        centers.medians.row(r) = sgd_center_step(centers.medians.row(r).transpose(), z, a).transpose();
    }

    // Global reassignment to the updated centers, L1, ties to the lowest
    // cluster index.
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_r = -1;
        for (int r = 0; r < part.k; ++r) {
            const double dist = (ds.features.row(i) - centers.medians.row(r)).cwiseAbs().sum();
            if (dist < best) {
                best = dist;
                best_r = r;
            }
        }
        labels[static_cast<std::size_t>(i)] = best_r;
    }

    // Per surviving cluster, the representative is the member nearest its
    // updated center (lowest index on ties); the star genotype then decodes
    // back to exactly these labels.
    std::vector<int> representative(static_cast<std::size_t>(part.k), -1);
    std::vector<double> rep_dist(static_cast<std::size_t>(part.k),
                                 std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i) {
        const int r = labels[static_cast<std::size_t>(i)];
        const double dist = (ds.features.row(i) - centers.medians.row(r)).cwiseAbs().sum();
        if (dist < rep_dist[static_cast<std::size_t>(r)]) {
            rep_dist[static_cast<std::size_t>(r)] = dist;
            representative[static_cast<std::size_t>(r)] = i;
        }
    }

    Genotype g;
    g.alleles.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        g.alleles[static_cast<std::size_t>(i)] =
            representative[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] + 1;
    }
    return make_individual(std::move(g), ds, mode, min_cluster_size);
}

void sgd_generation_step(std::vector<Individual>& pop, const Dataset& ds, const SgdParams& params,
                         RandomStream& rng, RegressionMode mode, int min_cluster_size) {
    for (Individual& ind : pop) {
        if (ind.rank > 1) ind = improve_solution(ind, ds, params, rng, mode, min_cluster_size);
    }
}

RunResult run_sgd_evolution(const Dataset& ds, const EvolutionConfig& cfg, const SgdParams& params,
                            RandomStream& rng) {
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
    result.update_method = "SGD";
    result.seed = cfg.seed;
    result.generations.push_back(summarize_generation(0, pop));

    for (int gen = 1; gen <= cfg.iterations; ++gen) {
        sgd_generation_step(pop, ds, params, rng, cfg.regression_mode, cfg.min_cluster_size);
        sort_and_crowd(pop);
        result.generations.push_back(summarize_generation(gen, pop));
    }

    result.final_population = final_rows(pop);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RunResult run_sgd_evolution(const Dataset& ds, const EvolutionConfig& cfg, const SgdParams& params) {
    RandomStream rng(cfg.seed);
    return run_sgd_evolution(ds, cfg, params, rng);
}

}  // namespace predclusters
