#pragma once

#include <Eigen/Core>

#include "predclusters/dataset.hpp"
#include "predclusters/nsga2.hpp"
#include "predclusters/rng.hpp"
#include "predclusters/run_result.hpp"

namespace predclusters {

struct SgdParams {
    double c_gamma = 2000.0;
    double c_alpha = 1.0;
    double alpha = 0.75;
};

// c_gamma / (1 + c_alpha * n_r)^alpha; strictly decreasing in the cluster
// size n_r.
double learning_rate(int n_r, const SgdParams& params);

// Moves the center distance a along the Euclidean unit vector toward z.
// Centers already within 1e-12 of z stay put.
Eigen::VectorXd sgd_center_step(const Eigen::VectorXd& center, const Eigen::VectorXd& z, double a);

// One improvement pass over a dominated individual: nudge each cluster's
// center toward one sampled member (clusters visited in random order), then
// reassign every observation to the nearest updated center by L1 distance
// (ties to the lowest cluster index), drop empty clusters, and re-encode a
// star genotype whose representative is the member closest to its updated
// center. Single-cluster individuals pass through unchanged.
Individual improve_solution(const Individual& ind, const Dataset& ds, const SgdParams& params,
                            RandomStream& rng, RegressionMode mode, int min_cluster_size = 0);

// Applies improve_solution to every dominated individual in place; rank
// fields must be current. Non-dominated individuals are left untouched.
void sgd_generation_step(std::vector<Individual>& pop, const Dataset& ds, const SgdParams& params,
                         RandomStream& rng, RegressionMode mode, int min_cluster_size = 0);

RunResult run_sgd_evolution(const Dataset& ds, const EvolutionConfig& cfg, const SgdParams& params,
                            RandomStream& rng);
RunResult run_sgd_evolution(const Dataset& ds, const EvolutionConfig& cfg, const SgdParams& params);

}  // namespace predclusters
