#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "predclusters/dataset.hpp"
#include "predclusters/genotype.hpp"

namespace predclusters {

struct NonFiniteInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Componentwise medians, one row per cluster. Even-sized clusters take the
// midpoint of the two middle values.
struct Centers {
    Eigen::MatrixXd medians;  // k x d

    int k() const { return static_cast<int>(medians.rows()); }
};

enum class RegressionMode { LR, CP };

std::string to_string(RegressionMode mode);
RegressionMode regression_mode_from_string(const std::string& s);

// Fitted predictor and its in-sample predictions. LR keeps one coefficient
// vector (intercept first) per cluster; CP keeps a single global pair.
struct ClusterRegression {
    RegressionMode mode = RegressionMode::LR;
    std::vector<Eigen::VectorXd> coefficients;
    Eigen::VectorXd predictions;  // length N
};

struct ObjectiveValues {
    double deviation = 0.0;
    double mae = 0.0;
};

Centers compute_centers(const Partition& p, const Dataset& ds);

double deviation(const Partition& p, const Centers& centers, const Dataset& ds);
double deviation(const Partition& p, const Dataset& ds);

// Per-cluster least squares of the outcome on all features plus intercept,
// scored in-sample. Clusters with no more members than coefficients predict
// each member's own outcome exactly (the fit would interpolate anyway).
ClusterRegression fit_lr(const Partition& p, const Dataset& ds);

// One simple regression of the outcome on the numeric cluster labels 1..k.
// A single cluster (or any zero-variance label vector) degenerates to the
// outcome mean.
ClusterRegression fit_cp(const Partition& p, const Dataset& ds);

// Macro-average: mean over clusters of the cluster's mean absolute residual.
double mae(const Partition& p, const Eigen::VectorXd& predictions, const Dataset& ds);

ObjectiveValues evaluate_partition(const Partition& p, const Dataset& ds, RegressionMode mode);
ObjectiveValues evaluate(const Genotype& g, const Dataset& ds, RegressionMode mode);

// Minimum-residual solve; full-rank systems match the pseudo-inverse, and
// rank-deficient ones fall back to a tiny ridge term on the normal
// equations so the result stays finite and deterministic.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets);

// Dissolves clusters smaller than min_size by sending their members to the
// nearest other cluster's median center (L1, ties to the lowest cluster
// index). Smallest offender first; stops when all clusters comply or one
// cluster remains.
Partition repair_small_clusters(const Partition& p, const Dataset& ds, int min_size);

}  // namespace predclusters
