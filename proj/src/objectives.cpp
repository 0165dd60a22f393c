#include "predclusters/objectives.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

namespace predclusters {

namespace {

double column_median(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string to_string(RegressionMode mode) { return mode == RegressionMode::LR ? "LR" : "CP"; }

RegressionMode regression_mode_from_string(const std::string& s) {
    if (s == "LR" || s == "lr") return RegressionMode::LR;
    if (s == "CP" || s == "cp") return RegressionMode::CP;
    throw std::invalid_argument("unknown regression mode: " + s);
}

Centers compute_centers(const Partition& p, const Dataset& ds) {
    const int d = ds.dims();
    Centers c;
    c.medians.resize(p.k, d);
    std::vector<double> column;
    for (int k = 0; k < p.k; ++k) {
        const auto& members = p.members[static_cast<std::size_t>(k)];
        for (int j = 0; j < d; ++j) {
            column.clear();
            for (int m : members) column.push_back(ds.features(m, j));
            c.medians(k, j) = column_median(column);
        }
    }
    return c;
}

double deviation(const Partition& p, const Centers& centers, const Dataset& ds) {
    double total = 0.0;
    for (int k = 0; k < p.k; ++k) {
        for (int m : p.members[static_cast<std::size_t>(k)]) {
            total += (ds.features.row(m) - centers.medians.row(k)).cwiseAbs().sum();
        }
    }
    return total;
}

double deviation(const Partition& p, const Dataset& ds) {
    return deviation(p, compute_centers(p, ds), ds);
}

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
    if (!design.allFinite() || !targets.allFinite()) {
        throw NonFiniteInput("least-squares input contains non-finite values");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() == design.cols()) {
        return qr.solve(targets);
    }
    // Rank-deficient: ridge on the normal equations, every coefficient
    // penalized alike.
    const double lambda = 1e-8;
    const int q = static_cast<int>(design.cols());
    Eigen::MatrixXd gram = design.transpose() * design;
    gram += lambda * Eigen::MatrixXd::Identity(q, q);
    return gram.ldlt().solve(design.transpose() * targets);
}

ClusterRegression fit_lr(const Partition& p, const Dataset& ds) {
    const int n = ds.n();
    const int d = ds.dims();
    const int q = d + 1;

    ClusterRegression reg;
    reg.mode = RegressionMode::LR;
    reg.coefficients.reserve(static_cast<std::size_t>(p.k));
    reg.predictions.resize(n);

    for (int k = 0; k < p.k; ++k) {
        const auto& members = p.members[static_cast<std::size_t>(k)];
        const int m = static_cast<int>(members.size());
        if (m <= q) {
            // Too few members to do better than interpolate: predict each
            // member's own outcome. The stored coefficients are a constant
            // fit kept only so every cluster has a d+1 vector.
            double mean_y = 0.0;
            for (int obs : members) mean_y += ds.outcome(obs);
            mean_y /= m;
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
            beta(0) = mean_y;
            reg.coefficients.push_back(std::move(beta));
            for (int obs : members) reg.predictions(obs) = ds.outcome(obs);
            continue;
        }
        Eigen::MatrixXd design(m, q);
        Eigen::VectorXd y(m);
        for (int i = 0; i < m; ++i) {
            const int obs = members[static_cast<std::size_t>(i)];
            design(i, 0) = 1.0;
            design.row(i).tail(d) = ds.features.row(obs);
            y(i) = ds.outcome(obs);
        }
        Eigen::VectorXd beta = solve_least_squares(design, y);
        for (int i = 0; i < m; ++i) {
            reg.predictions(members[static_cast<std::size_t>(i)]) = design.row(i).dot(beta);
        }
        reg.coefficients.push_back(std::move(beta));
    }
    return reg;
}

ClusterRegression fit_cp(const Partition& p, const Dataset& ds) {
    const int n = ds.n();

    ClusterRegression reg;
    reg.mode = RegressionMode::CP;
    reg.predictions.resize(n);

    const double mean_y = ds.outcome.mean();
    double b0 = mean_y;
    double b1 = 0.0;
    if (p.k > 1) {
        // Simple regression of y on labels 1..k; slope = cov / var.
        double mean_x = 0.0;
        for (int i = 0; i < n; ++i) mean_x += p.labels[static_cast<std::size_t>(i)] + 1;
        mean_x /= n;
        double sxx = 0.0;
        double sxy = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dx = (p.labels[static_cast<std::size_t>(i)] + 1) - mean_x;
            sxx += dx * dx;
            sxy += dx * (ds.outcome(i) - mean_y);
        }
        if (sxx > 0.0) {
            b1 = sxy / sxx;
            b0 = mean_y - b1 * mean_x;
        }
    }
    for (int i = 0; i < n; ++i) {
        reg.predictions(i) = b0 + b1 * (p.labels[static_cast<std::size_t>(i)] + 1);
    }
    Eigen::VectorXd beta(2);
    beta << b0, b1;
    reg.coefficients.push_back(std::move(beta));
    return reg;
}

double mae(const Partition& p, const Eigen::VectorXd& predictions, const Dataset& ds) {
    double total = 0.0;
    for (int k = 0; k < p.k; ++k) {
        const auto& members = p.members[static_cast<std::size_t>(k)];
        double cluster_sum = 0.0;
        for (int obs : members) {
            cluster_sum += std::abs(ds.outcome(obs) - predictions(obs));
        }
        total += cluster_sum / static_cast<double>(members.size());
    }
    return total / static_cast<double>(p.k);
}

ObjectiveValues evaluate_partition(const Partition& p, const Dataset& ds, RegressionMode mode) {
    ObjectiveValues v;
    v.deviation = deviation(p, ds);
    const ClusterRegression reg = mode == RegressionMode::LR ? fit_lr(p, ds) : fit_cp(p, ds);
    v.mae = mae(p, reg.predictions, ds);
    return v;
}

ObjectiveValues evaluate(const Genotype& g, const Dataset& ds, RegressionMode mode) {
    return evaluate_partition(decode(g), ds, mode);
}

Partition repair_small_clusters(const Partition& p, const Dataset& ds, int min_size) {
    if (min_size <= 1) return p;
    Partition cur = p;
    while (cur.k > 1) {
        int victim = -1;
        std::size_t victim_size = 0;
        for (int k = 0; k < cur.k; ++k) {
            const std::size_t sz = cur.members[static_cast<std::size_t>(k)].size();
            if (sz < static_cast<std::size_t>(min_size) && (victim < 0 || sz < victim_size)) {
                victim = k;
                victim_size = sz;
            }
        }
        if (victim < 0) break;
        const Centers centers = compute_centers(cur, ds);
        std::vector<int> labels = cur.labels;
        for (int obs : cur.members[static_cast<std::size_t>(victim)]) {
            double best = std::numeric_limits<double>::infinity();
            int best_k = -1;
            for (int k = 0; k < cur.k; ++k) {
                if (k == victim) continue;
                const double dist = (ds.features.row(obs) - centers.medians.row(k)).cwiseAbs().sum();
                if (dist < best) {
                    best = dist;
                    best_k = k;
                }
            }
            labels[static_cast<std::size_t>(obs)] = best_k;
        }
        cur = partition_from_labels(labels);
    }
    return cur;
}

}  // namespace predclusters
