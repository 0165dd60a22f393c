#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace predclusters {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidParameters : StatsError {
    using StatsError::StatsError;
};

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    double df_between = 0.0;
    double df_within = 0.0;
    double ms_within = 0.0;
};

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

// Group indices are positions in the input sequence; members are listed in
// ascending-mean order. sig is the Tukey p of the subset's extreme pair
// (1 for singletons).
struct HomogeneousSubset {
    std::vector<int> groups;
    double sig = 1.0;
};

struct TukeyReport {
    std::vector<std::vector<double>> pairwise;  // symmetric p matrix, diagonal 1
    std::vector<HomogeneousSubset> subsets;
};

// Full comparison bundle over one set of sample groups.
struct StatsReport {
    std::vector<std::string> labels;
    std::vector<double> means;
    AnovaResult anova;
    TukeyReport tukey;
    int best_group = -1;                 // minimal mean
    std::vector<int> best_equivalents;   // groups not significantly different from best
};

AnovaResult anova_oneway(const std::vector<SampleGroup>& groups);

TukeyReport tukey_hsd(const std::vector<SampleGroup>& groups, double alpha = 0.05);

// Pooled-variance two-sided t-test.
TTestResult ttest_ind(const SampleGroup& a, const SampleGroup& b);

// ANOVA + Tukey + winner selection: if the ANOVA rejects at alpha, the
// equivalents are the groups whose Tukey p against the best is >= alpha;
// otherwise every other group ties with the best.
StatsReport build_stats_report(const std::vector<SampleGroup>& groups, double alpha = 0.05);

// Distribution plumbing, exposed for validation.
double regularized_incomplete_beta(double a, double b, double x);
double normal_cdf(double z);
double t_cdf(double x, double df);
double f_cdf(double x, double df1, double df2);

// Pass df = +infinity for the pure range-of-normals case.
double studentized_range_cdf(double q, int k, double df);
double studentized_range_quantile(double p, int k, double df);

}  // namespace predclusters
