#include "predclusters/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace predclusters {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int max_iter = 400;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre polynomial roots.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = rule.weights[static_cast<std::size_t>(i)];
    }
    return rule;
}

const GaussRule& rule16() {
    static const GaussRule rule = gauss_legendre(16);
    return rule;
}

// Composite Gauss-Legendre integral of f over [lo, hi].
template <typename F>
double integrate(F&& f, double lo, double hi, int panels) {
    const GaussRule& rule = rule16();
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double mid = a + 0.5 * width;
        const double half = 0.5 * width;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        total += panel * half;
    }
    return total;
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// P(range of k independent standard normals <= u).
double normal_range_cdf(double u, int k) {
    if (u <= 0.0) return 0.0;
    const auto integrand = [&](double z) {
        const double span = std::max(0.0, normal_cdf(z) - normal_cdf(z - u));
        return normal_pdf(z) * std::pow(span, k - 1);
    };
    return k * integrate(integrand, -8.5, 8.5, 24);
}

void check_group(const SampleGroup& g) {
    if (g.values.size() < 2) throw InvalidParameters("group '" + g.label + "' needs >= 2 values");
    for (double v : g.values) {
        if (!std::isfinite(v)) throw InvalidParameters("group '" + g.label + "' has non-finite values");
    }
}

double group_mean(const SampleGroup& g) {
    return std::accumulate(g.values.begin(), g.values.end(), 0.0) / static_cast<double>(g.values.size());
}

struct Decomposition {
    std::vector<double> means;
    std::vector<std::size_t> sizes;
    double ss_between = 0.0;
    double ss_within = 0.0;
    double df_between = 0.0;
    double df_within = 0.0;
};

Decomposition decompose(const std::vector<SampleGroup>& groups) {
    if (groups.size() < 2) throw InvalidParameters("need >= 2 groups");
    Decomposition d;
    double grand_sum = 0.0;
    std::size_t n_total = 0;
    for (const SampleGroup& g : groups) {
        check_group(g);
        d.means.push_back(group_mean(g));
        d.sizes.push_back(g.values.size());
        grand_sum += std::accumulate(g.values.begin(), g.values.end(), 0.0);
        n_total += g.values.size();
    }
    const double grand_mean = grand_sum / static_cast<double>(n_total);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double dm = d.means[i] - grand_mean;
        d.ss_between += static_cast<double>(d.sizes[i]) * dm * dm;
        for (double v : groups[i].values) {
            const double dv = v - d.means[i];
            d.ss_within += dv * dv;
        }
    }
    d.df_between = static_cast<double>(groups.size()) - 1.0;
    d.df_within = static_cast<double>(n_total) - static_cast<double>(groups.size());
    return d;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw InvalidParameters("beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double t_cdf(double x, double df) {
    if (!(df > 0.0)) throw InvalidParameters("t degrees of freedom must be positive");
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x * x));
    return x >= 0.0 ? 1.0 - tail : tail;
}

double f_cdf(double x, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw InvalidParameters("F degrees of freedom must be positive");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return regularized_incomplete_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2));
}

double studentized_range_cdf(double q, int k, double df) {
    if (k < 2) throw InvalidParameters("studentized range needs k >= 2");
    if (!(df > 0.0)) throw InvalidParameters("studentized range df must be positive");
    if (q <= 0.0) return 0.0;
    if (std::isinf(q)) return 1.0;
    if (std::isinf(df)) return normal_range_cdf(q, k);

    // Integrate the range CDF against the density of s = chi_df / sqrt(df).
    const double ln_norm = std::log(2.0) + 0.5 * df * std::log(0.5 * df) - std::lgamma(0.5 * df);
    const auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double ln_density = ln_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
        return std::exp(ln_density) * normal_range_cdf(q * s, k);
    };
    const double spread = 12.0 / std::sqrt(2.0 * df);
    const double lo = std::max(0.0, 1.0 - spread);
    const double hi = 1.0 + spread;
    return std::min(1.0, integrate(integrand, lo, hi, 48));
}

double studentized_range_quantile(double p, int k, double df) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameters("quantile probability must lie in (0, 1)");
    double lo = 0.0;
    double hi = 1.0;
    while (studentized_range_cdf(hi, k, df) < p) {
        hi *= 2.0;
        if (hi > 1e6) throw InvalidParameters("quantile search diverged");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (studentized_range_cdf(mid, k, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

AnovaResult anova_oneway(const std::vector<SampleGroup>& groups) {
    const Decomposition d = decompose(groups);
    AnovaResult res;
    res.df_between = d.df_between;
    res.df_within = d.df_within;
    res.ms_within = d.df_within > 0.0 ? d.ss_within / d.df_within : 0.0;
    if (d.ss_within <= 0.0) {
        if (d.ss_between <= 0.0) {
            res.f = 0.0;
            res.p = 1.0;
        } else {
            res.f = kInf;
            res.p = 0.0;
        }
        return res;
    }
    res.f = (d.ss_between / d.df_between) / (d.ss_within / d.df_within);
    res.p = 1.0 - f_cdf(res.f, d.df_between, d.df_within);
    return res;
}

TukeyReport tukey_hsd(const std::vector<SampleGroup>& groups, double alpha) {
    const Decomposition d = decompose(groups);
    const int k = static_cast<int>(groups.size());
    const double msw = d.df_within > 0.0 ? d.ss_within / d.df_within : 0.0;

    TukeyReport report;
    report.pairwise.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 1.0));
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double p;
            const double delta = std::fabs(d.means[static_cast<std::size_t>(i)] - d.means[static_cast<std::size_t>(j)]);
            if (msw <= 0.0) {
                p = delta > 0.0 ? 0.0 : 1.0;
            } else {
                const double se = std::sqrt(0.5 * msw *
                                            (1.0 / static_cast<double>(d.sizes[static_cast<std::size_t>(i)]) +
                                             1.0 / static_cast<double>(d.sizes[static_cast<std::size_t>(j)])));
                const double q = delta / se;
                p = 1.0 - studentized_range_cdf(q, k, d.df_within);
            }
            report.pairwise[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
            report.pairwise[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = p;
        }
    }

    // Homogeneous subsets: over groups sorted by mean, each maximal run
    // whose members are all pairwise non-significant forms a subset; runs
    // contained in an earlier one are dropped.
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return d.means[static_cast<std::size_t>(a)] < d.means[static_cast<std::size_t>(b)];
    });

    const auto pair_ok = [&](int a, int b) {
        return report.pairwise[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])]
                              [static_cast<std::size_t>(order[static_cast<std::size_t>(b)])] >= alpha;
    };
    int prev_end = -1;
    for (int start = 0; start < k; ++start) {
        int end = start;
        bool extendable = true;
        while (extendable && end + 1 < k) {
            for (int a = start; a <= end; ++a) {
                if (!pair_ok(a, end + 1)) {
                    extendable = false;
                    break;
                }
            }
            if (extendable) ++end;
        }
        if (end <= prev_end) continue;  // contained in the previous subset
        HomogeneousSubset subset;
        for (int i = start; i <= end; ++i) subset.groups.push_back(order[static_cast<std::size_t>(i)]);
        subset.sig = end > start
                         ? report.pairwise[static_cast<std::size_t>(subset.groups.front())]
                                          [static_cast<std::size_t>(subset.groups.back())]
                         : 1.0;
        report.subsets.push_back(std::move(subset));
        prev_end = end;
    }
    return report;
}

TTestResult ttest_ind(const SampleGroup& a, const SampleGroup& b) {
    check_group(a);
    check_group(b);
    const double na = static_cast<double>(a.values.size());
    const double nb = static_cast<double>(b.values.size());
    const double ma = group_mean(a);
    const double mb = group_mean(b);
    double ssa = 0.0;
    double ssb = 0.0;
    for (double v : a.values) ssa += (v - ma) * (v - ma);
    for (double v : b.values) ssb += (v - mb) * (v - mb);

    TTestResult res;
    res.df = na + nb - 2.0;
    const double pooled_var = (ssa + ssb) / res.df;
    if (pooled_var <= 0.0) {
        if (ma == mb) {
            res.t = 0.0;
            res.p = 1.0;
        } else {
            res.t = ma < mb ? -kInf : kInf;
            res.p = 0.0;
        }
        return res;
    }
    res.t = (ma - mb) / std::sqrt(pooled_var * (1.0 / na + 1.0 / nb));
    res.p = 2.0 * (1.0 - t_cdf(std::fabs(res.t), res.df));
    return res;
}

StatsReport build_stats_report(const std::vector<SampleGroup>& groups, double alpha) {
    StatsReport report;
    report.anova = anova_oneway(groups);
    report.tukey = tukey_hsd(groups, alpha);
    for (const SampleGroup& g : groups) {
        report.labels.push_back(g.label);
        report.means.push_back(group_mean(g));
    }
    report.best_group = static_cast<int>(
        std::min_element(report.means.begin(), report.means.end()) - report.means.begin());
    for (int j = 0; j < static_cast<int>(groups.size()); ++j) {
        if (j == report.best_group) continue;
        const bool tied =
            report.anova.p >= alpha ||
            report.tukey.pairwise[static_cast<std::size_t>(report.best_group)][static_cast<std::size_t>(j)] >= alpha;
        if (tied) report.best_equivalents.push_back(j);
    }
    return report;
}

}  // namespace predclusters
