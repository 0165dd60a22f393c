#include "predclusters/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace predclusters {

namespace {

// Minimal union-find with path compression; cluster decoding only ever
// unions N edges so union by rank is not worth the bookkeeping.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        int root = x;
        while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
        while (parent_[static_cast<std::size_t>(x)] != root) {
            int next = parent_[static_cast<std::size_t>(x)];
            parent_[static_cast<std::size_t>(x)] = root;
            x = next;
        }
        return root;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(b)] = a;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

void validate_genotype(const Genotype& g, int n) {
    if (g.size() != n) {
        throw GenotypeError("genotype length " + std::to_string(g.size()) + " != " + std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
        const int a = g.alleles[static_cast<std::size_t>(i)];
        if (a < 1 || a > n) {
            throw GenotypeError("allele " + std::to_string(a) + " at locus " + std::to_string(i) +
                                " outside 1.." + std::to_string(n));
        }
    }
}

Partition partition_from_labels(const std::vector<int>& labels) {
    const int n = static_cast<int>(labels.size());
    Partition p;
    p.labels.assign(static_cast<std::size_t>(n), -1);

    // Renumber by first appearance; first appearance order equals
    // smallest-member order when scanning 0..n-1.
    std::vector<int> remap;
    std::vector<int> seen;  // original label -> canonical id (sparse via linear scan)
    for (int i = 0; i < n; ++i) {
        const int orig = labels[static_cast<std::size_t>(i)];
        int id = -1;
        for (std::size_t s = 0; s < seen.size(); ++s) {
            if (seen[s] == orig) {
                id = static_cast<int>(s);
                break;
            }
        }
        if (id < 0) {
            id = static_cast<int>(seen.size());
            seen.push_back(orig);
            p.members.emplace_back();
        }
        p.labels[static_cast<std::size_t>(i)] = id;
        p.members[static_cast<std::size_t>(id)].push_back(i);
    }
    p.k = static_cast<int>(p.members.size());
    return p;
}

Partition decode(const Genotype& g) {
    const int n = g.size();
    validate_genotype(g, n);
    UnionFind uf(n);
    for (int i = 0; i < n; ++i) uf.unite(i, g.alleles[static_cast<std::size_t>(i)] - 1);
    std::vector<int> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = uf.find(i);
    return partition_from_labels(roots);
}

Genotype encode_star(const Partition& p, const std::vector<int>& representatives) {
    if (static_cast<int>(representatives.size()) != p.k) {
        throw GenotypeError("need one representative per cluster");
    }
    const int n = static_cast<int>(p.labels.size());
    Genotype g;
    g.alleles.assign(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < p.k; ++c) {
        const int rep = representatives[static_cast<std::size_t>(c)];
        if (rep < 0 || rep >= n || p.labels[static_cast<std::size_t>(rep)] != c) {
            throw GenotypeError("representative " + std::to_string(rep) + " outside cluster " + std::to_string(c));
        }
        for (int m : p.members[static_cast<std::size_t>(c)]) {
            g.alleles[static_cast<std::size_t>(m)] = rep + 1;
        }
        g.alleles[static_cast<std::size_t>(rep)] = rep + 1;
    }
    return g;
}

Genotype rso_from_centers(const Dataset& ds, const std::vector<int>& centers) {
    const int n = ds.n();
    std::vector<int> assigned_center(static_cast<std::size_t>(n), -1);
    for (int c : centers) assigned_center[static_cast<std::size_t>(c)] = c;

    // Process centers in ascending observation index so the tie rule
    // (lowest center index wins) falls out of strict '<' comparison.
    std::vector<int> ordered = centers;
    std::sort(ordered.begin(), ordered.end());

    for (int i = 0; i < n; ++i) {
        if (assigned_center[static_cast<std::size_t>(i)] >= 0) continue;  // a center
        double best = std::numeric_limits<double>::infinity();
        int best_center = -1;
        for (int c : ordered) {
            const double dist = (ds.features.row(i) - ds.features.row(c)).cwiseAbs().sum();
            if (dist < best) {
                best = dist;
                best_center = c;
            }
        }
        assigned_center[static_cast<std::size_t>(i)] = best_center;
    }

    Genotype g;
    g.alleles.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.alleles[static_cast<std::size_t>(i)] = assigned_center[static_cast<std::size_t>(i)] + 1;
    return g;
}

Genotype init_rso(const Dataset& ds, int k, RandomStream& rng) {
    const int n = ds.n();
    if (k < 2 || k > n) {
        throw GenotypeError("k=" + std::to_string(k) + " outside 2.." + std::to_string(n));
    }
    std::vector<int> centers = rng.sample_without_replacement(n, k);
    return rso_from_centers(ds, centers);
}

Genotype init_rc(int n, RandomStream& rng) {
    if (n < 2) throw GenotypeError("need n >= 2");
    Genotype g;
    g.alleles.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g.alleles[static_cast<std::size_t>(i)] = rng.uniform_allele(n);
    return g;
}

std::string to_string(InitMethod m) { return m == InitMethod::RSO ? "RSO" : "RC"; }

std::vector<Genotype> init_population(const Dataset& ds, InitMethod method, int size, RandomStream& rng) {
    if (size < 1) throw GenotypeError("population size must be >= 1");
    std::vector<Genotype> pop;
    pop.reserve(static_cast<std::size_t>(size));
    if (method == InitMethod::RC) {
        for (int m = 0; m < size; ++m) pop.push_back(init_rc(ds.n(), rng));
        return pop;
    }
    const int k_max = std::min(10, ds.n());
    const int cycle = k_max - 1;  // k runs 2..k_max
    for (int m = 0; m < size; ++m) {
        const int k = 2 + m % cycle;
        pop.push_back(init_rso(ds, k, rng));
    }
    return pop;
}

std::pair<Genotype, Genotype> uniform_crossover(const Genotype& p1, const Genotype& p2,
                                                const std::vector<int>& mask) {
    const int n = p1.size();
    if (p2.size() != n || static_cast<int>(mask.size()) != n) {
        throw GenotypeError("crossover length mismatch");
    }
    Genotype c1, c2;
    c1.alleles.resize(static_cast<std::size_t>(n));
    c2.alleles.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const bool take2 = mask[static_cast<std::size_t>(i)] != 0;
        c1.alleles[static_cast<std::size_t>(i)] = take2 ? p2.alleles[static_cast<std::size_t>(i)] : p1.alleles[static_cast<std::size_t>(i)];
        c2.alleles[static_cast<std::size_t>(i)] = take2 ? p1.alleles[static_cast<std::size_t>(i)] : p2.alleles[static_cast<std::size_t>(i)];
    }
    return {std::move(c1), std::move(c2)};
}

std::pair<Genotype, Genotype> uniform_crossover(const Genotype& p1, const Genotype& p2, RandomStream& rng) {
    std::vector<int> mask(static_cast<std::size_t>(p1.size()));
    for (auto& m : mask) m = rng.coin() ? 1 : 0;
    return uniform_crossover(p1, p2, mask);
}

Genotype swap_mutation(const Genotype& g, int locus_a, int locus_b) {
    const int n = g.size();
    if (locus_a < 0 || locus_a >= n || locus_b < 0 || locus_b >= n || locus_a == locus_b) {
        throw GenotypeError("invalid mutation loci");
    }
    Genotype out = g;
    std::swap(out.alleles[static_cast<std::size_t>(locus_a)], out.alleles[static_cast<std::size_t>(locus_b)]);
    return out;
}

Genotype swap_mutation(const Genotype& g, RandomStream& rng) {
    if (g.size() < 2) throw GenotypeError("need length >= 2 to mutate");
    auto [a, b] = rng.distinct_pair(static_cast<std::size_t>(g.size()));
    return swap_mutation(g, static_cast<int>(a), static_cast<int>(b));
}

}  // namespace predclusters
