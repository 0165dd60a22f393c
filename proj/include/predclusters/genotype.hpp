#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "predclusters/dataset.hpp"
#include "predclusters/rng.hpp"

namespace predclusters {

// Locus-based adjacency chromosome: gene i holding allele j (1-based) links
// observations i and j; clusters are the connected components of those links.
struct Genotype {
    std::vector<int> alleles;  // each in 1..N

    int size() const { return static_cast<int>(alleles.size()); }
};

struct GenotypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cluster ids are canonical: clusters numbered by smallest member index,
// ascending, so equal partitions compare equal.
struct Partition {
    std::vector<int> labels;           // length N, values 0..k-1
    std::vector<std::vector<int>> members;  // per cluster, sorted observation indices
    int k = 0;
};

void validate_genotype(const Genotype& g, int n);

Partition decode(const Genotype& g);

// Builds a partition directly from labels (any id scheme), canonicalized.
Partition partition_from_labels(const std::vector<int>& labels);

// Star encoding: the representative links to itself, every other member
// links to the representative. representatives[c] must belong to cluster c.
Genotype encode_star(const Partition& p, const std::vector<int>& representatives);

// Nearest-center assignment used by RSO: L1 distance, ties to the lowest
// center observation index, centers always assigned to themselves.
Genotype rso_from_centers(const Dataset& ds, const std::vector<int>& centers);

Genotype init_rso(const Dataset& ds, int k, RandomStream& rng);

Genotype init_rc(int n, RandomStream& rng);

enum class InitMethod { RSO, RC };

std::string to_string(InitMethod m);

// RSO cycles k over 2..min(10, N); RC draws fully random chromosomes.
std::vector<Genotype> init_population(const Dataset& ds, InitMethod method, int size, RandomStream& rng);

// Uniform crossover: child1 takes parent1 where mask=0 and parent2 where
// mask=1; child2 uses the complemented mask.
std::pair<Genotype, Genotype> uniform_crossover(const Genotype& p1, const Genotype& p2,
                                                const std::vector<int>& mask);
std::pair<Genotype, Genotype> uniform_crossover(const Genotype& p1, const Genotype& p2,
                                                RandomStream& rng);

// Exchanges the alleles at two loci (0-based).
Genotype swap_mutation(const Genotype& g, int locus_a, int locus_b);
Genotype swap_mutation(const Genotype& g, RandomStream& rng);

}  // namespace predclusters
