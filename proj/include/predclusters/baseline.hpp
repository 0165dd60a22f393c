#pragma once

#include "predclusters/dataset.hpp"
#include "predclusters/nsga2.hpp"
#include "predclusters/rng.hpp"
#include "predclusters/run_result.hpp"

namespace predclusters {

// Deviation-only genetic algorithm: same initialization and operators as
// the multi-objective engine, binary tournament and elitist truncation both
// on deviation alone. MAE is evaluated and logged every generation but
// never influences selection, so the search trajectory is invariant to the
// outcome column.
RunResult run_soga(const Dataset& ds, const EvolutionConfig& cfg, RandomStream& rng);
RunResult run_soga(const Dataset& ds, const EvolutionConfig& cfg);

}  // namespace predclusters
