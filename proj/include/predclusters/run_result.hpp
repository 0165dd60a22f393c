#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace predclusters {

// One row of the per-generation trajectory. Generation 0 describes the
// evaluated initial population.
struct GenerationRow {
    int generation = 0;
    double mean_deviation = 0.0;
    double min_deviation = 0.0;
    double mean_mae = 0.0;
    double min_mae = 0.0;
    int front1_size = 0;
};

// One row per individual of the final population.
struct FinalRow {
    int id = 0;  // index within the final population
    int k = 0;
    double deviation = 0.0;
    double mae = 0.0;
    int rank = 0;          // 1-based front index
    double crowding = 0.0; // +infinity on front boundaries
};

struct RunResult {
    int model_id = 0;  // 0 when the run is not part of the 8-model matrix
    std::string init_method;
    std::string regression_mode;
    std::string update_method;  // CM, SGD, or GA
    std::uint64_t seed = 0;
    std::vector<GenerationRow> generations;       // iterations + 1 rows
    std::vector<FinalRow> final_population;
    double wall_time_seconds = 0.0;
};

}  // namespace predclusters
