// Writes the two bundled datasets. Output is deterministic: fixed seeds, fixed
// row order, shortest round-trip number formatting.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "predclusters/format.hpp"
#include "predclusters/rng.hpp"

namespace fs = std::filesystem;
using predclusters::format_double;
using predclusters::RandomStream;

namespace {

// Box-Muller, consuming two uniforms per call so the stream layout is stable.
double normal(RandomStream& rng, double mean, double sd) {
    double u1 = rng.uniform01();
    while (u1 <= 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sd * z;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot open " << path << " for writing\n";
        std::exit(1);
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

// Two well separated blobs with opposite predictability: the larger one is
// wide and carries most of the outcome noise, the smaller one is tight and
// almost noiseless. Sizes 90/60 leave room for exactly two clusters when a
// minimum cluster size of 60 is enforced, so the interesting question is
// whether the search finds the split that keeps both response surfaces clean.
void make_blobs(const fs::path& path) {
    RandomStream rng(20260301);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 90; ++i) {
        const double x1 = normal(rng, 0.0, 1.0);
        const double x2 = normal(rng, 0.0, 1.0);
        const double y = 10.0 + 8.0 * x1 - 6.0 * x2 + normal(rng, 0.0, 0.6);
        rows.push_back({x1, x2, y});
    }
    for (int i = 0; i < 60; ++i) {
        const double x1 = normal(rng, 12.0, 0.5);
        const double x2 = normal(rng, 12.0, 0.5);
        const double y = -40.0 + x1 + x2 + normal(rng, 0.0, 0.01);
        rows.push_back({x1, x2, y});
    }
    write_csv(path, {"x1", "x2", "y"}, rows);
}

// Stand-in with the shape of the NASA airfoil noise table: 1503 rows, five
// features, one outcome. Three latent regimes, each with its own response
// surface. The response bends along the narrow feature x1 while the widest
// feature x4 carries no signal, so splits that help compactness are not the
// splits that help prediction.
void make_surrogate(const fs::path& path) {
    RandomStream rng(19890604);
    const int counts[3] = {601, 501, 401};
    const double centers[3][5] = {
        {2.0, 5.0, 0.1, 40.0, 0.005},
        {8.0, 12.0, 0.25, 55.0, 0.02},
        {5.0, 2.0, 0.18, 70.0, 0.04},
    };
    const double spreads[3][5] = {
        {0.8, 1.5, 0.03, 4.0, 0.002},
        {1.2, 2.0, 0.05, 5.0, 0.006},
        {1.0, 1.0, 0.04, 6.0, 0.01},
    };
    const double coeffs[3][6] = {
        {120.0, -3.0, 1.2, -40.0, 0.0, 900.0},
        {95.0, 2.0, -0.8, 60.0, 0.0, -400.0},
        {140.0, -1.0, 2.5, 25.0, 0.0, 300.0},
    };
    const double bend[3] = {6.0, -4.0, 8.0};
    std::vector<std::vector<double>> rows;
    for (int b = 0; b < 3; ++b) {
        for (int i = 0; i < counts[b]; ++i) {
            std::vector<double> row(6);
            double y = coeffs[b][0];
            for (int f = 0; f < 5; ++f) {
                row[static_cast<std::size_t>(f)] = normal(rng, centers[b][f], spreads[b][f]);
                y += coeffs[b][f + 1] * row[static_cast<std::size_t>(f)];
            }
            const double dx1 = row[0] - centers[b][0];
            y += bend[b] * dx1 * dx1;
            row[5] = y + normal(rng, 0.0, 1.5);
            rows.push_back(std::move(row));
        }
    }
    write_csv(path, {"x1", "x2", "x3", "x4", "x5", "y"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
    fs::path out_dir = "data";
    if (argc == 3 && std::string(argv[1]) == "--out-dir") {
        out_dir = argv[2];
    } else if (argc != 1) {
        std::cerr << "usage: gen_data [--out-dir DIR]\n";
        return 2;
    }
    fs::create_directories(out_dir);
    make_blobs(out_dir / "synthetic_blobs.csv");
    make_surrogate(out_dir / "airfoil_surrogate.csv");
    std::cout << "wrote synthetic_blobs.csv and airfoil_surrogate.csv to " << out_dir.string() << "\n";
    return 0;
}
