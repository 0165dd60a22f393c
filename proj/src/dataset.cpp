#include "predclusters/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "predclusters/format.hpp"

namespace predclusters {

std::string to_string(Normalization mode) {
    switch (mode) {
        case Normalization::None: return "none";
        case Normalization::ZScore: return "zscore";
        case Normalization::MinMax: return "minmax";
    }
    return "none";
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "none") return Normalization::None;
    if (s == "zscore") return Normalization::ZScore;
    if (s == "minmax") return Normalization::MinMax;
    throw std::invalid_argument("unknown normalization mode: " + s);
}

TargetSelector TargetSelector::parse(const std::string& s) {
    if (s == "last") return last();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        return by_index(std::stoi(s));
    }
    return by_name(s);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
    if (cell.empty()) throw ParseError(row, col, "missing value");
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(row, col, "not a number: '" + cell + "'");
    }
    if (!std::isfinite(v)) throw ParseError(row, col, "non-finite value");
    return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const TargetSelector& target, Normalization mode) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyDatasetError(path + " has no header row");
    const std::vector<std::string> header = split_csv_line(line);
    const int cols = static_cast<int>(header.size());
    if (cols < 2) throw EmptyDatasetError(path + " needs at least two columns");

    int target_col = -1;
    switch (target.kind) {
        case TargetSelector::Kind::Last:
            target_col = cols - 1;
            break;
        case TargetSelector::Kind::Index:
            if (target.index < 0 || target.index >= cols) {
                throw TargetNotFoundError("column index " + std::to_string(target.index) +
                                          " out of range (0.." + std::to_string(cols - 1) + ")");
            }
            target_col = target.index;
            break;
        case TargetSelector::Kind::Name: {
            for (int c = 0; c < cols; ++c) {
                if (header[static_cast<std::size_t>(c)] == target.name) {
                    target_col = c;
                    break;
                }
            }
            if (target_col < 0) throw TargetNotFoundError("'" + target.name + "'");
            break;
        }
    }

    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != cols) {
            throw ParseError(lineno, static_cast<int>(cells.size()),
                             "expected " + std::to_string(cols) + " columns, got " +
                                 std::to_string(cells.size()));
        }
        std::vector<double> vals(static_cast<std::size_t>(cols));
        for (int c = 0; c < cols; ++c) {
            vals[static_cast<std::size_t>(c)] = parse_cell(cells[static_cast<std::size_t>(c)], lineno, c + 1);
        }
        rows.push_back(std::move(vals));
    }

    const int n = static_cast<int>(rows.size());
    if (n < 2) throw EmptyDatasetError(path + " has " + std::to_string(n) + " data rows, need at least 2");

    Dataset ds;
    ds.source_path = path;
    ds.outcome_index = target_col;
    ds.outcome_name = header[static_cast<std::size_t>(target_col)];
    ds.features.resize(n, cols - 1);
    ds.outcome.resize(n);
    for (int c = 0, f = 0; c < cols; ++c) {
        if (c == target_col) continue;
        ds.feature_names.push_back(header[static_cast<std::size_t>(c)]);
        for (int r = 0; r < n; ++r) ds.features(r, f) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        ++f;
    }
    for (int r = 0; r < n; ++r) ds.outcome(r) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(target_col)];

    return mode == Normalization::None ? ds : normalize(ds, mode);
}

Dataset normalize(const Dataset& ds, Normalization mode) {
    Dataset out = ds;
    out.normalization.mode = mode;
    out.normalization.offset.assign(static_cast<std::size_t>(ds.dims()), 0.0);
    out.normalization.scale.assign(static_cast<std::size_t>(ds.dims()), 1.0);
    if (mode == Normalization::None) return out;

    const int n = ds.n();
    for (int c = 0; c < ds.dims(); ++c) {
        const auto col = ds.features.col(c);
        double offset = 0.0;
        double scale = 0.0;
        if (mode == Normalization::ZScore) {
            const double mean = col.mean();
            // population standard deviation (divide by N)
            const double var = (col.array() - mean).square().sum() / n;
            offset = mean;
            scale = std::sqrt(var);
        } else {
            const double lo = col.minCoeff();
            const double hi = col.maxCoeff();
            offset = lo;
            scale = hi - lo;
        }
        out.normalization.offset[static_cast<std::size_t>(c)] = offset;
        out.normalization.scale[static_cast<std::size_t>(c)] = scale;
        if (scale == 0.0) {
            out.features.col(c).setZero();  // constant column
        } else {
            out.features.col(c) = (col.array() - offset) / scale;
        }
    }
    return out;
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write " + path);

    const int cols = ds.dims() + 1;
    const int target_col = ds.outcome_index >= 0 && ds.outcome_index < cols ? ds.outcome_index : cols - 1;

    const auto& fmt = format_double;

    for (int c = 0, f = 0; c < cols; ++c) {
        if (c > 0) out << ',';
        if (c == target_col) {
            out << ds.outcome_name;
        } else {
            out << ds.feature_names[static_cast<std::size_t>(f)];
            ++f;
        }
    }
    out << '\n';
    for (int r = 0; r < ds.n(); ++r) {
        for (int c = 0, f = 0; c < cols; ++c) {
            if (c > 0) out << ',';
            if (c == target_col) {
                out << fmt(ds.outcome(r));
            } else {
                out << fmt(ds.features(r, f));
                ++f;
            }
        }
        out << '\n';
    }
}

}  // namespace predclusters
