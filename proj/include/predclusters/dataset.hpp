#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace predclusters {

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileNotFoundError : DatasetError {
    explicit FileNotFoundError(const std::string& path) : DatasetError("file not found: " + path) {}
};
struct ParseError : DatasetError {
    // 1-based line/column in the source file.
    int row;
    int col;
    ParseError(int row_, int col_, const std::string& what_)
        : DatasetError("parse error at row " + std::to_string(row_) + ", col " + std::to_string(col_) + ": " + what_),
          row(row_), col(col_) {}
};
struct TargetNotFoundError : DatasetError {
    explicit TargetNotFoundError(const std::string& what_) : DatasetError("target column not found: " + what_) {}
};
struct EmptyDatasetError : DatasetError {
    explicit EmptyDatasetError(const std::string& what_) : DatasetError("empty dataset: " + what_) {}
};

enum class Normalization { None, ZScore, MinMax };

std::string to_string(Normalization mode);
Normalization normalization_from_string(const std::string& s);

// Per-column transform actually applied, kept for reporting. A scale of 0
// marks a constant column (mapped to all zeros).
struct NormalizationInfo {
    Normalization mode = Normalization::None;
    std::vector<double> offset;
    std::vector<double> scale;
};

// Immutable after construction; safe to share read-only across threads.
struct Dataset {
    Eigen::MatrixXd features;  // N x d
    Eigen::VectorXd outcome;   // N
    std::vector<std::string> feature_names;
    std::string outcome_name;
    std::string source_path;
    int outcome_index = -1;  // column position of the outcome in the source file
    NormalizationInfo normalization;

    int n() const { return static_cast<int>(features.rows()); }
    int dims() const { return static_cast<int>(features.cols()); }
};

// Target column selector: by header name, by 0-based column index, or the
// last column (the layout of the usual UCI regression sets).
struct TargetSelector {
    enum class Kind { Name, Index, Last };
    Kind kind = Kind::Last;
    std::string name;
    int index = -1;

    static TargetSelector last() { return {}; }
    static TargetSelector by_name(std::string n) { return {Kind::Name, std::move(n), -1}; }
    static TargetSelector by_index(int i) { return {Kind::Index, {}, i}; }
    // "last", a non-negative integer, or a header name.
    static TargetSelector parse(const std::string& s);
};

Dataset load_csv(const std::string& path, const TargetSelector& target,
                 Normalization mode = Normalization::None);

// Returns a transformed copy; the outcome is never touched.
Dataset normalize(const Dataset& ds, Normalization mode);

// Writes the dataset back out with the outcome at its original column.
void save_csv(const Dataset& ds, const std::string& path);

}  // namespace predclusters
