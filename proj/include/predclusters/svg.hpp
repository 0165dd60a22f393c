#pragma once

#include <string>
#include <vector>

#include "predclusters/stats.hpp"

namespace predclusters {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained SVG line chart. Every series' group element carries
// data-name/data-x/data-y attributes holding the exact values, so plots can
// be checked against their source files byte for byte.
void write_line_chart(const std::string& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);

// Box plot with Tukey hinges (halves include the middle value when the
// count is odd) and whiskers at the extremes. Each box carries
// data-name/data-values ("min q1 median q3 max") attributes.
void write_box_plot(const std::string& path, const std::string& title, const std::string& y_label,
                    const std::vector<SampleGroup>& groups);

}  // namespace predclusters
