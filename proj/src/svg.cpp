#include "predclusters/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "predclusters/format.hpp"

namespace predclusters {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 870.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 480.0;

const char* kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad_if_flat() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
    }
    double fraction(double v) const { return (v - lo) / (hi - lo); }
};

std::string coord(double v) {
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << v;
    return s.str();
}

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"18\">" << escape_xml(title) << "</text>\n";
}

void draw_axes(std::ostringstream& out, const std::string& x_label, const std::string& y_label,
               const Range& xr, const Range& yr, bool numeric_x) {
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double f = i / 5.0;
        const double y = kBottom - f * (kBottom - kTop);
        const double yv = yr.lo + f * (yr.hi - yr.lo);
        out << "  <line x1=\"" << kLeft - 4 << "\" y1=\"" << coord(y) << "\" x2=\"" << kLeft << "\" y2=\""
            << coord(y) << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << kLeft - 8 << "\" y=\"" << coord(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(yv)
            << "</text>\n";
        if (numeric_x) {
            const double x = kLeft + f * (kRight - kLeft);
            const double xv = xr.lo + f * (xr.hi - xr.lo);
            out << "  <line x1=\"" << coord(x) << "\" y1=\"" << kBottom << "\" x2=\"" << coord(x)
                << "\" y2=\"" << kBottom + 4 << "\" stroke=\"black\"/>\n";
            out << "  <text x=\"" << coord(x) << "\" y=\"" << kBottom + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << format_double(xv) << "</text>\n";
        }
    }
    out << "  <text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(x_label)
        << "</text>\n";
    out << "  <text x=\"18\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (kTop + kBottom) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
}

std::string joined(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

double median_of(const std::vector<double>& sorted, std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    const std::size_t mid = begin + n / 2;
    if (n % 2 == 1) return sorted[mid];
    return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series) {
    if (series.empty()) throw std::invalid_argument("line chart needs at least one series");
    Range xr;
    Range yr;
    for (const Series& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty()) {
            throw std::invalid_argument("series '" + s.name + "' needs matching non-empty x/y");
        }
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.pad_if_flat();
    yr.pad_if_flat();

    std::ostringstream out;
    open_svg(out, title);
    draw_axes(out, x_label, y_label, xr, yr, true);

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % 8];
        out << "  <g class=\"series\" data-name=\"" << escape_xml(s.name) << "\" data-x=\"" << joined(s.x)
            << "\" data-y=\"" << joined(s.y) << "\">\n";
        out << "    <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << coord(kLeft + xr.fraction(s.x[i]) * (kRight - kLeft)) << ','
                << coord(kBottom - yr.fraction(s.y[i]) * (kBottom - kTop));
        }
        out << "\"/>\n";
        out << "  </g>\n";
        const double ly = kTop + 16.0 * static_cast<double>(si);
        out << "  <rect x=\"" << kRight - 150 << "\" y=\"" << coord(ly - 9)
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        out << "  <text x=\"" << kRight - 136 << "\" y=\"" << coord(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    write_file(path, out.str());
}

void write_box_plot(const std::string& path, const std::string& title, const std::string& y_label,
                    const std::vector<SampleGroup>& groups) {
    if (groups.empty()) throw std::invalid_argument("box plot needs at least one group");
    Range yr;
    std::vector<std::vector<double>> summaries;
    for (const SampleGroup& g : groups) {
        if (g.values.empty()) throw std::invalid_argument("group '" + g.label + "' is empty");
        std::vector<double> sorted = g.values;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        const double median = median_of(sorted, 0, n);
        const std::size_t half = n / 2;
        const double q1 = median_of(sorted, 0, n % 2 == 1 ? half + 1 : half);
        const double q3 = median_of(sorted, half, n);
        summaries.push_back({sorted.front(), q1, median, q3, sorted.back()});
        yr.include(sorted.front());
        yr.include(sorted.back());
    }
    yr.pad_if_flat();

    std::ostringstream out;
    open_svg(out, title);
    Range xr;
    xr.lo = 0.0;
    xr.hi = 1.0;
    draw_axes(out, "", y_label, xr, yr, false);

    const double slot = (kRight - kLeft) / static_cast<double>(groups.size());
    const double box_w = std::min(60.0, slot * 0.5);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& s = summaries[gi];
        const double cx = kLeft + slot * (static_cast<double>(gi) + 0.5);
        const auto ypix = [&](double v) { return kBottom - yr.fraction(v) * (kBottom - kTop); };
        const char* color = kPalette[gi % 8];
        out << "  <g class=\"box\" data-name=\"" << escape_xml(groups[gi].label) << "\" data-values=\""
            << joined(s) << "\">\n";
        out << "    <line x1=\"" << coord(cx) << "\" y1=\"" << coord(ypix(s[0])) << "\" x2=\"" << coord(cx)
            << "\" y2=\"" << coord(ypix(s[1])) << "\" stroke=\"black\"/>\n";
        out << "    <line x1=\"" << coord(cx) << "\" y1=\"" << coord(ypix(s[3])) << "\" x2=\"" << coord(cx)
            << "\" y2=\"" << coord(ypix(s[4])) << "\" stroke=\"black\"/>\n";
        for (int cap : {0, 4}) {
            out << "    <line x1=\"" << coord(cx - box_w / 4) << "\" y1=\"" << coord(ypix(s[static_cast<std::size_t>(cap)]))
                << "\" x2=\"" << coord(cx + box_w / 4) << "\" y2=\"" << coord(ypix(s[static_cast<std::size_t>(cap)]))
                << "\" stroke=\"black\"/>\n";
        }
        out << "    <rect x=\"" << coord(cx - box_w / 2) << "\" y=\"" << coord(ypix(s[3])) << "\" width=\""
            << coord(box_w) << "\" height=\"" << coord(ypix(s[1]) - ypix(s[3])) << "\" fill=\"" << color
            << "\" fill-opacity=\"0.35\" stroke=\"black\"/>\n";
        out << "    <line x1=\"" << coord(cx - box_w / 2) << "\" y1=\"" << coord(ypix(s[2])) << "\" x2=\""
            << coord(cx + box_w / 2) << "\" y2=\"" << coord(ypix(s[2]))
            << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        out << "  </g>\n";
        out << "  <text x=\"" << coord(cx) << "\" y=\"" << kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape_xml(groups[gi].label) << "</text>\n";
    }
    out << "</svg>\n";
    write_file(path, out.str());
}

}  // namespace predclusters
