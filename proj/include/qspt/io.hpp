#ifndef QSPT_IO_HPP
#define QSPT_IO_HPP

// CSV formatting, atomic file output and minimal static SVG line charts.

#include <qspt/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qspt::io {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size())
    {
        row_strings(header);
    }

    CsvWriter& row(std::initializer_list<double> values)
    {
        if (values.size() != columns_)
            throw Error(ErrorCode::IoError, "CSV row width mismatch");
        bool first = true;
        for (double v : values) {
            if (!first)
                out_ << ',';
            out_ << format_double(v);
            first = false;
        }
        out_ << '\n';
        return *this;
    }

    CsvWriter& row_strings(std::span<const std::string> cells)
    {
        if (cells.size() != columns_)
            throw Error(ErrorCode::IoError, "CSV row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        return *this;
    }

    std::string str() const { return out_.str(); }

private:
    std::size_t columns_;
    std::ostringstream out_;
};

/// Writes `content` to `path` through a sibling temporary and a rename, so a
/// reader never observes a partially written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// A static line chart with a frame, min/max tick labels and one polyline
/// per series.
inline std::string svg_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                                  std::span<const Series> series)
{
    constexpr double width = 720, height = 420;
    constexpr double left = 80, right = 20, top = 40, bottom = 60;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
        for (double v : s.y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!(x1 > x0)) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (!(y1 > y0)) {
        const double pad = y0 == 0.0 ? 0.5 : 0.05 * std::abs(y0);
        y0 -= pad;
        y1 += pad;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };
    static constexpr std::string_view colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
        << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"start\">" << num(x0)
        << "</text>\n";
    svg << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"end\">" << num(x1)
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << num(y0)
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << num(y1)
        << "</text>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + ph / 2 << ")\">" << y_label << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const auto color = colors[k % std::size(colors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            svg << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        svg << "\"/>\n";
        if (!s.name.empty())
            svg << "<text x=\"" << left + pw - 8 << "\" y=\"" << top + 16 + 14 * static_cast<double>(k)
                << "\" text-anchor=\"end\" fill=\"" << color << "\">" << s.name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace qspt::io

#endif
