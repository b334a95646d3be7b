#include "neuromem/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "neuromem/errors.hpp"

namespace neuromem {

namespace {

constexpr int kW = 960, kH = 520;
constexpr int kMargin = 64;

struct Range {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double map(double v, double px_lo, double px_hi) const {
        const double span = hi - lo;
        const double f = span > 0.0 ? (v - lo) / span : 0.5;
        return px_lo + f * (px_hi - px_lo);
    }
};

Range span_of(const std::vector<double>& v) {
    Range r;
    if (v.empty()) return r;
    r.lo = r.hi = v.front();
    for (double x : v) r.grow(x);
    if (r.lo == r.hi) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    return r;
}

void svg_header(std::ofstream& f, const std::string& title, const std::string& x_label,
                const std::string& y_label) {
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" << title << "</text>\n";
    f << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
      << x_label << "</text>\n";
    f << "<text x=\"16\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 16 " << kH / 2 << ")\">" << y_label << "</text>\n";
    f << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
}

}  // namespace

void plot_series(const std::string& path, const std::vector<double>& x,
                 const std::vector<double>& y, const std::string& title,
                 const std::string& x_label, const std::string& y_label) {
    if (x.size() != y.size()) throw ConfigError("plot_series: length mismatch");
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    svg_header(f, title, x_label, y_label);
    const Range rx = span_of(x), ry = span_of(y);
    f << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, x.size() / 4000);
    for (std::size_t i = 0; i < x.size(); i += stride) {
        const double px = rx.map(x[i], kMargin, kW - kMargin);
        const double py = ry.map(y[i], kH - kMargin, kMargin);
        f << px << ',' << py << ' ';
    }
    f << "\"/>\n</svg>\n";
}

void plot_xy(const std::string& path, const std::vector<std::pair<double, double>>& pts,
             const std::string& title, const std::string& x_label,
             const std::string& y_label) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    svg_header(f, title, x_label, y_label);
    Range rx, ry;
    if (!pts.empty()) {
        rx.lo = rx.hi = pts.front().first;
        ry.lo = ry.hi = pts.front().second;
        for (const auto& p : pts) {
            rx.grow(p.first);
            ry.grow(p.second);
        }
    }
    f << "<polyline fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"0.6\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 8000);
    for (std::size_t i = 0; i < pts.size(); i += stride) {
        const double px = rx.map(pts[i].first, kMargin, kW - kMargin);
        const double py = ry.map(pts[i].second, kH - kMargin, kMargin);
        f << px << ',' << py << ' ';
    }
    f << "\"/>\n</svg>\n";
}

void plot_segments(const std::string& path, const std::vector<Segment>& segs,
                   const std::string& title) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    svg_header(f, title, "t [us]", "mode");
    if (segs.empty()) {
        f << "</svg>\n";
        return;
    }
    Range rx;
    rx.lo = segs.front().t_start;
    rx.hi = segs.back().t_end;
    int max_label = 0;
    for (const auto& s : segs) max_label = std::max(max_label, s.mode_label);
    static const char* colors[] = {"#1565c0", "#c62828", "#2e7d32", "#f9a825",
                                   "#6a1b9a", "#00838f", "#4e342e", "#37474f"};
    for (const auto& s : segs) {
        const double x0 = rx.map(s.t_start, kMargin, kW - kMargin);
        const double x1 = rx.map(s.t_end, kMargin, kW - kMargin);
        const double band = double(kH - 2 * kMargin) / double(max_label + 1);
        const double y0 = kMargin + band * s.mode_label;
        f << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << (x1 - x0)
          << "\" height=\"" << band * 0.9 << "\" fill=\""
          << colors[s.mode_label % 8] << "\" fill-opacity=\"0.7\"/>\n";
    }
    f << "</svg>\n";
}

}  // namespace neuromem
