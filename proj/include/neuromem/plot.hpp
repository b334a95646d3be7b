#pragma once

#include <string>
#include <vector>

#include "neuromem/analysis.hpp"

namespace neuromem {

// Minimal standalone SVG charts, one chart per file.
void plot_series(const std::string& path, const std::vector<double>& x,
                 const std::vector<double>& y, const std::string& title,
                 const std::string& x_label, const std::string& y_label);

void plot_xy(const std::string& path, const std::vector<std::pair<double, double>>& pts,
             const std::string& title, const std::string& x_label,
             const std::string& y_label);

void plot_segments(const std::string& path, const std::vector<Segment>& segs,
                   const std::string& title);

}  // namespace neuromem
