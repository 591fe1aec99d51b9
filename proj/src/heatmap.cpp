// Copyright 2026 The NCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncp/harness.hpp"
#include "ncp/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ncp {

namespace {

constexpr int kCell = 40;
constexpr int kLeft = 70;
constexpr int kTop = 40;
constexpr int kBottom = 50;
constexpr int kRight = 20;

std::string gray(double rate) {
  const int v = static_cast<int>(std::lround(255.0 * std::clamp(rate, 0.0, 1.0)));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", v, v, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_heatmap(const ResultTable& table, const std::string& x_param,
                           const std::string& y_param, Method method) {
  if (table.grid_names.size() != 2) {
    throw std::invalid_argument("heatmap needs a two-dimensional grid, table has " +
                                std::to_string(table.grid_names.size()) + " axes");
  }
  const auto find_axis = [&](const std::string& name) -> std::size_t {
    auto it = std::find(table.grid_names.begin(), table.grid_names.end(), name);
    if (it == table.grid_names.end()) throw std::invalid_argument("table has no grid axis '" + name + "'");
    return static_cast<std::size_t>(it - table.grid_names.begin());
  };
  const std::size_t xa = find_axis(x_param);
  const std::size_t ya = find_axis(y_param);
  if (xa == ya) throw std::invalid_argument("x and y axes must differ");

  std::vector<double> xs, ys;
  std::map<std::pair<double, double>, double> rate;
  for (const auto& row : table.rows) {
    if (row.method != method) continue;
    const double x = row.grid_values[xa], y = row.grid_values[ya];
    xs.push_back(x);
    ys.push_back(y);
    rate[{x, y}] = row.success_rate;
  }
  if (rate.empty()) throw std::invalid_argument("table has no rows for method " + std::string(to_string(method)));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (rate.size() != xs.size() * ys.size()) throw std::invalid_argument("heatmap grid is incomplete");

  const int width = kLeft + kCell * static_cast<int>(xs.size()) + kRight;
  const int height = kTop + kCell * static_cast<int>(ys.size()) + kBottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#d0d8e0\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(std::string(to_string(method))) << " success rate</text>\n";

  // Rows: largest y at the top.
  for (std::size_t yi = 0; yi < ys.size(); ++yi) {
    const int py = kTop + kCell * static_cast<int>(ys.size() - 1 - yi);
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      const int px = kLeft + kCell * static_cast<int>(xi);
      const double r = rate.at({xs[xi], ys[yi]});
      svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << gray(r) << "\"><title>" << escape(x_param) << '=' << format_double(xs[xi]) << ' '
          << escape(y_param) << '=' << format_double(ys[yi]) << " rate=" << format_double(r)
          << "</title></rect>\n";
    }
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py + kCell / 2 + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(ys[yi])
        << "</text>\n";
  }
  const int axis_y = kTop + kCell * static_cast<int>(ys.size());
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    svg << "<text x=\"" << kLeft + kCell * static_cast<int>(xi) + kCell / 2 << "\" y=\"" << axis_y + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(xs[xi])
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + kCell * static_cast<int>(xs.size()) / 2 << "\" y=\"" << axis_y + 38
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_param)
      << "</text>\n";
  svg << "<text x=\"14\" y=\"" << kTop + kCell * static_cast<int>(ys.size()) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
      << kTop + kCell * static_cast<int>(ys.size()) / 2 << ")\">" << escape(y_param) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ncp
