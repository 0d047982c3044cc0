#include "catline/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "catline/errors.hpp"

namespace catline {

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV '" + path + "'");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (t.columns.empty()) {
      t.columns = cells;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw ConfigError("CSV row width mismatch in '" + path + "'");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw ConfigError("CSV cell is not numeric in '" + path + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError("CSV has no column header: " + path);
  if (t.rows.empty()) throw ConfigError("CSV has no data rows: " + path);
  return t;
}

int column_index(const Table& t, const std::string& name) {
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("CSV is missing column '" + name + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void emit_plot(const std::string& csv_path, const std::string& svg_path) {
  const Table t = read_csv(csv_path);
  const int xcol = 0;
  const bool by_collision = t.columns[0] == "k";
  const std::string x_label =
      by_collision ? "collision index" : "time (1/Omega)";
  const int pe = column_index(t, "p_e");
  const int pg = column_index(t, "p_g");
  const int zc = column_index(t, "z");

  const double width = 840.0, height = 520.0;
  const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 60.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = t.rows.front()[xcol], xmax = xmin;
  double ymin = 0.0, ymax = 0.0;
  for (const auto& r : t.rows) {
    xmin = std::min(xmin, r[xcol]);
    xmax = std::max(xmax, r[xcol]);
    for (int c : {pe, pg, zc}) {
      ymin = std::min(ymin, r[c]);
      ymax = std::max(ymax, r[c]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) {
    return mt + (ymax - y) / (ymax - ymin) * ph;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes and ticks
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\"/>\n</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double xv = xmin + (xmax - xmin) * i / n_ticks;
    const double yv = ymin + (ymax - ymin) * i / n_ticks;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">population / magnetization</text>\n";
  svg << "</g>\n";

  const struct {
    int col;
    const char* color;
    const char* label;
  } series[] = {{pe, "#1f77b4", "P_e"}, {pg, "#d62728", "P_g"},
                {zc, "#2ca02c", "Z"}};
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : t.rows) {
      svg << fmt(px(r[xcol])) << ',' << fmt(py(r[s.col])) << ' ';
    }
    svg << "\"/>\n";
  }

  // legend
  svg << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  for (int i = 0; i < 3; ++i) {
    const double ly = mt + 16 + 20 * i;
    svg << "<line x1=\"" << ml + pw + 14 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 40 << "\" y2=\"" << ly << "\" stroke=\""
        << series[i].color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw + 46 << "\" y=\"" << ly + 4 << "\">"
        << series[i].label << "</text>\n";
  }
  svg << "</g>\n</svg>\n";

  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write SVG '" + svg_path + "'");
  out << svg.str();
}

}  // namespace catline
