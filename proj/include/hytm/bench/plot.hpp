#pragma once

// SVG line charts of throughput against thread count: one panel per
// (workload, update rate), one line per algorithm, seeds averaged.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hytm/bench/csv.hpp"

namespace hytm::bench {

struct PlotOptions {
  std::string title = "BST microbenchmark";
  double panel_width = 320;
  double panel_height = 220;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
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

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return palette[i % std::size(palette)];
}

}  // namespace detail

/// Writes an SVG document. Failed rows are skipped; returns the number of points drawn.
inline std::size_t write_svg_plot(std::ostream& os, const std::vector<CsvRow>& rows, const PlotOptions& opt = {}) {
  using PanelKey = std::pair<std::string, unsigned>;
  std::map<PanelKey, std::map<std::string, std::map<std::size_t, std::pair<double, unsigned>>>> panels;
  std::set<std::string> workloads;
  std::set<unsigned> rates;
  std::vector<std::string> algs;
  std::set<std::string> mode_names;
  for (const auto& r : rows) {
    if (r.failed) continue;
    workloads.insert(r.workload);
    rates.insert(r.update_percent);
    mode_names.insert(r.mode);
    if (std::find(algs.begin(), algs.end(), r.alg) == algs.end()) algs.push_back(r.alg);
    auto& cell = panels[{r.workload, r.update_percent}][r.alg][r.threads];
    cell.first += r.throughput;
    cell.second += 1;
  }
  const std::string unit = mode_names.size() == 1 && *mode_names.begin() == "threaded" ? "ops/s" : "ops per 10^6 steps";

  const double pw = opt.panel_width, ph = opt.panel_height;
  const double ml = 70, mr = 20, mt = 30, mb = 45;
  const double top = 40;
  const auto cols = std::max<std::size_t>(rates.size(), 1);
  const auto rowsn = std::max<std::size_t>(workloads.size(), 1);
  const double cw = ml + pw + mr, chh = mt + ph + mb;
  const double width = cw * static_cast<double>(cols) + 160;
  const double height = top + chh * static_cast<double>(rowsn) + 10;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << detail::xml_escape(opt.title) << "</text>\n";

  std::size_t points = 0;
  std::size_t ri = 0;
  for (const auto& w : workloads) {
    std::size_t ci = 0;
    for (unsigned u : rates) {
      const double x0 = cw * static_cast<double>(ci) + ml;
      const double y0 = top + chh * static_cast<double>(ri) + mt;
      const auto it = panels.find({w, u});
      double xmin = 1e300, xmax = -1e300, ymax = 0;
      if (it != panels.end()) {
        for (const auto& [alg, series] : it->second) {
          for (const auto& [n, acc] : series) {
            xmin = std::min(xmin, static_cast<double>(n));
            xmax = std::max(xmax, static_cast<double>(n));
            ymax = std::max(ymax, acc.first / acc.second);
          }
        }
      }
      if (xmin > xmax) xmin = xmax = 1;
      if (xmax == xmin) xmax = xmin + 1;
      if (ymax <= 0) ymax = 1;
      ymax *= 1.1;
      auto px = [&](double n) { return x0 + (n - xmin) / (xmax - xmin) * pw; };
      auto py = [&](double v) { return y0 + ph - v / ymax * ph; };

      os << "<g>\n<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << pw << "\" height=\"" << ph
         << "\" fill=\"none\" stroke=\"#444\"/>\n";
      os << "<text x=\"" << x0 + pw / 2 << "\" y=\"" << y0 - 8 << "\" text-anchor=\"middle\" font-size=\"12\">"
         << detail::xml_escape(w) << ", " << u << "% updates</text>\n";
      for (int t = 0; t <= 4; ++t) {
        const double v = ymax * t / 4;
        os << "<line x1=\"" << x0 << "\" x2=\"" << x0 + pw << "\" y1=\"" << py(v) << "\" y2=\"" << py(v)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << x0 - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
           << format_double(std::round(v)) << "</text>\n";
      }
      std::set<std::size_t> xs;
      if (it != panels.end()) {
        for (const auto& [alg, series] : it->second) {
          for (const auto& [n, acc] : series) xs.insert(n);
        }
      }
      for (auto n : xs) {
        os << "<text x=\"" << px(static_cast<double>(n)) << "\" y=\"" << y0 + ph + 16
           << "\" text-anchor=\"middle\">" << n << "</text>\n";
      }
      os << "<text x=\"" << x0 + pw / 2 << "\" y=\"" << y0 + ph + 34 << "\" text-anchor=\"middle\">threads</text>\n";
      os << "<text transform=\"translate(" << x0 - 52 << ',' << y0 + ph / 2
         << ") rotate(-90)\" text-anchor=\"middle\">" << unit << "</text>\n";
      if (it != panels.end()) {
        for (std::size_t a = 0; a < algs.size(); ++a) {
          const auto s = it->second.find(algs[a]);
          if (s == it->second.end()) continue;
          os << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << detail::series_color(a) << "\" points=\"";
          for (const auto& [n, acc] : s->second) {
            os << px(static_cast<double>(n)) << ',' << py(acc.first / acc.second) << ' ';
          }
          os << "\"/>\n";
          for (const auto& [n, acc] : s->second) {
            os << "<circle r=\"3\" fill=\"" << detail::series_color(a) << "\" cx=\"" << px(static_cast<double>(n))
               << "\" cy=\"" << py(acc.first / acc.second) << "\"/>\n";
            ++points;
          }
        }
      }
      os << "</g>\n";
      ++ci;
    }
    ++ri;
  }
  const double lx = cw * static_cast<double>(cols) + 10;
  for (std::size_t a = 0; a < algs.size(); ++a) {
    const double ly = top + mt + 20.0 * static_cast<double>(a);
    os << "<line x1=\"" << lx << "\" x2=\"" << lx + 24 << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\""
       << detail::series_color(a) << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(algs[a]) << "</text>\n";
  }
  os << "</svg>\n";
  return points;
}

}  // namespace hytm::bench
