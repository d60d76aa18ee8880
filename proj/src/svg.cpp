#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "wqed/sweep.hpp"

namespace wqed {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_sweep_svg(const SweepSpec& spec, const std::vector<SweepRow>& rows, std::ostream& out,
                     std::string_view title) {
  const double plot_w = kWidth - 2.0 * kMargin;
  const double plot_h = kHeight - 2.0 * kMargin;
  auto x_of = [&](double v) { return kMargin + plot_w * (v - spec.lo) / (spec.hi - spec.lo); };
  auto y_of = [&](double v) { return kHeight - kMargin - plot_h * std::clamp(v, 0.0, 1.0); };

  // Error rows break the polyline into separate segments.
  auto series = [&](bool transmission, const char* colour) {
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\""
            << points << "\"/>\n";
        points.clear();
      }
    };
    char buf[64];
    for (const SweepRow& row : rows) {
      if (!row.result) {
        flush();
        continue;
      }
      const double v = transmission ? row.result->T : row.result->R;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x_of(row.axis_value), y_of(v));
      points += buf;
    }
    flush();
  };

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kMargin, kMargin, plot_w, plot_h);
  out << buf;
  out << "<text x=\"" << kWidth / 2 << "\" y=\"30\" text-anchor=\"middle\">" << escape(title)
      << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"start\">%.4g</text>"
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"end\">%.4g</text>\n",
                kMargin, kHeight - kMargin + 18, spec.lo, kWidth - kMargin, kHeight - kMargin + 18,
                spec.hi);
  out << buf;
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << axis_name(spec.axis) << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"end\">1</text>"
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"end\">0</text>\n",
                kMargin - 6, kMargin + 5, kMargin - 6, kHeight - kMargin + 5);
  out << buf;
  series(false, "blue");
  series(true, "red");
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" fill=\"blue\">R</text>"
                "<text x=\"%.0f\" y=\"%.0f\" fill=\"red\">T</text>\n",
                kWidth - kMargin - 40, kMargin - 8, kWidth - kMargin - 15, kMargin - 8);
  out << buf;
  out << "</svg>\n";
}

}  // namespace wqed
