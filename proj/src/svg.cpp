#include "rfpca/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rfpca/errors.hpp"

namespace rfpca {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

struct Range {
  double lo, hi;
  double map(double v, double pix_lo, double pix_hi) const {
    const double t = (v - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

Range padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo), 1.0) * 0.05;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points,
                        const std::string& x_label, const std::string& y_label,
                        const std::string& title) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!points.empty()) {
    xmin = xmax = points[0].x;
    ymin = ymax = points[0].y;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const Range rx = padded_range(xmin, xmax);
  const Range ry = padded_range(ymin, ymax);
  const double px0 = kMarginLeft, px1 = kWidth - kMarginRight;
  const double py0 = kHeight - kMarginBottom, py1 = kMarginTop;  // y grows upward

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px1 << "\" y2=\""
      << py0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << px0 << "\" y1=\"" << py0 << "\" x2=\"" << px0 << "\" y2=\""
      << py1 << "\" stroke=\"black\"/>\n";

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    const double tx = rx.map(fx, px0, px1);
    const double ty = ry.map(fy, py0, py1);
    svg << "<line x1=\"" << tx << "\" y1=\"" << py0 << "\" x2=\"" << tx << "\" y2=\""
        << py0 + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << tx << "\" y=\"" << py0 + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(fx) << "</text>\n"
        << "<line x1=\"" << px0 - 5 << "\" y1=\"" << ty << "\" x2=\"" << px0
        << "\" y2=\"" << ty << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px0 - 8 << "\" y=\"" << ty + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(fy) << "</text>\n";
  }

  svg << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (py0 + py1) / 2 << ")\">" << y_label << "</text>\n";

  for (const auto& p : points) {
    const double cx = rx.map(p.x, px0, px1);
    const double cy = ry.map(p.y, py0, py1);
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy
        << "\" r=\"4\" fill=\"steelblue\"/>\n";
    if (!p.label.empty()) {
      svg << "<text x=\"" << cx + 6 << "\" y=\"" << cy - 6 << "\" font-size=\"10\">"
          << p.label << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_scatter_svg(const std::string& path, const std::vector<ScatterPoint>& points,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title) {
  std::ofstream out(path);
  if (!out) throw validation_error("write_scatter_svg: cannot open '" + path + "'");
  out << scatter_svg(points, x_label, y_label, title);
}

}  // namespace rfpca
