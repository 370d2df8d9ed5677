#include "sphlab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace sphlab {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const { return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b); }
};

Axis padded(double lo, double hi) {
  if (hi - lo < 1e-9) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string plot_svg(const ReportDocument& doc) {
  const auto& samples = doc.grid.samples;
  if (samples.size() < 2) throw std::invalid_argument("plot_svg: at least 2 samples required");

  const NamedFit* fit = doc.fits.empty() ? nullptr : &doc.fits.front();
  const Abscissa axis = fit ? parse_abscissa(fit->abscissa) : Abscissa::min_degree;
  const auto pairs = abscissa_ratio_pairs(doc.grid, axis);

  // log10 coordinates; nonpositive values are clamped so every sample gets a mark
  const double floor_ratio = 1e-300;
  std::vector<double> lx, ly, lb;
  const double c_emp = empirical_constant(doc.grid);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    lx.push_back(std::log10(std::max(pairs[i].first, 1.0)));
    ly.push_back(std::log10(std::max(pairs[i].second, floor_ratio)));
    lb.push_back(std::log10(std::max(c_emp * samples[i].bound, floor_ratio)));
  }
  const Axis ax = padded(*std::min_element(lx.begin(), lx.end()), *std::max_element(lx.begin(), lx.end()));
  double ymin = std::min(*std::min_element(ly.begin(), ly.end()), *std::min_element(lb.begin(), lb.end()));
  double ymax = std::max(*std::max_element(ly.begin(), ly.end()), *std::max_element(lb.begin(), lb.end()));
  const Axis ay = padded(ymin, ymax);
  auto px = [&](double v) { return ax.map(v, kLeft, kWidth - kRight); };
  auto py = [&](double v) { return ay.map(v, kHeight - kBottom, kTop); };

  std::string out;
  out += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
             kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt("<text x=\"%.1f\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">%s (d = %d)</text>\n", kLeft,
             escape(doc.config.study).c_str(), doc.config.dimension);
  out += fmt("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
             kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  out += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">log10 %s</text>\n",
             0.5 * (kLeft + kWidth - kRight), kHeight - 12, abscissa_name(axis).c_str());
  out += fmt("<text x=\"16\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 16 %.1f)\">log10 ratio</text>\n",
             0.5 * (kTop + kHeight - kBottom), 0.5 * (kTop + kHeight - kBottom));
  for (const auto& [v, anchor, x, y] : {std::tuple{ax.lo, "start", px(ax.lo), kHeight - kBottom + 16},
                                        {ax.hi, "end", px(ax.hi), kHeight - kBottom + 16}}) {
    out += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"%s\">%.3f</text>\n", x,
               y, anchor, v);
  }
  out += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">%.3f</text>\n",
             kLeft - 4, py(ay.lo), ay.lo);
  out += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">%.3f</text>\n",
             kLeft - 4, py(ay.hi) + 8, ay.hi);

  // bound reference through the samples in abscissa order
  std::vector<std::size_t> order(lx.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lx[a] < lx[b]; });
  out += "<polyline class=\"bound\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\" points=\"";
  for (std::size_t k = 0; k < order.size(); ++k) {
    out += fmt("%s%.2f,%.2f", k ? " " : "", px(lx[order[k]]), py(lb[order[k]]));
  }
  out += "\"/>\n";
  out += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">C_emp * bound, C_emp = %.4g</text>\n",
             kLeft + 8, kTop + 30, c_emp);

  if (fit) {
    const double x0 = ax.lo, x1 = ax.hi;
    const double ln10 = std::log(10.0);
    // fit is in natural logs: ln y = a ln x + b, so log10 y = a log10 x + b / ln 10
    auto line = [&](double x) { return fit->fit.exponent * x + fit->fit.intercept / ln10; };
    out += fmt("<line class=\"fit\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"crimson\"/>\n", px(x0),
               py(line(x0)), px(x1), py(line(x1)));
    out += fmt("<text class=\"slope\" x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" fill=\"crimson\">"
               "slope %.4f (%s)</text>\n",
               kLeft + 8, kTop + 16, fit->fit.exponent, escape(fit->label).c_str());
  }
  for (std::size_t i = 0; i < lx.size(); ++i) {
    out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"steelblue\"/>\n", px(lx[i]), py(ly[i]));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace sphlab
