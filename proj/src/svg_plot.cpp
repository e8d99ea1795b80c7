#include "dtagraph/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dtagraph/error.hpp"

namespace dtagraph::plot {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 70;
constexpr std::size_t kMaxLabelledBars = 40;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(std::string_view s) {
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

struct Range {
  double lo, hi;
  double map(double v, double a, double b) const { return hi == lo ? (a + b) / 2 : a + (v - lo) / (hi - lo) * (b - a); }
};

Range padded(double lo, double hi) {
  if (lo == hi) return {lo - 1, hi + 1};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string frame(std::string_view title, std::string_view x_label, std::string_view y_label, Range y) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
       "</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) +
       "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    const double py = y.map(v, y0, y1);
    s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + tick(v) + "</text>\n";
  }
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
       escape(x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       num((y0 + y1) / 2) + ")\">" + escape(y_label) + "</text>\n";
  return s;
}

}  // namespace

std::string bar_chart_svg(std::string_view title, const std::vector<std::string>& labels,
                          const std::vector<double>& values, std::string_view x_label, std::string_view y_label) {
  if (labels.size() != values.size()) throw InvalidArgument("bar chart: labels and values differ in length");
  double hi = 0.0, lo = 0.0;
  for (double v : values) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  const Range y{lo, hi == lo ? lo + 1 : hi * 1.05};
  std::string s = frame(title, x_label, y_label, y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double slot = values.empty() ? 0 : (x1 - x0) / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double top = y.map(std::max(values[i], 0.0), y0, y1), base = y.map(std::min(values[i], 0.0), y0, y1);
    s += "<rect x=\"" + num(x0 + slot * i + slot * 0.1) + "\" y=\"" + num(top) + "\" width=\"" + num(slot * 0.8) +
         "\" height=\"" + num(base - top) + "\" fill=\"steelblue\"/>\n";
    if (values.size() <= kMaxLabelledBars) {
      const double cx = x0 + slot * (i + 0.5);
      s += "<text x=\"" + num(cx) + "\" y=\"" + num(y0 + 12) + "\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-45 " +
           num(cx) + " " + num(y0 + 12) + ")\">" + escape(labels[i]) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::string scatter_svg(std::string_view title, const std::vector<double>& xs, const std::vector<double>& ys,
                        std::string_view x_label, std::string_view y_label) {
  if (xs.size() != ys.size()) throw InvalidArgument("scatter: x and y differ in length");
  auto bounds = [](const std::vector<double>& v) {
    if (v.empty()) return Range{0, 1};
    auto [a, b] = std::minmax_element(v.begin(), v.end());
    return padded(*a, *b);
  };
  const Range xr = bounds(xs), yr = bounds(ys);
  std::string s = frame(title, x_label, y_label, yr);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  for (int i = 0; i <= 4; ++i) {
    const double v = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    s += "<text x=\"" + num(xr.map(v, x0, x1)) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" + tick(v) +
         "</text>\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += "<circle cx=\"" + num(xr.map(xs[i], x0, x1)) + "\" cy=\"" + num(yr.map(ys[i], y0, y1)) +
         "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace dtagraph::plot
