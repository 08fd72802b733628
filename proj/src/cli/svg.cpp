#include "modent/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace modent::cli::svg {
namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
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

struct Scale {
  double lo, hi, px_lo, px_hi;
  bool log;
  double operator()(double v) const {
    const double a = log ? std::log10(v) : v;
    const double span = hi - lo;
    const double t = span > 0 ? (a - lo) / span : 0.5;
    return px_lo + t * (px_hi - px_lo);
  }
};

Scale make_scale(const std::vector<double>& values, bool log, double px_lo, double px_hi) {
  double lo = 0, hi = 1;
  if (!values.empty()) {
    std::vector<double> v;
    for (double x : values) {
      if (log && !(x > 0)) throw std::invalid_argument("log axis needs positive values");
      v.push_back(log ? std::log10(x) : x);
    }
    lo = *std::min_element(v.begin(), v.end());
    hi = *std::max_element(v.begin(), v.end());
  }
  if (hi - lo < 1e-300) {
    lo -= 0.5;
    hi += 0.5;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, px_lo, px_hi, log};
}

std::string header(const std::string& title) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  return out.str();
}

std::string axis_labels(const std::string& x_label, const std::string& y_label) {
  std::ostringstream out;
  out << "<text x=\"" << num(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
      << "<text x=\"20\" y=\"" << num(kTop + (kHeight - kTop - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << num(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << escape(y_label) << "</text>\n";
  return out.str();
}

std::string ticks(const Scale& s, bool horizontal) {
  std::ostringstream out;
  for (int k = 0; k <= 4; ++k) {
    const double a = s.lo + (s.hi - s.lo) * k / 4.0;
    const double value = s.log ? std::pow(10.0, a) : a;
    const double px = s(value);
    if (horizontal) {
      out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(px) << "\" y2=\""
          << num(kHeight - kBottom + 5) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(px) << "\" y=\"" << num(kHeight - kBottom + 18) << "\" text-anchor=\"middle\">"
          << label_num(value) << "</text>\n";
    } else {
      out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(px) << "\" x2=\"" << num(kLeft) << "\" y2=\""
          << num(px) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(px + 4) << "\" text-anchor=\"end\">"
          << label_num(value) << "</text>\n";
    }
  }
  return out.str();
}

std::string colour(double t) {
  static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                             {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(static_cast<int>(t), 3);
  const double f = t - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::vector<std::pair<double, double>>& points, const Axis& x,
                       const Axis& y) {
  std::vector<double> xs, ys;
  for (const auto& [a, b] : points) {
    xs.push_back(a);
    ys.push_back(b);
  }
  const Scale sx = make_scale(xs, x.log, kLeft, kWidth - kRight);
  const Scale sy = make_scale(ys, y.log, kHeight - kBottom, kTop);

  std::ostringstream out;
  out << header(title);
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
      << "\" height=\"" << num(kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << ticks(sx, true) << ticks(sy, false) << axis_labels(x.label, y.label);
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i)
    out << (i ? " " : "") << num(sx(xs[i])) << ',' << num(sy(ys[i]));
  out << "\"/>\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out << "<circle cx=\"" << num(sx(xs[i])) << "\" cy=\"" << num(sy(ys[i])) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::string& title, const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& values, const std::string& x_label, const std::string& y_label) {
  if (xs.empty() || ys.empty() || values.size() != xs.size() * ys.size())
    throw std::invalid_argument("heatmap: values must cover the full grid");
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const double plot_w = kWidth - kLeft - kRight - 70;
  const double plot_h = kHeight - kTop - kBottom;
  const double cw = plot_w / xs.size(), ch = plot_h / ys.size();

  std::ostringstream out;
  out << header(title);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = values[i * ys.size() + j];
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      out << "<rect x=\"" << num(kLeft + i * cw) << "\" y=\"" << num(kTop + plot_h - (j + 1) * ch) << "\" width=\""
          << num(cw + 0.01) << "\" height=\"" << num(ch + 0.01) << "\" fill=\"" << colour(t) << "\"/>\n";
    }
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
      << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double xv = xs.front() + f * (xs.back() - xs.front());
    const double yv = ys.front() + f * (ys.back() - ys.front());
    out << "<text x=\"" << num(kLeft + f * plot_w) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << label_num(xv) << "</text>\n"
        << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(kTop + plot_h - f * plot_h + 4)
        << "\" text-anchor=\"end\">" << label_num(yv) << "</text>\n";
  }
  out << axis_labels(x_label, y_label);
  // colour bar
  const double bx = kLeft + plot_w + 20;
  for (int k = 0; k < 50; ++k)
    out << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop + plot_h - (k + 1) * plot_h / 50) << "\" width=\"14\" height=\""
        << num(plot_h / 50 + 0.01) << "\" fill=\"" << colour((k + 0.5) / 50) << "\"/>\n";
  out << "<text x=\"" << num(bx + 18) << "\" y=\"" << num(kTop + 4) << "\">" << label_num(hi) << "</text>\n"
      << "<text x=\"" << num(bx + 18) << "\" y=\"" << num(kTop + plot_h + 4) << "\">" << label_num(lo) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace modent::cli::svg
