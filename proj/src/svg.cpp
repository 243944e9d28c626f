#include "chemneuron/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemneuron/errors.hpp"

namespace chemneuron {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 48.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = std::size(kPalette);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range pad(Range r) {
  if (r.lo > r.hi) return {0.0, 1.0};
  if (r.lo == r.hi) {
    const double margin = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.1;
    return {r.lo - margin, r.hi + margin};
  }
  const double margin = (r.hi - r.lo) * 0.05;
  return {r.lo - margin, r.hi + margin};
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight, kWidth, kHeight);
  out += fmt::format(
      "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}"
      "</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));
  return out;
}

/// Tick positions at a 1/2/5 decade step covering [lo, hi].
std::vector<double> ticks(Range r) {
  const double span = r.hi - r.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> out;
  double t = std::ceil(r.lo / step) * step;
  for (; t <= r.hi + step * 1e-9; t += step) {
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return out;
}

std::string axes(Range xr, Range yr, const std::string& x_label,
                 const std::string& y_label, bool x_ticks) {
  auto sx = [&](double v) {
    return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight);
  };
  auto sy = [&](double v) {
    return kHeight - kBottom -
           (v - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom);
  };
  std::string out = fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\" stroke=\"black\"/>\n",
      kLeft, kHeight - kBottom, kWidth - kRight, kTop);
  if (x_ticks) {
    for (double t : ticks(xr)) {
      out += fmt::format(
          "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" "
          "stroke=\"black\"/>\n"
          "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4:.6g}</text>\n",
          sx(t), kHeight - kBottom, kHeight - kBottom + 5,
          kHeight - kBottom + 20, t);
    }
  }
  for (double t : ticks(yr)) {
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" "
        "stroke=\"black\"/>\n"
        "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5:.6g}</text>\n",
        kLeft - 5, sy(t), kLeft, kLeft - 8, sy(t) + 4, t);
  }
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
      kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 10, escape(x_label));
  out += fmt::format(
      "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {})\">{}</text>\n",
      kTop + (kHeight - kTop - kBottom) / 2,
      kTop + (kHeight - kTop - kBottom) / 2, escape(y_label));
  return out;
}

std::string legend(const std::vector<std::string>& labels) {
  std::string out;
  double y = kTop + 6;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) continue;
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n"
        "<text x=\"{}\" y=\"{}\">{}</text>\n",
        kWidth - kRight - 130, y, kPalette[i % kPaletteSize],
        kWidth - kRight - 114, y + 10, escape(labels[i]));
    y += 18;
  }
  return out;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<SvgSeries>& series) {
  Range xr{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() ||
        (!s.yerr.empty() && s.yerr.size() != s.y.size())) {
      throw ConfigError("svg series x/y/yerr lengths must match");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.lo = std::min(xr.lo, s.x[i]);
      xr.hi = std::max(xr.hi, s.x[i]);
      const double err = s.yerr.empty() ? 0.0 : s.yerr[i];
      yr.lo = std::min(yr.lo, s.y[i] - err);
      yr.hi = std::max(yr.hi, s.y[i] + err);
    }
  }
  xr = pad(xr);
  yr = pad(yr);
  auto sx = [&](double v) {
    return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight);
  };
  auto sy = [&](double v) {
    return kHeight - kBottom -
           (v - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom);
  };

  std::string out = header(title);
  out += axes(xr, yr, x_label, y_label, /*x_ticks=*/true);
  std::vector<std::string> labels;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    labels.push_back(s.label);
    const char* color = kPalette[si % kPaletteSize];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      points += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(s.y[i]));
    }
    out += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        points, color);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += fmt::format(
          "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n",
          sx(s.x[i]), sy(s.y[i]), color);
      if (!s.yerr.empty() && s.yerr[i] > 0.0) {
        out += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" "
            "y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
            sx(s.x[i]), sy(s.y[i] - s.yerr[i]), sy(s.y[i] + s.yerr[i]),
            color);
      }
    }
  }
  out += legend(labels);
  out += "</svg>\n";
  return out;
}

std::string bar_chart(const std::string& title, const std::string& y_label,
                      const std::vector<std::string>& bar_labels,
                      const std::vector<SvgBarGroup>& groups) {
  Range yr{0.0, -std::numeric_limits<double>::infinity()};
  std::size_t bars_per_group = bar_labels.size();
  for (const auto& g : groups) {
    if (g.values.size() != bars_per_group) {
      throw ConfigError("svg bar group size must match bar label count");
    }
    for (double v : g.values) {
      yr.hi = std::max(yr.hi, v);
      yr.lo = std::min(yr.lo, v);
    }
  }
  yr = pad(yr);
  yr.lo = std::min(yr.lo, 0.0);
  auto sy = [&](double v) {
    return kHeight - kBottom -
           (v - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom);
  };

  std::string out = header(title);
  out += axes({0.0, 1.0}, yr, "", y_label, /*x_ticks=*/false);
  const double plot_width = kWidth - kLeft - kRight;
  const double group_width = plot_width / std::max<std::size_t>(1, groups.size());
  const double bar_width =
      0.8 * group_width / std::max<std::size_t>(1, bars_per_group);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double x0 = kLeft + static_cast<double>(gi) * group_width +
                      0.1 * group_width;
    for (std::size_t bi = 0; bi < bars_per_group; ++bi) {
      const double v = groups[gi].values[bi];
      const double x = x0 + static_cast<double>(bi) * bar_width;
      const double y_top = sy(std::max(v, 0.0));
      const double y_bot = sy(std::min(v, 0.0));
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
          "height=\"{:.2f}\" fill=\"{}\"/>\n",
          x, y_top, bar_width, std::max(0.5, y_bot - y_top),
          kPalette[bi % kPaletteSize]);
    }
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        x0 + 0.4 * group_width, kHeight - kBottom + 20,
        escape(groups[gi].label));
  }
  out += legend(bar_labels);
  out += "</svg>\n";
  return out;
}

}  // namespace chemneuron
