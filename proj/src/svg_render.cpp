#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "dplot/error.hpp"
#include "dplot/render.hpp"
#include "dplot/report.hpp"

namespace dplot {
namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Scale {
  double d0, d1, r0, r1;
  double operator()(double v) const {
    if (d1 == d0) return 0.5 * (r0 + r1);
    return r0 + (v - d0) * (r1 - r0) / (d1 - d0);
  }
};

struct Range {
  double lo, hi;
};

Range padded(std::span<const double> values, double fraction) {
  const auto [a, b] = std::minmax_element(values.begin(), values.end());
  double lo = *a, hi = *b;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = (hi - lo) * fraction;
  return {lo - pad, hi + pad};
}

std::string tick(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.3g}", v);
}

class Svg {
 public:
  explicit Svg(const DplotConfig& config) : config_(config) {}

  void raw(std::string_view s) { out_.append(s.data(), s.data() + s.size()); }

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view extra = {}) {
    fmt::format_to(std::back_inserter(out_),
                   "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"{}/>\n",
                   x, y, std::max(w, 0.0), std::max(h, 0.0), fill, extra);
  }
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
            std::string_view extra = {}) {
    fmt::format_to(std::back_inserter(out_),
                   "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                   "stroke-width=\"{:.2f}\"{}/>\n",
                   x1, y1, x2, y2, stroke, width, extra);
  }
  void polyline(std::span<const double> xs, std::span<const double> ys, const Scale& sx,
                const Scale& sy, std::string_view stroke, double width,
                std::string_view extra = {}) {
    raw("<polyline fill=\"none\" points=\"");
    for (std::size_t k = 0; k < xs.size(); ++k) {
      fmt::format_to(std::back_inserter(out_), "{}{:.2f},{:.2f}", k ? " " : "", sx(xs[k]),
                     sy(ys[k]));
    }
    fmt::format_to(std::back_inserter(out_), "\" stroke=\"{}\" stroke-width=\"{:.2f}\"{}/>\n",
                   stroke, width, extra);
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "middle",
            double size = 0.0, std::string_view extra = {}) {
    fmt::format_to(std::back_inserter(out_),
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{:.1f}\" text-anchor=\"{}\"{}>{}</text>\n",
                   x, y, size > 0.0 ? size : config_.font_size, anchor, extra, escape(s));
  }
  void points(std::span<const double> xs, std::span<const double> ys, const Scale& sx,
              const Scale& sy, double radius) {
    fmt::format_to(std::back_inserter(out_), "<g fill=\"{}\" fill-opacity=\"{:.2f}\">\n",
                   config_.point_color, config_.point_opacity);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      fmt::format_to(std::back_inserter(out_), "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\"/>\n",
                     sx(xs[k]), sy(ys[k]), radius);
    }
    raw("</g>\n");
  }
  void open_panel(const std::string& id, double x, double y) {
    fmt::format_to(std::back_inserter(out_),
                   "<g id=\"panel-{}\" class=\"panel\" transform=\"translate({:.2f},{:.2f})\">\n", id,
                   x, y);
  }
  void close_panel() { raw("</g>\n"); }

  std::string str() const { return std::string(out_.data(), out_.size()); }

 private:
  const DplotConfig& config_;
  fmt::memory_buffer out_;
};

// Plot area inside a panel of side `size`.
struct Frame {
  double left, top, right, bottom;
  double width() const { return right - left; }
  double height() const { return bottom - top; }
};

Frame frame_for(const DplotConfig& c) {
  return {c.plot_margin, c.plot_margin * 0.75, c.panel_size - c.plot_margin * 0.4,
          c.panel_size - c.plot_margin};
}

void panel_chrome(Svg& svg, const DplotConfig& c, const Frame& f, const std::string& title) {
  svg.rect(0, 0, c.panel_size, c.panel_size, "#ffffff", " stroke=\"#dddddd\"");
  svg.rect(f.left, f.top, f.width(), f.height(), "none", " stroke=\"#333333\" stroke-width=\"0.8\"");
  svg.text(c.panel_size / 2, f.top - 6, title, "middle", c.font_size + 1, " font-weight=\"bold\"");
}

void x_ticks(Svg& svg, const DplotConfig& c, const Frame& f, const Scale& sx, double lo, double hi,
             const std::string& label) {
  svg.text(sx(lo), f.bottom + 12, tick(lo), "start");
  svg.text(sx(hi), f.bottom + 12, tick(hi), "end");
  if (!label.empty()) svg.text((f.left + f.right) / 2, f.bottom + 22, label);
  (void)c;
}

void y_ticks(Svg& svg, const DplotConfig& c, const Frame& f, const Scale& sy, double lo, double hi,
             const std::string& label) {
  svg.text(f.left - 3, sy(lo), tick(lo), "end");
  svg.text(f.left - 3, sy(hi) + c.font_size * 0.8, tick(hi), "end");
  if (!label.empty()) {
    const double x = f.left - 18;
    const double y = (f.top + f.bottom) / 2;
    svg.text(x, y, label, "middle", 0.0,
             fmt::format(" transform=\"rotate(-90 {:.2f} {:.2f})\"", x, y));
  }
}

void horizontal_box(Svg& svg, const BoxStats& b, const Scale& sx, double y_mid, double half,
                    const DplotConfig& c) {
  svg.line(sx(b.min_whisker), y_mid, sx(b.q1), y_mid, "#333333", 1.0);
  svg.line(sx(b.q3), y_mid, sx(b.max_whisker), y_mid, "#333333", 1.0);
  svg.line(sx(b.min_whisker), y_mid - half / 2, sx(b.min_whisker), y_mid + half / 2, "#333333", 1.0);
  svg.line(sx(b.max_whisker), y_mid - half / 2, sx(b.max_whisker), y_mid + half / 2, "#333333", 1.0);
  svg.rect(sx(b.q1), y_mid - half, sx(b.q3) - sx(b.q1), 2 * half, c.histogram_color,
           " stroke=\"#333333\"");
  svg.line(sx(b.median), y_mid - half, sx(b.median), y_mid + half, "#000000", 2.0);
  for (const double o : b.outliers) {
    fmt::memory_buffer buf;
    svg.raw(fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.00\" fill=\"none\" stroke=\"#333333\"/>\n",
                        sx(o), y_mid));
  }
}

void vertical_box(Svg& svg, const BoxStats& b, const Scale& sy, double x_mid, double half,
                  const DplotConfig& c) {
  svg.line(x_mid, sy(b.min_whisker), x_mid, sy(b.q1), "#333333", 1.0);
  svg.line(x_mid, sy(b.q3), x_mid, sy(b.max_whisker), "#333333", 1.0);
  svg.line(x_mid - half / 2, sy(b.min_whisker), x_mid + half / 2, sy(b.min_whisker), "#333333", 1.0);
  svg.line(x_mid - half / 2, sy(b.max_whisker), x_mid + half / 2, sy(b.max_whisker), "#333333", 1.0);
  svg.rect(x_mid - half, sy(b.q3), 2 * half, sy(b.q1) - sy(b.q3), c.histogram_color,
           " stroke=\"#333333\"");
  svg.line(x_mid - half, sy(b.median), x_mid + half, sy(b.median), "#000000", 2.0);
  for (const double o : b.outliers) {
    svg.raw(fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.00\" fill=\"none\" stroke=\"#333333\"/>\n",
                        x_mid, sy(o)));
  }
}

void diagonal_panel(Svg& svg, const DplotConfig& c, const Frame& f, const DiagonalCurves& d,
                    bool main, const std::vector<Crossing>& crossings) {
  const double top = main ? 1.0 : 0.5;
  const Scale sx{0.0, 1.0, f.left, f.right};
  const Scale sy{0.0, top, f.bottom, f.top};
  const auto& lower = main ? d.delta_lower : std::vector<double>(d.t.size(), 0.0);
  const auto& upper = main ? d.delta_upper : d.lambda_upper;
  svg.polyline(d.t, lower, sx, sy, c.bound_color, 1.0, " class=\"bound-lower\"");
  svg.polyline(d.t, upper, sx, sy, c.bound_color, 1.0, " class=\"bound-upper\"");
  svg.polyline(d.t, main ? d.delta_pi : d.lambda_pi, sx, sy, c.reference_color, 1.2,
               " class=\"independence\" stroke-dasharray=\"4 3\"");
  svg.polyline(d.t, main ? d.delta : d.lambda, sx, sy, c.curve_color, 1.6, " class=\"empirical\"");
  for (const auto& x : crossings) {
    if ((x.curve == DiagonalCurve::Delta) != main) continue;
    svg.line(sx(x.t), f.top, sx(x.t), f.bottom, "#888888", 0.8,
             " class=\"crossing\" stroke-dasharray=\"2 2\"");
  }
  x_ticks(svg, c, f, sx, 0.0, 1.0, "t");
  y_ticks(svg, c, f, sy, 0.0, top, "");
}

const std::array<PanelPlacement, 9> kLayout = {{
    {"y-boxplot", 0, 0},
    {"rank-plot", 0, 1},
    {"delta", 0, 2},
    {"y-histogram", 1, 0},
    {"scatter", 1, 1},
    {"lambda", 1, 2},
    {"bars", 2, 0},
    {"x-histogram", 2, 1},
    {"x-boxplot", 2, 2},
}};

}  // namespace

double marker_radius(std::size_t n) noexcept {
  return std::clamp(60.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1))), 1.2, 3.0);
}

const std::string& rho_bar_color(double rho_n, const DplotConfig& config) {
  return rho_n < 0.0 ? config.negative_bar_color : config.positive_bar_color;
}

const std::array<PanelPlacement, 9>& dplot_layout() { return kLayout; }

DplotDocument render_dplot(const AnalysisResult& a, const DplotConfig& c) {
  const auto& s = a.sample;
  const auto& p = a.pseudo;
  const double cell = c.panel_size + c.panel_gap;
  const double width = c.panel_gap + 3 * cell;
  const double height = c.title_height + c.panel_gap + 3 * cell;
  const Frame f = frame_for(c);
  const Range xr = padded(s.x(), 0.02);
  const Range yr = padded(s.y(), 0.02);
  const Scale sx{xr.lo, xr.hi, f.left, f.right};
  const Scale sy{yr.lo, yr.hi, f.bottom, f.top};
  const double radius = marker_radius(s.size());

  Svg svg(c);
  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw(fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"{}\">\n",
      width, height, width, height, escape(c.font_family)));
  svg.rect(0, 0, width, height, "#ffffff");
  const std::string title =
      c.title.empty() ? fmt::format("dplot: {} vs {} (n={})", s.y_label(), s.x_label(), s.size())
                      : c.title;
  svg.text(width / 2, c.title_height * 0.7, title, "middle", c.font_size + 4);

  auto origin = [&](const PanelPlacement& pl) {
    return std::pair{c.panel_gap + static_cast<double>(pl.col) * cell,
                     c.title_height + c.panel_gap + static_cast<double>(pl.row) * cell};
  };

  for (const auto& pl : kLayout) {
    const auto [ox, oy] = origin(pl);
    svg.open_panel(pl.id, ox, oy);
    if (pl.id == "scatter") {
      panel_chrome(svg, c, f, "Scatter plot");
      svg.points(s.x(), s.y(), sx, sy, radius);
      x_ticks(svg, c, f, sx, xr.lo, xr.hi, s.x_label());
      y_ticks(svg, c, f, sy, yr.lo, yr.hi, s.y_label());
    } else if (pl.id == "rank-plot") {
      panel_chrome(svg, c, f, "Rank plot");
      const Scale su{0.0, 1.0, f.left, f.right};
      const Scale sv{0.0, 1.0, f.bottom, f.top};
      svg.points(p.u, p.v, su, sv, radius);
      x_ticks(svg, c, f, su, 0.0, 1.0, "u");
      y_ticks(svg, c, f, sv, 0.0, 1.0, "v");
    } else if (pl.id == "delta") {
      panel_chrome(svg, c, f, "Main diagonal C(t,t)");
      diagonal_panel(svg, c, f, a.diagonals, true, a.crossings);
    } else if (pl.id == "lambda") {
      panel_chrome(svg, c, f, "Secondary diagonal C(t,1-t)");
      diagonal_panel(svg, c, f, a.diagonals, false, a.crossings);
    } else if (pl.id == "x-histogram" || pl.id == "y-histogram") {
      const bool is_x = pl.id == "x-histogram";
      panel_chrome(svg, c, f, is_x ? fmt::format("Histogram of {}", s.x_label())
                                   : fmt::format("Histogram of {}", s.y_label()));
      const auto h = histogram(is_x ? s.x() : s.y(), c.bins);
      const double peak = static_cast<double>(*std::max_element(h.counts.begin(), h.counts.end()));
      svg.raw(fmt::format("<g class=\"bins\" fill=\"{}\" stroke=\"#ffffff\" stroke-width=\"0.5\">\n",
                          c.histogram_color));
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double share = static_cast<double>(h.counts[b]) / peak;
        if (is_x) {
          const double x0 = sx(h.bin_edges[b]);
          const double x1 = sx(h.bin_edges[b + 1]);
          const double top = f.bottom - share * f.height();
          svg.raw(fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n",
                              x0, top, std::max(x1 - x0, 0.0), f.bottom - top));
        } else {
          const double y0 = sy(h.bin_edges[b + 1]);
          const double y1 = sy(h.bin_edges[b]);
          svg.raw(fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/>\n",
                              f.left, y0, share * f.width(), std::max(y1 - y0, 0.0)));
        }
      }
      svg.raw("</g>\n");
      if (is_x) {
        x_ticks(svg, c, f, sx, xr.lo, xr.hi, s.x_label());
      } else {
        y_ticks(svg, c, f, sy, yr.lo, yr.hi, s.y_label());
      }
    } else if (pl.id == "x-boxplot" || pl.id == "y-boxplot") {
      const bool is_x = pl.id == "x-boxplot";
      panel_chrome(svg, c, f, is_x ? fmt::format("Box plot of {}", s.x_label())
                                   : fmt::format("Box plot of {}", s.y_label()));
      if (s.size() >= 5) {
        const auto b = boxplot_stats(is_x ? s.x() : s.y());
        if (is_x) {
          horizontal_box(svg, b, sx, (f.top + f.bottom) / 2, f.height() / 6, c);
          x_ticks(svg, c, f, sx, xr.lo, xr.hi, s.x_label());
        } else {
          vertical_box(svg, b, sy, (f.left + f.right) / 2, f.width() / 6, c);
          y_ticks(svg, c, f, sy, yr.lo, yr.hi, s.y_label());
        }
      } else {
        svg.text(c.panel_size / 2, c.panel_size / 2, "n < 5");
      }
    } else if (pl.id == "bars") {
      panel_chrome(svg, c, f, "Concordance and dependence");
      const Scale sv{0.0, 1.0, f.bottom, f.top};
      const auto& m = a.summary.measures;
      const double bar_w = f.width() / 5;
      const double rho_x = f.left + f.width() * 0.2;
      const double sigma_x = f.left + f.width() * 0.6;
      const double rho_h = std::clamp(std::abs(m.rho_n), 0.0, 1.0);
      const double sigma_h = std::clamp(m.sigma_n, 0.0, 1.0);
      svg.rect(rho_x, sv(rho_h), bar_w, f.bottom - sv(rho_h), rho_bar_color(m.rho_n, c),
               " id=\"bar-rho\" stroke=\"#000000\" stroke-width=\"0.8\"");
      svg.rect(sigma_x, sv(sigma_h), bar_w, f.bottom - sv(sigma_h), c.positive_bar_color,
               " id=\"bar-sigma\" stroke=\"#000000\" stroke-width=\"0.8\"");
      svg.text(rho_x + bar_w / 2, sv(rho_h) - 3, fmt::format("{:.2f}", std::abs(m.rho_n)));
      svg.text(sigma_x + bar_w / 2, sv(sigma_h) - 3, fmt::format("{:.2f}", m.sigma_n));
      svg.text(rho_x + bar_w / 2, f.bottom + 12, "|rho_n|");
      svg.text(sigma_x + bar_w / 2, f.bottom + 12, "sigma_n");
      svg.text((f.left + f.right) / 2, f.bottom + 22,
               fmt::format("{} ({})", to_string(a.category.label), to_string(a.category.confidence)));
      y_ticks(svg, c, f, sv, 0.0, 1.0, "");
    }
    svg.close_panel();
  }
  svg.raw("</svg>\n");

  DplotDocument doc;
  doc.panels = kLayout;
  doc.svg = svg.str();
  doc.report_json = serialize(report_json(a));
  return doc;
}

std::string render_diagonal_zoom(const DiagonalCurves& d, const std::vector<Crossing>& crossings,
                                 const DplotConfig& c) {
  const double w = 2 * c.panel_size * 1.5 + 3 * c.panel_gap;
  const double h = c.panel_size * 1.5 + 2 * c.panel_gap + c.title_height;
  DplotConfig big = c;
  big.panel_size = c.panel_size * 1.5;
  const Frame f = frame_for(big);
  Svg svg(big);
  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw(fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"{}\">\n",
      w, h, w, h, escape(c.font_family)));
  svg.rect(0, 0, w, h, "#ffffff");
  svg.text(w / 2, c.title_height * 0.7, "Diagonal sections minus independence", "middle",
           c.font_size + 4);
  for (const bool main : {true, false}) {
    std::vector<double> diff(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      diff[k] = main ? d.delta[k] - d.delta_pi[k] : d.lambda[k] - d.lambda_pi[k];
    }
    double extent = 1e-3;
    for (const double v : diff) extent = std::max(extent, std::abs(v));
    extent *= 1.1;
    const Scale sx{0.0, 1.0, f.left, f.right};
    const Scale sy{-extent, extent, f.bottom, f.top};
    const double ox = c.panel_gap + (main ? 0.0 : big.panel_size + c.panel_gap);
    svg.open_panel(main ? "delta-zoom" : "lambda-zoom", ox, c.title_height + c.panel_gap);
    panel_chrome(svg, big, f, main ? "C(t,t) - t^2" : "C(t,1-t) - t(1-t)");
    svg.line(f.left, sy(0.0), f.right, sy(0.0), c.reference_color, 1.0, " stroke-dasharray=\"4 3\"");
    svg.polyline(d.t, diff, sx, sy, c.curve_color, 1.4, " class=\"empirical\"");
    for (const auto& x : crossings) {
      if ((x.curve == DiagonalCurve::Delta) != main) continue;
      svg.line(sx(x.t), f.top, sx(x.t), f.bottom, "#888888", 0.8, " stroke-dasharray=\"2 2\"");
      svg.text(sx(x.t), f.top + 12, fmt::format("{:.3f}", x.t));
    }
    x_ticks(svg, big, f, sx, 0.0, 1.0, "t");
    y_ticks(svg, big, f, sy, -extent, extent, "");
    svg.close_panel();
  }
  svg.raw("</svg>\n");
  return svg.str();
}

std::string render_scatter_pair(const BivariateSample& s, const PseudoObservations& p,
                                const std::string& title, const DplotConfig& c) {
  const double cell = c.panel_size + c.panel_gap;
  const double w = c.panel_gap + 2 * cell;
  const double h = c.title_height + c.panel_gap + cell;
  const Frame f = frame_for(c);
  const Range xr = padded(s.x(), 0.02);
  const Range yr = padded(s.y(), 0.02);
  const double radius = marker_radius(s.size());
  Svg svg(c);
  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw(fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"{}\">\n",
      w, h, w, h, escape(c.font_family)));
  svg.rect(0, 0, w, h, "#ffffff");
  svg.text(w / 2, c.title_height * 0.7, title, "middle", c.font_size + 3);

  svg.open_panel("scatter", c.panel_gap, c.title_height + c.panel_gap);
  panel_chrome(svg, c, f, "Scatter plot");
  const Scale sx{xr.lo, xr.hi, f.left, f.right};
  const Scale sy{yr.lo, yr.hi, f.bottom, f.top};
  svg.points(s.x(), s.y(), sx, sy, radius);
  x_ticks(svg, c, f, sx, xr.lo, xr.hi, s.x_label());
  y_ticks(svg, c, f, sy, yr.lo, yr.hi, s.y_label());
  svg.close_panel();

  svg.open_panel("rank-plot", c.panel_gap + cell, c.title_height + c.panel_gap);
  panel_chrome(svg, c, f, "Rank plot");
  const Scale su{0.0, 1.0, f.left, f.right};
  const Scale sv{0.0, 1.0, f.bottom, f.top};
  svg.points(p.u, p.v, su, sv, radius);
  x_ticks(svg, c, f, su, 0.0, 1.0, "u");
  y_ticks(svg, c, f, sv, 0.0, 1.0, "v");
  svg.close_panel();
  svg.raw("</svg>\n");
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

void write_report(const DplotDocument& doc, const std::filesystem::path& path) {
  write_text_file(path, doc.report_json + "\n");
}

}  // namespace dplot
