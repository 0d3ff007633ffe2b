#include "plots.hpp"

#include "spa/csv.hpp"
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spa::cli {

namespace {

const char* const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Frame
{
  double left, top, width, height;
  double right() const { return left + width; }
  double bottom() const { return top + height; }
};

std::string stroke(const std::string& colour, double width, const std::string& extra = {})
{
  return "stroke=\"" + colour + "\" stroke-width=\"" + px(width) + "\"" + (extra.empty() ? "" : " " + extra);
}

std::pair<double, double> padded_range(double lo, double hi)
{
  if (!std::isfinite(lo) || !std::isfinite(hi))
    return {0.0, 1.0};
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

void draw_axes(Svg& svg, const Frame& f, const Axis& x, const Axis& y, const std::string& title,
               const std::string& xlabel, const std::string& ylabel)
{
  svg.rect(f.left, f.top, f.width, f.height, "fill=\"none\" stroke=\"black\" stroke-width=\"1\"");
  for (double v : nice_ticks(x.lo, x.hi)) {
    svg.line(x(v), f.bottom(), x(v), f.bottom() + 4, stroke("black", 1));
    svg.text(x(v), f.bottom() + 16, tick_label(v), "text-anchor=\"middle\"");
  }
  for (double v : nice_ticks(y.lo, y.hi)) {
    svg.line(f.left - 4, y(v), f.left, y(v), stroke("black", 1));
    svg.text(f.left - 6, y(v) + 4, tick_label(v), "text-anchor=\"end\"");
  }
  svg.text(f.left + f.width / 2, f.top - 8, title, "text-anchor=\"middle\" font-size=\"13\"");
  svg.text(f.left + f.width / 2, f.bottom() + 34, xlabel, "text-anchor=\"middle\"");
  svg.text(f.left - 44, f.top + f.height / 2, ylabel,
           "text-anchor=\"middle\" transform=\"rotate(-90 " + px(f.left - 44) + " " + px(f.top + f.height / 2) + ")\"");
}

/// Group carrying the log-c axis mapping so readers can locate the mode line.
void open_log_c_panel(Svg& svg, const std::string& id, const Axis& x)
{
  svg.open_group("class=\"panel\" id=\"" + id + "\" data-log-c-min=\"" + csv::format_double(x.lo)
                 + "\" data-log-c-max=\"" + csv::format_double(x.hi) + "\" data-px-left=\"" + csv::format_double(x.px_lo)
                 + "\" data-px-right=\"" + csv::format_double(x.px_hi) + "\"");
}

void draw_mode_line(Svg& svg, const Frame& f, const Axis& x, double log_c_mode)
{
  const double xm = x(log_c_mode);
  svg.raw("<line class=\"c-mode\" data-log-c=\"" + csv::format_double(log_c_mode) + "\" x1=\"" + px(xm) + "\" y1=\""
          + px(f.top) + "\" x2=\"" + px(xm) + "\" y2=\"" + px(f.bottom())
          + "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>");
}

struct LogCGrid
{
  std::vector<double> log_c;
  Axis x{0, 1, 0, 1};
  double mode = 0.0;
};

LogCGrid log_c_grid(const SpaResult& r, const Frame& f)
{
  LogCGrid g;
  for (const auto& s : r.steps)
    g.log_c.push_back(std::log(s.c));
  const auto [lo, hi] = std::minmax_element(g.log_c.begin(), g.log_c.end());
  g.x = Axis{*lo, *hi, f.left, f.right()};
  if (*hi == *lo)
    g.x = Axis{*lo - 0.5, *hi + 0.5, f.left, f.right()};
  g.mode = std::log(r.c_posterior.mode_c());
  return g;
}

template <typename Get>
void draw_paths(Svg& svg, const SpaResult& r, const LogCGrid& g, const Axis& y,
                const std::vector<std::size_t>& highlight, Get get)
{
  const std::size_t p = r.names.size();
  auto path_for = [&](std::size_t j) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      const double v = get(k, j);
      pts.emplace_back(g.x(g.log_c[k]), std::isfinite(v) ? y(v) : kNaN);
    }
    return pts;
  };
  for (std::size_t j = 0; j < p; ++j)
    if (std::find(highlight.begin(), highlight.end(), j) == highlight.end())
      svg.polyline(path_for(j), stroke("#b0b0b0", 1) + " data-coefficient=\"" + xml_escape(r.names[j]) + "\"");
  for (std::size_t h = 0; h < highlight.size(); ++h) {
    const auto j = highlight[h];
    svg.polyline(path_for(j), stroke(kPalette[h % kPaletteSize], 2) + " data-coefficient=\"" + xml_escape(r.names[j]) + "\"");
  }
}

template <typename Get>
std::pair<double, double> value_range(const SpaResult& r, Get get)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    for (std::size_t j = 0; j < r.names.size(); ++j) {
      const double v = get(k, j);
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  return padded_range(lo, hi);
}

void legend(Svg& svg, double x, double y, const std::vector<std::pair<std::string, std::string>>& items)
{
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    svg.line(x, yy - 4, x + 18, yy - 4, stroke(items[i].second, 2));
    svg.text(x + 24, yy, items[i].first);
  }
}

} // namespace

std::string spa_plot(const SpaResult& r, const std::vector<std::size_t>& highlight, std::size_t delta_index)
{
  const double W = 1000, H = 850;
  Svg svg(W, H);
  const Frame frames[4] = {{70, 40, 400, 310}, {570, 40, 400, 310}, {70, 450, 400, 310}, {570, 450, 400, 310}};

  // (a) MAP path
  {
    const auto& f = frames[0];
    auto g = log_c_grid(r, f);
    auto get = [&](std::size_t k, std::size_t j) {
      return r.map ? r.map->beta(static_cast<Index>(k), static_cast<Index>(j)) : kNaN;
    };
    const auto [lo, hi] = value_range(r, get);
    const Axis y{lo, hi, f.bottom(), f.top};
    open_log_c_panel(svg, "panel-map", g.x);
    draw_axes(svg, f, g.x, y, "(a) MAP", "log c", "beta");
    if (r.map)
      draw_paths(svg, r, g, y, highlight, get);
    else
      svg.text(f.left + f.width / 2, f.top + f.height / 2, "MAP path not computed", "text-anchor=\"middle\"");
    draw_mode_line(svg, f, g.x, g.mode);
    svg.close_group();
  }
  // (b) absolute medians
  {
    const auto& f = frames[1];
    auto g = log_c_grid(r, f);
    auto get = [&](std::size_t k, std::size_t j) { return std::abs(r.steps[k].median[static_cast<Index>(j)]); };
    const auto [lo, hi] = value_range(r, get);
    const Axis y{std::min(lo, 0.0), hi, f.bottom(), f.top};
    open_log_c_panel(svg, "panel-median", g.x);
    draw_axes(svg, f, g.x, y, "(b) absolute median", "log c", "|median|");
    draw_paths(svg, r, g, y, highlight, get);
    draw_mode_line(svg, f, g.x, g.mode);
    svg.close_group();
  }
  // (c) posterior of c
  {
    const auto& f = frames[2];
    auto g = log_c_grid(r, f);
    const auto& mass = r.c_posterior.mass;
    const double top = *std::max_element(mass.begin(), mass.end());
    const Axis y{0.0, top > 0 ? top * 1.05 : 1.0, f.bottom(), f.top};
    open_log_c_panel(svg, "panel-c-posterior", g.x);
    draw_axes(svg, f, g.x, y, "(c) posterior of c", "log c", "mass");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < mass.size(); ++k)
      pts.emplace_back(g.x(std::log(r.c_posterior.c[k])), y(mass[k]));
    svg.polyline(pts, stroke("black", 2));
    draw_mode_line(svg, f, g.x, g.mode);
    svg.close_group();
  }
  // (d) concentration
  {
    const auto& f = frames[3];
    auto g = log_c_grid(r, f);
    auto get = [&](std::size_t k, std::size_t j) {
      return r.steps[k].concentration(static_cast<Index>(delta_index), static_cast<Index>(j));
    };
    const Axis y{0.0, 1.0, f.bottom(), f.top};
    open_log_c_panel(svg, "panel-concentration", g.x);
    draw_axes(svg, f, g.x, y, "(d) concentration V(" + tick_label(r.deltas.at(delta_index)) + ")", "log c", "V");
    draw_paths(svg, r, g, y, highlight, get);
    draw_mode_line(svg, f, g.x, g.mode);
    svg.close_group();
  }

  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t h = 0; h < highlight.size(); ++h)
    items.emplace_back(r.names[highlight[h]], kPalette[h % kPaletteSize]);
  double x = 80;
  for (const auto& item : items) {
    legend(svg, x, 830, {item});
    x += 30 + 7.0 * static_cast<double>(item.first.size());
  }
  return svg.str();
}

std::string band_plot(const SpaResult& r, std::size_t j)
{
  Svg svg(620, 440);
  const Frame f{70, 40, 420, 330};
  auto g = log_c_grid(r, f);
  const auto jj = static_cast<Index>(j);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const auto& s = r.steps[k];
    for (double v : {s.lower[jj], s.upper[jj], s.mean[jj], s.median[jj],
                     r.map ? r.map->beta(static_cast<Index>(k), jj) : kNaN})
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  }
  const auto [ylo, yhi] = padded_range(std::min(lo, 0.0), std::max(hi, 0.0));
  const Axis y{ylo, yhi, f.bottom(), f.top};

  open_log_c_panel(svg, "panel-bands", g.x);
  draw_axes(svg, f, g.x, y, r.names[j], "log c", "beta");
  svg.line(f.left, y(0.0), f.right(), y(0.0), stroke("#999999", 1, "stroke-dasharray=\"2,2\""));

  std::vector<std::pair<double, double>> band;
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    band.emplace_back(g.x(g.log_c[k]), y(r.steps[k].upper[jj]));
  for (std::size_t k = r.steps.size(); k-- > 0;)
    band.emplace_back(g.x(g.log_c[k]), y(r.steps[k].lower[jj]));
  svg.polygon(band, "class=\"interval\" fill=\"#2ca02c\" fill-opacity=\"0.3\" stroke=\"#2ca02c\" stroke-width=\"1\"");

  auto series = [&](auto get) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      const double v = get(k);
      pts.emplace_back(g.x(g.log_c[k]), std::isfinite(v) ? y(v) : kNaN);
    }
    return pts;
  };
  svg.polyline(series([&](std::size_t k) { return r.steps[k].median[jj]; }), "class=\"median\" " + stroke("black", 2));
  svg.polyline(series([&](std::size_t k) { return r.steps[k].mean[jj]; }), "class=\"mean\" " + stroke("#1f77b4", 2));
  if (r.map)
    svg.polyline(series([&](std::size_t k) { return r.map->beta(static_cast<Index>(k), jj); }),
                 "class=\"map\" " + stroke("#d62728", 2));
  draw_mode_line(svg, f, g.x, g.mode);
  svg.close_group();

  const std::string pct = tick_label(100.0 * r.level);
  legend(svg, 505, 60, {{pct + "% interval", "#2ca02c"}, {"median", "black"}, {"mean", "#1f77b4"}, {"MAP", "#d62728"}});
  return svg.str();
}

std::string density_plot(const SpaResult& r, std::size_t j)
{
  Svg svg(680, 440);
  const Frame f{70, 40, 420, 330};
  std::vector<const DensityCurve*> curves;
  for (const auto& c : r.densities)
    if (c.coefficient == j)
      curves.push_back(&c);

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, top = 0.0;
  for (const auto* c : curves) {
    xlo = std::min(xlo, c->x.front());
    xhi = std::max(xhi, c->x.back());
    top = std::max(top, *std::max_element(c->density.begin(), c->density.end()));
  }
  if (curves.empty()) {
    xlo = -1.0;
    xhi = 1.0;
  }
  const Axis x{xlo, xhi, f.left, f.right()};
  const Axis y{0.0, top > 0 ? top * 1.05 : 1.0, f.bottom(), f.top};
  draw_axes(svg, f, x, y, r.names[j] + " posterior density", "beta", "density");

  const std::size_t mode_t = r.c_posterior.t.at(r.c_posterior.mode);
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto* c = curves[i];
    const bool is_mode = c->t == mode_t;
    const double shade = curves.size() > 1 ? static_cast<double>(i) / static_cast<double>(curves.size() - 1) : 0.0;
    char colour[8];
    const int level = static_cast<int>(200.0 - 170.0 * shade);
    std::snprintf(colour, sizeof(colour), "#%02x%02x%02x", level / 2, level / 2, std::min(255, level + 40));
    const std::string col = is_mode ? "#d62728" : colour;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t g = 0; g < c->x.size(); ++g)
      pts.emplace_back(x(c->x[g]), y(c->density[g]));
    svg.polyline(pts, stroke(col, is_mode ? 2.5 : 1.2) + " data-t=\"" + std::to_string(c->t) + "\"");
    items.emplace_back("log c = " + tick_label(std::round(std::log(c->c) * 100.0) / 100.0) + (is_mode ? " (mode)" : ""), col);
  }
  legend(svg, 505, 60, items);
  return svg.str();
}

std::string marginal_plot(const SpaResult& r)
{
  const std::size_t p = r.names.size();
  const double W = std::max(900.0, 140.0 + 16.0 * static_cast<double>(p));
  Svg svg(W, 890);
  const Frame top{70, 40, W - 100, 310};
  const Frame bottom{70, 450, W - 100, 310};
  const Axis x{0.5, static_cast<double>(p) + 0.5, top.left, top.right()};

  double lo = 0.0, hi = 0.0;
  for (const auto& pc : r.pooled)
    for (double v : {pc.lower, pc.upper, pc.median, pc.map})
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  const auto [ylo, yhi] = padded_range(lo, hi);
  const Axis y{ylo, yhi, top.bottom(), top.top};
  const std::string pct = tick_label(100.0 * r.level);
  draw_axes(svg, top, x, y, "(a) marginal posterior: MAP (x), median (*), " + pct + "% interval", "coefficient", "beta");
  svg.line(top.left, y(0.0), top.right(), y(0.0), stroke("#999999", 1, "stroke-dasharray=\"2,2\""));
  for (std::size_t j = 0; j < p; ++j) {
    const auto& pc = r.pooled[j];
    const double xc = x(static_cast<double>(j + 1));
    svg.line(xc, y(pc.lower), xc, y(pc.upper), "class=\"interval\" " + stroke("#1f77b4", 2));
    svg.text(xc, y(pc.median) + 5, "*", "class=\"median\" text-anchor=\"middle\" font-size=\"16\"");
    if (std::isfinite(pc.map)) {
      const double ym = y(pc.map);
      svg.line(xc - 4, ym - 4, xc + 4, ym + 4, stroke("#d62728", 1.5));
      svg.line(xc - 4, ym + 4, xc + 4, ym - 4, stroke("#d62728", 1.5));
    }
  }

  const Axis yb{0.0, 1.0, bottom.bottom(), bottom.top};
  std::string deltas;
  for (double d : r.deltas)
    deltas += (deltas.empty() ? "" : ", ") + tick_label(d);
  const bool label_names = p <= 60;
  draw_axes(svg, bottom, x, yb, "(b) marginal concentration, delta = " + deltas, label_names ? "" : "coefficient", "V");
  const std::size_t D = r.deltas.size();
  const double slot = (x(2.0) - x(1.0)) * 0.8;
  const char* const bar_colours[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t d = 0; d < D; ++d) {
      const double w = slot / static_cast<double>(D);
      const double x0 = x(static_cast<double>(j + 1)) - slot / 2 + w * static_cast<double>(d);
      const double v = r.pooled[j].concentration[d];
      svg.rect(x0, yb(v), w, yb(0.0) - yb(v),
               std::string("fill=\"") + bar_colours[d % 4] + "\" data-delta=\"" + tick_label(r.deltas[d]) + "\"");
    }
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t d = 0; d < D; ++d)
    items.emplace_back("delta = " + tick_label(r.deltas[d]), bar_colours[d % 4]);
  double lx = bottom.left;
  for (const auto& item : items) {
    legend(svg, lx, 875, {item});
    lx += 110;
  }

  if (label_names)
    for (std::size_t j = 0; j < p; ++j) {
      const double xc = x(static_cast<double>(j + 1));
      svg.text(xc, bottom.bottom() + 48, r.names[j],
               "text-anchor=\"end\" font-size=\"9\" transform=\"rotate(-60 " + px(xc) + " " + px(bottom.bottom() + 48) + ")\"");
    }
  return svg.str();
}

} // namespace spa::cli
