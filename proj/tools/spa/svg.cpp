#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace spa::cli {

std::string px(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string xml_escape(const std::string& s)
{
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += ch;
    }
  }
  return out;
}

double Axis::operator()(double v) const
{
  if (hi == lo)
    return 0.5 * (px_lo + px_hi);
  return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
}

std::vector<double> nice_ticks(double lo, double hi, int target)
{
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    return {lo};
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return ticks;
}

std::string tick_label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

Svg::Svg(double width, double height) : width_(width), height_(height) {}

void Svg::open_group(const std::string& attributes)
{
  body_ << "<g " << attributes << ">\n";
}

void Svg::close_group()
{
  body_ << "</g>\n";
}

void Svg::line(double x1, double y1, double x2, double y2, const std::string& style)
{
  body_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2) << "\" y2=\"" << px(y2)
        << "\" " << style << "/>\n";
}

void Svg::rect(double x, double y, double w, double h, const std::string& style)
{
  body_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w) << "\" height=\"" << px(h)
        << "\" " << style << "/>\n";
}

void Svg::circle(double cx, double cy, double r, const std::string& style)
{
  body_ << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"" << px(r) << "\" " << style << "/>\n";
}

void Svg::polyline(const std::vector<std::pair<double, double>>& points, const std::string& style)
{
  std::string coords;
  std::size_t count = 0;
  auto flush = [&] {
    if (count >= 2)
      body_ << "<polyline fill=\"none\" points=\"" << coords << "\" " << style << "/>\n";
    coords.clear();
    count = 0;
  };
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      flush();
      continue;
    }
    if (count)
      coords += ' ';
    coords += px(x) + "," + px(y);
    ++count;
  }
  flush();
}

void Svg::polygon(const std::vector<std::pair<double, double>>& points, const std::string& style)
{
  std::string coords;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y))
      return;
    if (!coords.empty())
      coords += ' ';
    coords += px(x) + "," + px(y);
  }
  if (!coords.empty())
    body_ << "<polygon points=\"" << coords << "\" " << style << "/>\n";
}

void Svg::text(double x, double y, const std::string& content, const std::string& style)
{
  body_ << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\"" << (style.empty() ? "" : " ") << style << ">"
        << xml_escape(content) << "</text>\n";
}

void Svg::raw(const std::string& element)
{
  body_ << element << '\n';
}

std::string Svg::str() const
{
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width_) << "\" height=\"" << px(height_)
     << "\" viewBox=\"0 0 " << px(width_) << ' ' << px(height_) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << px(width_) << "\" height=\"" << px(height_) << "\" fill=\"white\"/>\n"
     << body_.str() << "</svg>\n";
  return os.str();
}

} // namespace spa::cli
