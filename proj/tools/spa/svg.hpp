#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace spa::cli {

/// Fixed three-decimal coordinate, so output is stable across runs.
std::string px(double v);

std::string xml_escape(const std::string& s);

/// Linear map from data units to pixels.
struct Axis
{
  double lo;
  double hi;
  double px_lo;
  double px_hi;

  double operator()(double v) const;
};

/// Round tick positions covering [lo, hi], roughly `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

std::string tick_label(double v);

/// Minimal append-only SVG document.
class Svg
{
public:
  Svg(double width, double height);

  void open_group(const std::string& attributes);
  void close_group();

  void line(double x1, double y1, double x2, double y2, const std::string& style);
  void rect(double x, double y, double w, double h, const std::string& style);
  void circle(double cx, double cy, double r, const std::string& style);
  /// Polyline that breaks at NaN coordinates.
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& style);
  void polygon(const std::vector<std::pair<double, double>>& points, const std::string& style);
  void text(double x, double y, const std::string& content, const std::string& style = {});
  void raw(const std::string& element);

  std::string str() const;

private:
  double width_;
  double height_;
  std::ostringstream body_;
};

} // namespace spa::cli
