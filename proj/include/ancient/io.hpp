#pragma once

#include "ancient/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ancient {

/// First line of every CSV file written by the lab.
inline constexpr const char *kCsvVersion = "# ancientlab-csv 1";

/// 17 significant digits, '.' decimal, "nan"/"inf" for non-finite values.
std::string format_number(double v);

/// Header comment, column names, then one row per entry.
void write_table(std::ostream &os, const std::vector<std::string> &columns,
                 const std::vector<std::vector<double>> &rows);

struct CurveFrame {
  double time = 0.0;
  PolyCurve curve;
};

/// Columns t, x, y, closed; one row per vertex.
void write_curves(std::ostream &os, const std::vector<CurveFrame> &frames);
std::vector<CurveFrame> read_curves(std::istream &is);

struct Viewport {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;
};

struct SvgLayer {
  std::string name;
  std::string color = "#000000";
  double stroke = 1.0;
  bool dashed = false;
  std::vector<PolyCurve> curves;
};

/// Layers drawn in order with a legend. +y points up; coordinates carry
/// four digits after the decimal point so identical input gives identical
/// bytes.
std::string render_svg(const std::vector<SvgLayer> &layers, const Viewport &view, const std::string &title,
                       double width_px = 800.0);

} // namespace ancient
