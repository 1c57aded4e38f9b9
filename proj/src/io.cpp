#include "ancient/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace ancient {

namespace {

std::string fixed4(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 4);
  std::string s(buf, res.ptr);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

double parse_number(const std::string &s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw LabError("csv: bad number '" + s + "'");
  return v;
}

} // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_table(std::ostream &os, const std::vector<std::string> &columns,
                 const std::vector<std::vector<double>> &rows) {
  os << kCsvVersion << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto &row : rows) {
    if (row.size() != columns.size()) throw LabError("csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_curves(std::ostream &os, const std::vector<CurveFrame> &frames) {
  std::vector<std::vector<double>> rows;
  for (const auto &f : frames)
    for (Vec2 p : f.curve.points) rows.push_back({f.time, p.x, p.y, f.curve.closed ? 1.0 : 0.0});
  write_table(os, {"t", "x", "y", "closed"}, rows);
}

std::vector<CurveFrame> read_curves(std::istream &is) {
  std::vector<CurveFrame> frames;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "t,x,y,closed") throw LabError("csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 4) throw LabError("csv: expected 4 columns in '" + line + "'");
    const double t = parse_number(cells[0]);
    const bool closed = parse_number(cells[3]) != 0.0;
    if (frames.empty() || frames.back().time != t || frames.back().curve.closed != closed)
      frames.push_back({t, PolyCurve{{}, closed}});
    frames.back().curve.points.push_back({parse_number(cells[1]), parse_number(cells[2])});
  }
  if (!header) throw LabError("csv: missing header");
  return frames;
}

std::string render_svg(const std::vector<SvgLayer> &layers, const Viewport &view, const std::string &title,
                       double width_px) {
  const double dx = view.xmax - view.xmin;
  const double dy = view.ymax - view.ymin;
  if (!(dx > 0 && dy > 0)) throw LabError("svg: empty viewport");
  const double w = width_px;
  const double h = std::round(w * dy / dx);
  const double legend = 18.0 * static_cast<double>(layers.size()) + 30.0;
  auto px = [&](double x) { return (x - view.xmin) / dx * w; };
  auto py = [&](double y) { return (view.ymax - y) / dy * h + legend; };
  // Segments entirely outside a box twice the viewport are dropped.
  auto outside = [&](Vec2 p) {
    return p.x < view.xmin - dx || p.x > view.xmax + dx || p.y < view.ymin - dy || p.y > view.ymax + dy;
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed4(w) << "\" height=\"" << fixed4(h + legend)
     << "\" viewBox=\"0 0 " << fixed4(w) << " " << fixed4(h + legend) << "\">\n";
  os << "<title>" << title << "</title>\n";
  os << "<defs><clipPath id=\"plot\"><rect x=\"0\" y=\"" << fixed4(legend) << "\" width=\"" << fixed4(w)
     << "\" height=\"" << fixed4(h) << "\"/></clipPath></defs>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fixed4(w) << "\" height=\"" << fixed4(h + legend)
     << "\" fill=\"#ffffff\"/>\n";
  os << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const double y = 36.0 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"8\" y1=\"" << fixed4(y - 4) << "\" x2=\"38\" y2=\"" << fixed4(y - 4) << "\" stroke=\""
       << layers[i].color << "\" stroke-width=\"2\"" << (layers[i].dashed ? " stroke-dasharray=\"6 3\"" : "")
       << "/>\n";
    os << "<text x=\"46\" y=\"" << fixed4(y) << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << layers[i].name << "</text>\n";
  }
  os << "<g clip-path=\"url(#plot)\" fill=\"none\">\n";
  for (const auto &layer : layers) {
    os << "<g id=\"" << layer.name << "\" stroke=\"" << layer.color << "\" stroke-width=\"" << fixed4(layer.stroke)
       << "\"" << (layer.dashed ? " stroke-dasharray=\"6 3\"" : "") << ">\n";
    for (const auto &c : layer.curves) {
      std::vector<std::vector<Vec2>> runs(1);
      const std::size_t n = c.size();
      const std::size_t m = c.closed ? n + 1 : n;
      for (std::size_t k = 0; k < m; ++k) {
        const Vec2 p = c.points[k % n];
        const bool keep = !outside(p) || (k > 0 && !outside(c.points[(k - 1) % n])) ||
                          (k + 1 < m && !outside(c.points[(k + 1) % n]));
        if (keep) runs.back().push_back(p);
        else if (!runs.back().empty()) runs.emplace_back();
      }
      for (const auto &run : runs) {
        if (run.size() < 2) continue;
        os << "<polyline points=\"";
        for (std::size_t k = 0; k < run.size(); ++k)
          os << (k ? " " : "") << fixed4(px(run[k].x)) << "," << fixed4(py(run[k].y));
        os << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

} // namespace ancient
