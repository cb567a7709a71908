#include "simaudit/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_point.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "simaudit/error.hpp"
#include "simaudit/report_io.hpp"

namespace simaudit {

namespace bg = boost::geometry;

namespace {

using BgPoint = bg::model::d2::point_xy<double>;

std::string fx(double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  std::string s(buf.data(), end);
  return s == "-0.00" ? "0.00" : s;
}

std::string xml_escape(const std::string& s) {
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

// "--" is not allowed inside XML comments.
std::string comment_safe(const std::string& s) {
  std::string out = s;
  for (std::size_t p = out.find("--"); p != std::string::npos; p = out.find("--", p)) out[p + 1] = '_';
  return out;
}

void svg_header(std::ostringstream& out, double width, double height,
                const std::vector<std::string>& comments) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& c : comments) out << "<!-- " << comment_safe(c) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fx(width) << "\" height=\""
      << fx(height) << "\" viewBox=\"0 0 " << fx(width) << ' ' << fx(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << fx(width) << "\" height=\"" << fx(height)
      << "\" fill=\"white\"/>\n";
}

struct Frame {
  double x0, y0, w, h;          // pixel box
  double xmin, xmax, ymin, ymax;  // data box
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

}  // namespace

std::string palette_color(std::size_t i) {
  // Golden-ratio hue walk in HSV, fixed saturation/value.
  const double hue = std::fmod(0.11 + 0.6180339887498949 * static_cast<double>(i), 1.0) * 6.0;
  const double s = 0.65, v = 0.85;
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(hue, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "#";
  for (double ch : {r + m, g + m, b + m}) {
    const int byte = static_cast<int>(std::lround(ch * 255.0));
    out += kHex[byte >> 4];
    out += kHex[byte & 0xF];
  }
  return out;
}

std::vector<Eigen::Vector2d> convex_hull(const std::vector<Eigen::Vector2d>& points) {
  std::vector<Eigen::Vector2d> unique;
  for (const auto& p : points)
    if (std::none_of(unique.begin(), unique.end(), [&](const Eigen::Vector2d& q) { return q == p; }))
      unique.push_back(p);
  if (unique.size() < 3) return unique;

  const auto& o = unique[0];
  const auto& a = unique[1];
  const bool collinear = std::all_of(unique.begin(), unique.end(), [&](const Eigen::Vector2d& p) {
    return (a.x() - o.x()) * (p.y() - o.y()) - (a.y() - o.y()) * (p.x() - o.x()) == 0.0;
  });
  if (collinear) {
    auto [lo, hi] = std::minmax_element(unique.begin(), unique.end(), [](const auto& u, const auto& v) {
      return u.x() < v.x() || (u.x() == v.x() && u.y() < v.y());
    });
    return {*lo, *hi};
  }

  bg::model::multi_point<BgPoint> mp;
  for (const auto& p : unique) mp.emplace_back(p.x(), p.y());
  // Counter-clockwise, open ring.
  bg::model::polygon<BgPoint, false, false> hull;
  bg::convex_hull(mp, hull);
  std::vector<Eigen::Vector2d> out;
  for (const auto& p : hull.outer()) out.emplace_back(p.x(), p.y());
  return out;
}

std::string scatter_svg(const MdsSolution& sol, const std::vector<Clustering>& colorings,
                        const ScatterOptions& options) {
  if (sol.dims != 2 || sol.coordinates.cols() != 2)
    fail(Errc::BadDimension, "scatter plots need a 2-D solution");
  for (const auto& c : colorings)
    if (!(c.vocab() == sol.vocab)) fail(Errc::VocabMismatch, "coloring covers a different vocabulary");

  const double plot = 600.0, margin = 30.0, legend_w = 280.0;
  std::size_t legend_rows = 0;
  for (const auto& c : colorings) legend_rows += c.size() + 1;
  const double height = std::max(plot + 2 * margin + (options.title.empty() ? 0.0 : 20.0),
                                 2 * margin + 16.0 * static_cast<double>(legend_rows));
  const double top = margin + (options.title.empty() ? 0.0 : 20.0);

  const auto& xy = sol.coordinates;
  const Eigen::Index n = xy.rows();
  double xmin = n ? xy.col(0).minCoeff() : -1, xmax = n ? xy.col(0).maxCoeff() : 1;
  double ymin = n ? xy.col(1).minCoeff() : -1, ymax = n ? xy.col(1).maxCoeff() : 1;
  // Equal aspect ratio so distances are not distorted.
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12}) * 1.05;
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  Frame f{margin, top, plot, plot, cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};

  std::ostringstream out;
  svg_header(out, margin * 2 + plot + legend_w, height, options.comments);
  if (!options.title.empty())
    out << "<text x=\"" << fx(margin) << "\" y=\"" << fx(margin) << "\" font-size=\"14\">"
        << xml_escape(options.title) << "</text>\n";

  std::vector<std::vector<std::size_t>> owner;
  for (const auto& c : colorings) owner.push_back(c.assignment());
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // Later colorings use palette slots after the earlier ones.
  std::vector<std::size_t> base(colorings.size(), 0);
  for (std::size_t g = 1; g < colorings.size(); ++g) base[g] = base[g - 1] + colorings[g - 1].size();

  if (options.hulls && !colorings.empty()) {
    const std::size_t g = colorings.size() - 1;
    out << "<g id=\"hulls\" fill-opacity=\"0.15\" stroke-width=\"1\">\n";
    for (std::size_t c = 0; c < colorings[g].size(); ++c) {
      std::vector<Eigen::Vector2d> pts;
      for (auto m : colorings[g].clusters()[c].members)
        pts.emplace_back(xy(static_cast<Eigen::Index>(m), 0), xy(static_cast<Eigen::Index>(m), 1));
      const auto hull = convex_hull(pts);
      if (hull.size() < 2) continue;
      const std::string color = palette_color(base[g] + c);
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < hull.size(); ++i)
        out << (i ? " " : "") << fx(f.px(hull[i].x())) << ',' << fx(f.py(hull[i].y()));
      out << "\" fill=\"" << color << "\" stroke=\"" << color << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g id=\"points\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
  const double radii[] = {6.0, 3.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double px = f.px(xy(i, 0)), py = f.py(xy(i, 1));
    out << "<g><title>" << xml_escape(sol.vocab[static_cast<std::size_t>(i)]) << "</title>";
    if (colorings.empty())
      out << "<circle cx=\"" << fx(px) << "\" cy=\"" << fx(py) << "\" r=\"4.00\" fill=\"#4477aa\"/>";
    for (std::size_t g = 0; g < colorings.size() && g < 2; ++g) {
      const auto c = owner[g][static_cast<std::size_t>(i)];
      const std::string color = c == kNone ? "#bbbbbb" : palette_color(base[g] + c);
      out << "<circle cx=\"" << fx(px) << "\" cy=\"" << fx(py) << "\" r=\"" << fx(radii[g])
          << "\" fill=\"" << color << "\"/>";
    }
    out << "</g>\n";
  }
  out << "</g>\n";

  out << "<g id=\"legend\" font-size=\"11\">\n";
  double ly = margin + 12.0;
  const double lx = margin * 2 + plot;
  for (std::size_t g = 0; g < colorings.size(); ++g) {
    out << "<text x=\"" << fx(lx) << "\" y=\"" << fx(ly) << "\" font-weight=\"bold\">"
        << xml_escape(colorings[g].source_tag()) << (g == 0 ? " (large dots)" : " (small dots)")
        << "</text>\n";
    ly += 16.0;
    for (std::size_t c = 0; c < colorings[g].size(); ++c) {
      out << "<circle cx=\"" << fx(lx + 6) << "\" cy=\"" << fx(ly - 4) << "\" r=\"5.00\" fill=\""
          << palette_color(base[g] + c) << "\"/><text x=\"" << fx(lx + 16) << "\" y=\"" << fx(ly)
          << "\">" << xml_escape(colorings[g].clusters()[c].name) << "</text>\n";
      ly += 16.0;
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

void emit_scatter_svg(const MdsSolution& solution, const std::vector<Clustering>& colorings,
                      const ScatterOptions& options, const std::filesystem::path& path) {
  write_file_atomic(path, scatter_svg(solution, colorings, options));
}

namespace {

std::vector<std::string> curve_names(const std::vector<ApkCurve>& curves, const CurvePlotOptions& o) {
  if (!o.names.empty()) {
    if (o.names.size() != curves.size()) fail(Errc::Mismatch, "one name per curve required");
    return o.names;
  }
  std::vector<std::string> names;
  for (const auto& c : curves) names.push_back(c.label_v.empty() ? "value" : c.label_v);
  return names;
}

std::vector<std::size_t> k_grid(const std::vector<ApkCurve>& curves, const BaselineBand* band) {
  std::vector<std::size_t> ks;
  if (band) ks = band->ks;
  for (const auto& c : curves) ks.insert(ks.end(), c.ks.begin(), c.ks.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace

std::string curve_csv(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                      const CurvePlotOptions& options) {
  const auto names = curve_names(curves, options);
  std::ostringstream out;
  for (const auto& c : options.comments) out << "# " << c << '\n';
  out << 'k';
  for (const auto& n : names) out << ',' << csv_field(n);
  if (band) out << ",baseline_mean,baseline_hi,baseline_lo";
  out << '\n';
  if (curves.empty()) return out.str();
  for (auto k : k_grid(curves, band)) {
    out << k;
    for (const auto& c : curves) {
      out << ',';
      auto it = std::find(c.ks.begin(), c.ks.end(), k);
      if (it != c.ks.end()) out << format_sig(c.values[static_cast<std::size_t>(it - c.ks.begin())], 9);
    }
    if (band) {
      auto it = std::find(band->ks.begin(), band->ks.end(), k);
      if (it != band->ks.end()) {
        const auto i = static_cast<std::size_t>(it - band->ks.begin());
        out << ',' << format_sig(band->mean[i], 9) << ',' << format_sig(band->ci_high[i], 9) << ','
            << format_sig(band->ci_low[i], 9);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string curve_svg(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                      const CurvePlotOptions& options) {
  const auto names = curve_names(curves, options);
  const auto ks = k_grid(curves, band);
  if (ks.empty()) fail(Errc::InvalidArgument, "nothing to plot");

  double ymax = 1.0, ymin = 0.0;
  for (const auto& c : curves)
    for (double v : c.values) {
      ymax = std::max(ymax, v);
      ymin = std::min(ymin, v);
    }
  ymax = std::ceil(ymax * 10.0) / 10.0;

  const double width = 820.0, height = 500.0;
  Frame f{60.0, 40.0, 520.0, 400.0, static_cast<double>(ks.front()),
          static_cast<double>(std::max(ks.back(), ks.front() + 1)), ymin, ymax};

  std::ostringstream out;
  svg_header(out, width, height, options.comments);
  if (!options.title.empty())
    out << "<text x=\"60.00\" y=\"24.00\" font-size=\"14\">" << xml_escape(options.title) << "</text>\n";

  // Axes with ticks.
  out << "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\" font-size=\"10\">\n";
  out << "<line x1=\"" << fx(f.x0) << "\" y1=\"" << fx(f.y0 + f.h) << "\" x2=\"" << fx(f.x0 + f.w)
      << "\" y2=\"" << fx(f.y0 + f.h) << "\"/>\n";
  out << "<line x1=\"" << fx(f.x0) << "\" y1=\"" << fx(f.y0) << "\" x2=\"" << fx(f.x0)
      << "\" y2=\"" << fx(f.y0 + f.h) << "\"/>\n";
  const std::size_t kstep = ks.back() > 20 ? 5 : 1;
  for (std::size_t k = ks.front(); k <= ks.back(); ++k) {
    if (k != ks.front() && k % kstep != 0) continue;
    out << "<text x=\"" << fx(f.px(static_cast<double>(k))) << "\" y=\"" << fx(f.y0 + f.h + 14)
        << "\" text-anchor=\"middle\" stroke=\"none\">" << k << "</text>\n";
  }
  for (int t = 0; t <= 10; ++t) {
    const double y = ymin + (ymax - ymin) * t / 10.0;
    out << "<text x=\"" << fx(f.x0 - 6) << "\" y=\"" << fx(f.py(y) + 3)
        << "\" text-anchor=\"end\" stroke=\"none\">" << format_sig(y, 3) << "</text>\n";
  }
  out << "<text x=\"" << fx(f.x0 + f.w / 2) << "\" y=\"" << fx(f.y0 + f.h + 32)
      << "\" text-anchor=\"middle\" stroke=\"none\">k</text>\n";
  out << "<text x=\"14.00\" y=\"" << fx(f.y0 + f.h / 2) << "\" stroke=\"none\" transform=\"rotate(-90 14.00 "
      << fx(f.y0 + f.h / 2) << ")\" text-anchor=\"middle\">" << xml_escape(options.y_label) << "</text>\n";
  out << "</g>\n";

  if (band) {
    out << "<g id=\"baseline\">\n<polygon fill=\"#f2d541\" fill-opacity=\"0.35\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < band->ks.size(); ++i)
      out << (i ? " " : "") << fx(f.px(static_cast<double>(band->ks[i]))) << ','
          << fx(f.py(band->ci_high[i]));
    for (std::size_t i = band->ks.size(); i-- > 0;)
      out << ' ' << fx(f.px(static_cast<double>(band->ks[i]))) << ',' << fx(f.py(band->ci_low[i]));
    out << "\"/>\n<polyline fill=\"none\" stroke=\"#d4a900\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\" points=\"";
    for (std::size_t i = 0; i < band->ks.size(); ++i)
      out << (i ? " " : "") << fx(f.px(static_cast<double>(band->ks[i]))) << ','
          << fx(f.py(band->mean[i]));
    out << "\"/>\n</g>\n";
  }

  out << "<g id=\"curves\" fill=\"none\" stroke-width=\"2\">\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    out << "<polyline stroke=\"" << palette_color(c) << "\" points=\"";
    for (std::size_t i = 0; i < curves[c].ks.size(); ++i)
      out << (i ? " " : "") << fx(f.px(static_cast<double>(curves[c].ks[i]))) << ','
          << fx(f.py(curves[c].values[i]));
    out << "\"/>\n";
  }
  out << "</g>\n<g id=\"legend\" font-size=\"11\">\n";
  double ly = f.y0 + 10;
  for (std::size_t c = 0; c < curves.size(); ++c, ly += 16) {
    out << "<line x1=\"600.00\" y1=\"" << fx(ly - 4) << "\" x2=\"620.00\" y2=\"" << fx(ly - 4)
        << "\" stroke=\"" << palette_color(c) << "\" stroke-width=\"2\"/><text x=\"626.00\" y=\""
        << fx(ly) << "\">" << xml_escape(names[c]) << "</text>\n";
  }
  if (band)
    out << "<rect x=\"600.00\" y=\"" << fx(ly - 9) << "\" width=\"20.00\" height=\"10.00\" fill=\"#f2d541\"/>"
        << "<text x=\"626.00\" y=\"" << fx(ly) << "\">random baseline (95% band)</text>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

bool emit_curve_svg(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                    const CurvePlotOptions& options, const std::filesystem::path& path) {
  auto csv_path = path;
  csv_path.replace_extension(".csv");
  write_file_atomic(csv_path, curve_csv(curves, band, options));
  if (curves.empty()) return false;
  write_file_atomic(path, curve_svg(curves, band, options));
  return true;
}

}  // namespace simaudit
