#include <set>
#include <sstream>

#include "simaudit/clusterkit.hpp"
#include "simaudit/plot.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/retrieval.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::letters;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

MdsSolution triangle() {
  MdsSolution sol;
  sol.vocab = letters(3);
  sol.dims = 2;
  sol.coordinates.resize(3, 2);
  sol.coordinates << 0, 0, 1, 0, 0.5, 0.8;
  return sol;
}

ApkCurve curve(std::vector<double> v, std::string name) {
  ApkCurve c;
  for (std::size_t i = 0; i < v.size(); ++i) c.ks.push_back(i + 1);
  c.values = std::move(v);
  c.label_v = std::move(name);
  return c;
}

}  // namespace

TEST(ConvexHull, ContainsEveryPointAndTurnsLeft) {
  auto gen = seeded_engine(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 30; ++i) pts.emplace_back(standard_normal(gen), standard_normal(gen));
    const auto hull = convex_hull(pts);
    ASSERT_GE(hull.size(), 3u);
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& a = hull[i];
      const auto& b = hull[(i + 1) % hull.size()];
      EXPECT_GT(cross(a, b, hull[(i + 2) % hull.size()]), 0.0);
      for (const auto& p : pts) EXPECT_GE(cross(a, b, p), -1e-12);
    }
  }
}

TEST(ConvexHull, DegenerateInputs) {
  EXPECT_EQ(convex_hull({{1, 1}, {1, 1}}).size(), 1u);
  EXPECT_EQ(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}).size(), 2u);
  EXPECT_EQ(convex_hull({{0, 0}, {1, 0}, {0, 1}}).size(), 3u);
}

TEST(ScatterSvg, TriangleWithOneHull) {
  const auto sol = triangle();
  const Clustering one(sol.vocab, {{"all", {0, 1, 2}}}, "G");
  ScatterOptions opt;
  opt.hulls = true;
  const auto svg = scatter_svg(sol, {one}, opt);
  EXPECT_EQ(count(svg, "<title>"), 3u);
  EXPECT_EQ(count(svg, "<polygon"), 1u);
  EXPECT_EQ(count(svg, "r=\"6.00\""), 3u);
}

TEST(ScatterSvg, TwoColoringsLargeAndSmallDots) {
  const auto sol = triangle();
  const Clustering a(sol.vocab, {{"x", {0, 1}}, {"y", {2}}}, "A");
  const Clustering b(sol.vocab, {{"z", {0}}}, "B");
  const auto svg = scatter_svg(sol, {a, b});
  EXPECT_EQ(count(svg, "r=\"3.00\""), 3u);
  EXPECT_EQ(count(svg, "#bbbbbb"), 2u);  // labels B leaves uncovered
  EXPECT_NE(svg.find("A (large dots)"), std::string::npos);
}

TEST(ScatterSvg, DeterministicAndRejects3d) {
  const auto sol = triangle();
  ScatterOptions opt;
  opt.comments = {"run 1"};
  EXPECT_EQ(scatter_svg(sol, {}, opt), scatter_svg(sol, {}, opt));
  auto three = sol;
  three.dims = 3;
  three.coordinates = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_ERRC(scatter_svg(three, {}), Errc::BadDimension);
}

TEST(CurveCsv, ColumnsAndBand) {
  const auto band = random_baseline(10, 3, 50, 1);
  const auto csv = curve_csv({curve({1, 1, 1}, "self")}, &band);
  const auto lines = split_lines(csv);
  EXPECT_EQ(lines[0], "k,self,baseline_mean,baseline_hi,baseline_lo");
  EXPECT_EQ(lines[1].substr(0, 4), "1,1,");
  EXPECT_EQ(lines.size(), 4u);
}

TEST(CurveCsv, EmptyListIsHeaderOnlyAndNoSvg) {
  testing_support::TempDir dir;
  EXPECT_EQ(curve_csv({}, nullptr), "k\n");
  EXPECT_FALSE(emit_curve_svg({}, nullptr, {}, dir / "none.svg"));
  EXPECT_FALSE(std::filesystem::exists(dir / "none.svg"));
  EXPECT_TRUE(std::filesystem::exists(dir / "none.csv"));
}

TEST(CurveSvg, ConstantCurveIsHorizontal) {
  const auto svg = curve_svg({curve({1, 1, 1, 1}, "self")}, nullptr);
  const auto start = svg.find("<polyline stroke=");
  ASSERT_NE(start, std::string::npos);
  const auto pts_at = svg.find("points=\"", start) + 8;
  const auto pts = svg.substr(pts_at, svg.find('"', pts_at) - pts_at);
  std::set<std::string> ys;
  std::stringstream ss(pts);
  std::string pair;
  while (ss >> pair) ys.insert(pair.substr(pair.find(',') + 1));
  EXPECT_EQ(ys.size(), 1u);
}

TEST(Palette, DistinctAndStable) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 44; ++i) seen.insert(palette_color(i));
  EXPECT_EQ(seen.size(), 44u);
  EXPECT_EQ(palette_color(3), palette_color(3));
}
