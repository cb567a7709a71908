#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "simaudit/clusterkit.hpp"
#include "simaudit/mds.hpp"
#include "simaudit/retrieval.hpp"

namespace simaudit {

/// Convex hull vertices in counter-clockwise order, without the closing
/// repeat. One or two distinct input points come back unchanged (deduplicated).
std::vector<Eigen::Vector2d> convex_hull(const std::vector<Eigen::Vector2d>& points);

struct ScatterOptions {
  bool hulls = false;
  std::string title;
  std::vector<std::string> comments;  // provenance lines embedded in the file
};

/// 2-D layout: one dot per label. The first clustering colors a large dot,
/// the second (if any) a small dot drawn on top. Hulls are drawn for the
/// clusters of the last clustering. Throws BadDimension unless dims == 2.
std::string scatter_svg(const MdsSolution& solution, const std::vector<Clustering>& colorings,
                        const ScatterOptions& options = {});
void emit_scatter_svg(const MdsSolution& solution, const std::vector<Clustering>& colorings,
                      const ScatterOptions& options, const std::filesystem::path& path);

struct CurvePlotOptions {
  std::string title;
  std::string y_label = "aP@k";
  std::vector<std::string> comments;
  // Column headers; defaults to each curve's label_v.
  std::vector<std::string> names;
};

/// k, one column per curve, then baseline_mean, baseline_hi, baseline_lo
/// when a band is given. Cells for ks a curve lacks stay empty.
std::string curve_csv(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                      const CurvePlotOptions& options = {});
std::string curve_svg(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                      const CurvePlotOptions& options = {});

/// Always writes `path` with extension .csv; writes the SVG at `path` only
/// when there is at least one curve. Returns whether the SVG was written.
bool emit_curve_svg(const std::vector<ApkCurve>& curves, const BaselineBand* band,
                    const CurvePlotOptions& options, const std::filesystem::path& path);

/// Stable color for palette slot i, as #rrggbb.
std::string palette_color(std::size_t i);

}  // namespace simaudit
