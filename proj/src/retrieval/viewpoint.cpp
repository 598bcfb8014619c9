// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/retrieval/viewpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gsmem {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Candidate {
  Camera cam;
  int azimuth, elevation;
};

// Azimuth-major, elevations innermost; this order is the tie-break order.
std::vector<Candidate> orbit_candidates(const RegionOfInterest& roi, const TsdfGrid& tsdf,
                                        const RetrievalConfig& cfg) {
  const Vec3 center = roi.bbox.centroid();
  const double radius =
      std::max(cfg.orbit_radius_factor * roi.bbox.diagonal(), cfg.orbit_radius_floor);
  const Intrinsics k =
      Intrinsics::from_fov(cfg.view_width, cfg.view_height, cfg.view_fov_deg * kDeg);
  const int azimuth_count = std::max(1, (int)std::lround(360.0 / cfg.azimuth_step_deg));
  std::vector<Candidate> out;
  out.reserve(azimuth_count * cfg.elevations_deg.size());
  for (int ia = 0; ia < azimuth_count; ++ia) {
    const double az = ia * cfg.azimuth_step_deg * kDeg;
    for (int ie = 0; ie < (int)cfg.elevations_deg.size(); ++ie) {
      const double el = cfg.elevations_deg[ie] * kDeg;
      const Vec3 pos = center + Vec3{radius * std::cos(el) * std::cos(az),
                                     radius * std::cos(el) * std::sin(az),
                                     radius * std::sin(el)};
      if (tsdf.occupied_at(pos)) continue;
      Candidate c;
      c.cam.k = k;
      c.cam.pose = Pose::look_at(pos, center);
      c.azimuth = ia;
      c.elevation = ie;
      out.push_back(c);
    }
  }
  return out;
}

// Monotone-chain convex hull; returns a counter-clockwise polygon. Collinear
// inputs collapse to fewer than 3 points and thus zero area.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (const Vec2& p : pts) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

// Clips a convex polygon against one half-plane keep(p) with boundary points
// computed by lerp; classic polygon-rectangle clipping building block.
template <class Keep, class Cross>
std::vector<Vec2> clip_edge(const std::vector<Vec2>& poly, Keep keep, Cross intersect) {
  std::vector<Vec2> out;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const bool ka = keep(a), kb = keep(b);
    if (ka) out.push_back(a);
    if (ka != kb) out.push_back(intersect(a, b));
  }
  return out;
}

std::vector<Vec2> clip_to_rect(std::vector<Vec2> poly, double x0, double y0, double x1,
                               double y1) {
  const auto at_x = [](const Vec2& a, const Vec2& b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Vec2{x, a.y + t * (b.y - a.y)};
  };
  const auto at_y = [](const Vec2& a, const Vec2& b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Vec2{a.x + t * (b.x - a.x), y};
  };
  poly = clip_edge(
      poly, [&](const Vec2& p) { return p.x >= x0; },
      [&](const Vec2& a, const Vec2& b) { return at_x(a, b, x0); });
  poly = clip_edge(
      poly, [&](const Vec2& p) { return p.x <= x1; },
      [&](const Vec2& a, const Vec2& b) { return at_x(a, b, x1); });
  poly = clip_edge(
      poly, [&](const Vec2& p) { return p.y >= y0; },
      [&](const Vec2& a, const Vec2& b) { return at_y(a, b, y0); });
  poly = clip_edge(
      poly, [&](const Vec2& p) { return p.y <= y1; },
      [&](const Vec2& a, const Vec2& b) { return at_y(a, b, y1); });
  return poly;
}

double polygon_area(const std::vector<Vec2>& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * std::abs(twice);
}

std::array<Vec3, 8> box_vertices(const Aabb& b) {
  return {Vec3{b.min.x, b.min.y, b.min.z}, Vec3{b.max.x, b.min.y, b.min.z},
          Vec3{b.min.x, b.max.y, b.min.z}, Vec3{b.max.x, b.max.y, b.min.z},
          Vec3{b.min.x, b.min.y, b.max.z}, Vec3{b.max.x, b.min.y, b.max.z},
          Vec3{b.min.x, b.max.y, b.max.z}, Vec3{b.max.x, b.max.y, b.max.z}};
}

// Pixel coordinates of the vertices in front of the near plane.
std::vector<Vec2> projected_vertices(const Camera& cam, const Aabb& box,
                                     double near_plane) {
  std::vector<Vec2> out;
  for (const Vec3& v : box_vertices(box)) {
    const Vec3 pc = cam.pose.to_camera(v);
    if (pc.z <= near_plane) continue;
    out.push_back({cam.k.fx * pc.x / pc.z + cam.k.cx, cam.k.fy * pc.y / pc.z + cam.k.cy});
  }
  return out;
}

}  // namespace

std::array<Vec3, 14> box_probe_points(const Aabb& box) {
  std::array<Vec3, 14> pts;
  const std::array<Vec3, 8> v = box_vertices(box);
  std::copy(v.begin(), v.end(), pts.begin());
  const Vec3 c = box.centroid();
  pts[8] = {box.min.x, c.y, c.z};
  pts[9] = {box.max.x, c.y, c.z};
  pts[10] = {c.x, box.min.y, c.z};
  pts[11] = {c.x, box.max.y, c.z};
  pts[12] = {c.x, c.y, box.min.z};
  pts[13] = {c.x, c.y, box.max.z};
  return pts;
}

double area_score(double area_fraction, const RetrievalConfig& cfg) {
  const double d = area_fraction - cfg.area_target;
  return std::exp(-d * d / (2.0 * cfg.area_sigma * cfg.area_sigma));
}

double projected_area_fraction(const Camera& cam, const Aabb& box, double near_plane) {
  const std::vector<Vec2> pts = projected_vertices(cam, box, near_plane);
  if (pts.size() < 3) return 0.0;
  std::vector<Vec2> hull = convex_hull(pts);
  if (hull.size() < 3) return 0.0;
  // The image rectangle spans half a pixel beyond the outermost sample points,
  // so its total area is exactly width x height.
  hull = clip_to_rect(std::move(hull), -0.5, -0.5, cam.k.width - 0.5, cam.k.height - 0.5);
  return polygon_area(hull) / ((double)cam.k.width * cam.k.height);
}

std::vector<Camera> sample_candidate_poses(const RegionOfInterest& roi,
                                           const TsdfGrid& tsdf,
                                           const RetrievalConfig& cfg) {
  std::vector<Camera> out;
  for (const Candidate& c : orbit_candidates(roi, tsdf, cfg)) out.push_back(c.cam);
  return out;
}

Phase1Score score_phase1(const Camera& pose, const RegionOfInterest& roi,
                         const TsdfGrid& tsdf, const RetrievalConfig& cfg) {
  Phase1Score s;
  const Vec3 eye = pose.pose.position();
  int visible = 0;
  for (const Vec3& p : box_probe_points(roi.bbox))
    if (tsdf.ray_visible(eye, p)) ++visible;
  s.s_vis = visible / 14.0;
  s.s_area = area_score(projected_area_fraction(pose, roi.bbox), cfg);
  return s;
}

double score_phase2(const Camera& pose, const RegionOfInterest& roi,
                    const GaussianField& field, const RasterSettings& rs) {
  const std::vector<Vec2> pts = projected_vertices(pose, roi.bbox, rs.near_plane);
  if (pts.empty()) return 0.0;
  double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
  for (const Vec2& p : pts) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const int x0 = std::max(0, (int)std::ceil(minx));
  const int x1 = std::min(pose.k.width - 1, (int)std::floor(maxx));
  const int y0 = std::max(0, (int)std::ceil(miny));
  const int y1 = std::min(pose.k.height - 1, (int)std::floor(maxy));
  if (x0 > x1 || y0 > y1) return 0.0;

  const RenderOutput out = rasterize(field, pose, rs);
  double sum = 0.0;
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) sum += out.alpha.data[(size_t)iy * pose.k.width + ix];
  return sum / ((double)(x1 - x0 + 1) * (y1 - y0 + 1));
}

std::optional<ViewpointScore> select_optimal_view(const RegionOfInterest& roi,
                                                  const GaussianField& field,
                                                  const TsdfGrid& tsdf,
                                                  const RetrievalConfig& cfg,
                                                  const RasterSettings& rs) {
  const std::vector<Candidate> cands = orbit_candidates(roi, tsdf, cfg);
  if (cands.empty()) return std::nullopt;

  struct Ranked {
    Phase1Score p1;
    size_t idx;  // generation order: azimuth index major, elevation minor
  };
  std::vector<Ranked> ranked(cands.size());
  for (size_t i = 0; i < cands.size(); ++i)
    ranked[i] = {score_phase1(cands[i].cam, roi, tsdf, cfg), i};
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    const double sa = a.p1.s_vis + a.p1.s_area, sb = b.p1.s_vis + b.p1.s_area;
    if (sa != sb) return sa > sb;
    return a.idx < b.idx;
  });
  const size_t keep = std::min<size_t>(10, ranked.size());

  std::optional<ViewpointScore> best;
  size_t best_idx = 0;
  for (size_t k = 0; k < keep; ++k) {
    const Ranked& r = ranked[k];
    const double opa = score_phase2(cands[r.idx].cam, roi, field, rs);
    const double total = r.p1.s_vis + r.p1.s_area + opa;
    if (!best || total > best->s_final ||
        (total == best->s_final && r.idx < best_idx)) {
      best = ViewpointScore{cands[r.idx].cam, r.p1.s_vis, r.p1.s_area, opa, total};
      best_idx = r.idx;
    }
  }
  return best;
}

std::vector<RenderOutput> render_roi_views(const RegionOfInterest& roi,
                                           const GaussianField& field,
                                           const std::optional<Camera>& optimal_view,
                                           const RasterSettings& rs) {
  std::vector<RenderOutput> out;
  if (optimal_view) out.push_back(rasterize(field, *optimal_view, rs));
  if (roi.provenance == RoiProvenance::object && roi.best_pose)
    out.push_back(rasterize(field, *roi.best_pose, rs));
  return out;
}

}  // namespace gsmem
