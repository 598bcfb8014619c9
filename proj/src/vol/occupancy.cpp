// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/vol/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace gsmem {

OccupancyGrid occupancy_from_tsdf(const TsdfGrid& tsdf, double cell_size, double z_lo,
                                  double z_hi) {
  const int w = (int)std::ceil(tsdf.nx() * tsdf.voxel_size() / cell_size - 1e-9);
  const int h = (int)std::ceil(tsdf.ny() * tsdf.voxel_size() / cell_size - 1e-9);
  OccupancyGrid occ({tsdf.origin().x, tsdf.origin().y}, cell_size, w, h);
  std::vector<uint8_t> observed((size_t)w * h, 0);
  std::vector<uint8_t> negative((size_t)w * h, 0);

  for (int iz = 0; iz < tsdf.nz(); ++iz) {
    const double z = tsdf.origin().z + (iz + 0.5) * tsdf.voxel_size();
    if (z < z_lo || z > z_hi) continue;
    for (int iy = 0; iy < tsdf.ny(); ++iy) {
      for (int ix = 0; ix < tsdf.nx(); ++ix) {
        const size_t vi = tsdf.index(ix, iy, iz);
        if (!(tsdf.weight(vi) > 0.0)) continue;
        const Vec3 c = tsdf.voxel_center(ix, iy, iz);
        int cx, cy;
        if (!occ.cell_of({c.x, c.y}, &cx, &cy)) continue;
        const size_t ci = (size_t)cy * w + cx;
        observed[ci] = 1;
        if (tsdf.value(vi) < 0.0) negative[ci] = 1;
      }
    }
  }
  for (size_t i = 0; i < occ.cells.size(); ++i) {
    if (negative[i])
      occ.cells[i] = CellState::occupied;
    else if (observed[i])
      occ.cells[i] = CellState::free;
  }
  return occ;
}

std::vector<FrontierCluster> extract_frontiers(const OccupancyGrid& occ,
                                               int min_cluster_size) {
  const int w = occ.width, h = occ.height;
  static constexpr int kDx4[] = {1, -1, 0, 0};
  static constexpr int kDy4[] = {0, 0, 1, -1};
  std::vector<uint8_t> frontier((size_t)w * h, 0);
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      if (occ.at(ix, iy) != CellState::free) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = ix + kDx4[k], ny = iy + kDy4[k];
        if (occ.in_bounds(nx, ny) && occ.at(nx, ny) == CellState::unknown) {
          frontier[(size_t)iy * w + ix] = 1;
          break;
        }
      }
    }
  }

  std::vector<FrontierCluster> clusters;
  std::vector<uint8_t> seen((size_t)w * h, 0);
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const size_t si = (size_t)sy * w + sx;
      if (!frontier[si] || seen[si]) continue;
      FrontierCluster cl;
      std::deque<std::array<int, 2>> queue{{sx, sy}};
      seen[si] = 1;
      Vec2 csum{0, 0}, nsum{0, 0};
      while (!queue.empty()) {
        const auto [ix, iy] = queue.front();
        queue.pop_front();
        cl.cells.push_back({ix, iy});
        const Vec2 c = occ.cell_center(ix, iy);
        csum = csum + c;
        for (int k = 0; k < 4; ++k) {
          const int nx = ix + kDx4[k], ny = iy + kDy4[k];
          if (occ.in_bounds(nx, ny) && occ.at(nx, ny) == CellState::unknown)
            nsum = nsum + Vec2{(double)kDx4[k], (double)kDy4[k]};
        }
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = ix + dx, ny = iy + dy;
            if (!occ.in_bounds(nx, ny)) continue;
            const size_t ni = (size_t)ny * w + nx;
            if (frontier[ni] && !seen[ni]) {
              seen[ni] = 1;
              queue.push_back({nx, ny});
            }
          }
        }
      }
      if ((int)cl.cells.size() < min_cluster_size) continue;
      cl.centroid = csum * (1.0 / cl.cells.size());
      const double nn = std::hypot(nsum.x, nsum.y);
      cl.normal = nn > 1e-12 ? Vec2{nsum.x / nn, nsum.y / nn} : Vec2{1.0, 0.0};
      clusters.push_back(std::move(cl));
    }
  }
  return clusters;
}

namespace {

// Exact path cost as move counts: total = s + d * sqrt(2). Because sqrt(2) is
// irrational, two costs are equal only when both counts match.
struct MoveCost {
  int s = 0, d = 0;
};

int compare_cost(const MoveCost& a, const MoveCost& b) {
  const long long ds = (long long)a.s - b.s, dd = (long long)a.d - b.d;
  if (ds == 0 && dd == 0) return 0;
  if (ds >= 0 && dd >= 0) return 1;
  if (ds <= 0 && dd <= 0) return -1;
  const bool bigger = ds * ds > 2 * dd * dd;  // |ds| vs sqrt(2)|dd|
  if (ds < 0) return bigger ? -1 : 1;
  return bigger ? 1 : -1;
}

struct DijkstraResult {
  std::vector<MoveCost> dist;
  std::vector<uint8_t> reached;
};

DijkstraResult dijkstra(const OccupancyGrid& occ, int sx, int sy) {
  const int w = occ.width, h = occ.height;
  DijkstraResult r{std::vector<MoveCost>((size_t)w * h),
                   std::vector<uint8_t>((size_t)w * h, 0)};
  std::vector<uint8_t> settled((size_t)w * h, 0);
  using Entry = std::pair<MoveCost, int>;
  auto worse = [](const Entry& a, const Entry& b) {
    const int c = compare_cost(a.first, b.first);
    if (c != 0) return c > 0;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> pq(worse);
  r.dist[(size_t)sy * w + sx] = {0, 0};
  r.reached[(size_t)sy * w + sx] = 1;
  pq.push({{0, 0}, sy * w + sx});
  while (!pq.empty()) {
    const auto [cost, idx] = pq.top();
    pq.pop();
    if (settled[idx]) continue;
    settled[idx] = 1;
    const int ix = idx % w, iy = idx / w;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = ix + dx, ny = iy + dy;
        if (!occ.in_bounds(nx, ny) || occ.at(nx, ny) != CellState::free) continue;
        const size_t ni = (size_t)ny * w + nx;
        MoveCost cand = cost;
        (dx != 0 && dy != 0) ? ++cand.d : ++cand.s;
        if (!r.reached[ni] || compare_cost(cand, r.dist[ni]) < 0) {
          r.reached[ni] = 1;
          r.dist[ni] = cand;
          pq.push({cand, (int)ni});
        }
      }
    }
  }
  return r;
}

}  // namespace

std::optional<std::vector<std::array<int, 2>>> plan_path(const OccupancyGrid& occ,
                                                         std::array<int, 2> from,
                                                         std::array<int, 2> to) {
  const int w = occ.width;
  if (!occ.in_bounds(from[0], from[1]) || !occ.in_bounds(to[0], to[1])) return std::nullopt;
  if (occ.at(from[0], from[1]) != CellState::free ||
      occ.at(to[0], to[1]) != CellState::free)
    return std::nullopt;
  if (from == to) return std::vector<std::array<int, 2>>{from};

  const DijkstraResult fwd = dijkstra(occ, from[0], from[1]);
  if (!fwd.reached[(size_t)to[1] * w + to[0]]) return std::nullopt;
  const DijkstraResult bwd = dijkstra(occ, to[0], to[1]);
  const MoveCost total = fwd.dist[(size_t)to[1] * w + to[0]];

  // Walk forward, always taking the smallest row-major successor that stays
  // on some optimal path: this is the lexicographically least shortest path.
  std::vector<std::array<int, 2>> path{from};
  std::array<int, 2> cur = from;
  while (cur != to) {
    int best = -1;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = cur[0] + dx, ny = cur[1] + dy;
        if (!occ.in_bounds(nx, ny) || occ.at(nx, ny) != CellState::free) continue;
        const int ni = ny * w + nx;
        if (!fwd.reached[ni] || !bwd.reached[ni]) continue;
        MoveCost step = fwd.dist[(size_t)cur[1] * w + cur[0]];
        (dx != 0 && dy != 0) ? ++step.d : ++step.s;
        if (compare_cost(step, fwd.dist[ni]) != 0) continue;
        MoveCost through = step;
        through.s += bwd.dist[ni].s;
        through.d += bwd.dist[ni].d;
        if (compare_cost(through, total) != 0) continue;
        if (best < 0 || ni < best) best = ni;
      }
    }
    if (best < 0) return std::nullopt;  // unreachable: cur lies on an optimal path
    cur = {best % w, best / w};
    path.push_back(cur);
  }
  return path;
}

}  // namespace gsmem
