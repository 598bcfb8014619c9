// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/retrieval/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace gsmem {

namespace {

double coord(const Vec3& v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

}  // namespace

KdTree3::KdTree3(std::vector<Vec3> points) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) root_ = build(0, (uint32_t)points_.size());
}

int KdTree3::build(uint32_t begin, uint32_t end) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return (int)nodes_.size() - 1;
  }

  // Split the widest axis at the median point.
  Vec3 lo = points_[order_[begin]], hi = lo;
  for (uint32_t i = begin + 1; i < end; ++i) {
    const Vec3& p = points_[order_[i]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 span = hi - lo;
  int axis = 0;
  if (span.y > coord(span, axis)) axis = 1;
  if (span.z > coord(span, axis)) axis = 2;

  const uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](uint32_t a, uint32_t b) {
                     return coord(points_[a], axis) < coord(points_[b], axis);
                   });
  node.axis = axis;
  node.split = coord(points_[order_[mid]], axis);

  // All duplicates of the split coordinate land left so the halves are
  // consistent with the <= split / > split convention used when querying.
  const auto it = std::partition(order_.begin() + begin, order_.begin() + end,
                                 [&](uint32_t a) {
                                   return coord(points_[a], axis) <= node.split;
                                 });
  uint32_t cut = (uint32_t)(it - order_.begin());
  if (cut == begin || cut == end) {
    // Degenerate spread (all coordinates equal on this axis): make a leaf.
    node = Node{};
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return (int)nodes_.size() - 1;
  }
  const int idx = (int)nodes_.size();
  nodes_.push_back(node);
  const int l = build(begin, cut);
  const int r = build(cut, end);
  nodes_[idx].left = l;
  nodes_[idx].right = r;
  return idx;
}

void KdTree3::query(int ni, const Vec3& q, double r, std::vector<uint32_t>* out) const {
  const Node& node = nodes_[ni];
  if (node.axis < 0) {
    const double r2 = r * r;
    for (uint32_t i = node.begin; i < node.end; ++i) {
      const Vec3 d = points_[order_[i]] - q;
      if (d.dot(d) <= r2) out->push_back(order_[i]);
    }
    return;
  }
  const double qc = coord(q, node.axis);
  if (qc - r <= node.split) query(node.left, q, r, out);
  if (qc + r > node.split) query(node.right, q, r, out);
}

std::vector<uint32_t> KdTree3::radius_query(const Vec3& q, double r) const {
  std::vector<uint32_t> out;
  if (root_ >= 0) query(root_, q, r, &out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gsmem
