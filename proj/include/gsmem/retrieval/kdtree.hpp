// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gsmem/core/math.hpp"

namespace gsmem {

// Static 3-d tree over a fixed point set, median-split at build time. Used for
// radius searches during semantic clustering; results are exact (leaves are
// checked with true Euclidean distance, inclusive of the radius).
class KdTree3 {
 public:
  explicit KdTree3(std::vector<Vec3> points);

  size_t size() const { return points_.size(); }

  // Indices (into the constructor's point list) of every point within
  // distance r of q, boundary included, in ascending order.
  std::vector<uint32_t> radius_query(const Vec3& q, double r) const;

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;  // points with coord <= split go left
    int left = -1, right = -1;
    uint32_t begin = 0, end = 0;  // leaf payload range in order_
  };

  int build(uint32_t begin, uint32_t end);
  void query(int node, const Vec3& q, double r, std::vector<uint32_t>* out) const;

  static constexpr uint32_t kLeafSize = 16;

  std::vector<Vec3> points_;
  std::vector<uint32_t> order_;  // permutation partitioned by the tree
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace gsmem
