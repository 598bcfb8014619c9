// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/vocab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "gsmem/core/rng.hpp"

namespace gsmem {

namespace {

struct VocabEntry {
  const char* label;
  std::vector<std::string> tags;
};

// Exactly 64 canonical labels; index order is the embedding assignment order.
const std::vector<VocabEntry>& entries() {
  static const std::vector<VocabEntry> v = {
      {"sofa", {"furniture", "seating"}},
      {"armchair", {"furniture", "seating"}},
      {"chair", {"furniture", "seating"}},
      {"stool", {"furniture", "seating"}},
      {"bench", {"furniture", "seating"}},
      {"bed", {"furniture", "sleeping"}},
      {"table", {"furniture", "surface"}},
      {"desk", {"furniture", "surface", "workspace"}},
      {"nightstand", {"furniture", "storage"}},
      {"shelf", {"furniture", "storage"}},
      {"cabinet", {"furniture", "storage"}},
      {"dresser", {"furniture", "storage"}},
      {"bookshelf", {"furniture", "storage", "books"}},
      {"wardrobe", {"furniture", "storage"}},
      {"fridge", {"appliance", "kitchen"}},
      {"oven", {"appliance", "kitchen"}},
      {"stove", {"appliance", "kitchen"}},
      {"microwave", {"appliance", "kitchen"}},
      {"dishwasher", {"appliance", "kitchen"}},
      {"washer", {"appliance", "laundry"}},
      {"dryer", {"appliance", "laundry"}},
      {"kettle", {"appliance", "kitchen"}},
      {"toaster", {"appliance", "kitchen"}},
      {"vacuum", {"appliance", "cleaning"}},
      {"tv", {"electronics", "media"}},
      {"monitor", {"electronics", "workspace"}},
      {"laptop", {"electronics", "workspace"}},
      {"phone", {"electronics"}},
      {"speaker", {"electronics", "media"}},
      {"console", {"electronics", "media"}},
      {"router", {"electronics"}},
      {"printer", {"electronics", "workspace"}},
      {"keyboard", {"electronics", "workspace"}},
      {"mug", {"kitchenware"}},
      {"plate", {"kitchenware"}},
      {"bowl", {"kitchenware"}},
      {"pot", {"kitchenware", "cooking"}},
      {"pan", {"kitchenware", "cooking"}},
      {"bottle", {"kitchenware"}},
      {"jar", {"kitchenware", "storage"}},
      {"painting", {"decor", "wall"}},
      {"mirror", {"decor", "wall"}},
      {"clock", {"decor", "wall"}},
      {"vase", {"decor"}},
      {"candle", {"decor", "lighting"}},
      {"statue", {"decor"}},
      {"rug", {"decor", "textile"}},
      {"curtain", {"decor", "textile"}},
      {"plant", {"plant", "decor"}},
      {"flower", {"plant", "decor"}},
      {"lamp", {"lighting"}},
      {"chandelier", {"lighting"}},
      {"sconce", {"lighting", "wall"}},
      {"basket", {"storage"}},
      {"bin", {"storage"}},
      {"chest", {"storage", "furniture"}},
      {"crate", {"storage"}},
      {"pillow", {"textile", "bedding"}},
      {"blanket", {"textile", "bedding"}},
      {"towel", {"textile", "bathroom"}},
      {"ball", {"toy"}},
      {"doll", {"toy"}},
      {"teddy", {"toy"}},
      {"ladder", {"tool"}},
  };
  return v;
}

const std::map<std::string, std::string>& alias_table() {
  static const std::map<std::string, std::string> a = {
      {"couch", "sofa"},         {"refrigerator", "fridge"}, {"television", "tv"},
      {"telephone", "phone"},    {"cup", "mug"},             {"picture", "painting"},
      {"houseplant", "plant"},   {"trash_can", "bin"},       {"garbage_can", "bin"},
      {"teddy_bear", "teddy"},
  };
  return a;
}

// Row `r` of the order-32 Sylvester Hadamard matrix, normalized to unit
// length: H[r][c] = (-1)^popcount(r & c) / sqrt(32).
std::vector<double> hadamard_row(int r) {
  std::vector<double> v(kFeatureDim);
  const double s = 1.0 / std::sqrt((double)kFeatureDim);
  for (int c = 0; c < kFeatureDim; ++c)
    v[c] = (std::popcount((unsigned)(r & c)) & 1) ? -s : s;
  return v;
}

const std::vector<std::vector<double>>& embedding_table() {
  static const std::vector<std::vector<double>> t = [] {
    std::vector<std::vector<double>> out;
    out.reserve(64);
    for (int i = 0; i < kFeatureDim; ++i) {
      std::vector<double> e(kFeatureDim, 0.0);
      e[i] = 1.0;
      out.push_back(std::move(e));
    }
    for (int r = 0; r < kFeatureDim; ++r) out.push_back(hadamard_row(r));
    return out;
  }();
  return t;
}

// Portable standard normal from raw 64-bit draws (Box-Muller); avoids the
// implementation-defined std::normal_distribution so hashed embeddings are
// stable across standard libraries.
double portable_normal(Rng& rng) {
  const double u1 = ((rng() >> 11) + 0.5) * 0x1p-53;
  const double u2 = (rng() >> 11) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace

const std::vector<std::string>& vocab_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    out.reserve(entries().size());
    for (const VocabEntry& e : entries()) out.emplace_back(e.label);
    return out;
  }();
  return labels;
}

std::string canonical_label(const std::string& label) {
  const auto it = alias_table().find(label);
  return it == alias_table().end() ? label : it->second;
}

int vocab_index(const std::string& label) {
  const std::string c = canonical_label(label);
  const std::vector<std::string>& labels = vocab_labels();
  const auto it = std::find(labels.begin(), labels.end(), c);
  return it == labels.end() ? -1 : (int)(it - labels.begin());
}

const std::vector<std::string>& vocab_tags(const std::string& label) {
  static const std::vector<std::string> none;
  const int i = vocab_index(label);
  return i < 0 ? none : entries()[i].tags;
}

std::vector<double> embed_label(const std::string& label) {
  const int i = vocab_index(label);
  if (i >= 0) return embedding_table()[i];
  Rng rng(fnv1a(canonical_label(label)));
  std::vector<double> v(kFeatureDim);
  double norm2 = 0.0;
  for (double& x : v) {
    x = portable_normal(rng);
    norm2 += x * x;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

std::string target_label(const std::string& text) {
  std::string best;       // canonical form of the best match
  size_t best_len = 0;    // length of the matched surface form
  const auto consider = [&](const std::string& surface, const std::string& canon) {
    if (surface.size() <= best_len) return;
    if (text.find(surface) == std::string::npos) return;
    best = canon;
    best_len = surface.size();
  };
  for (const std::string& label : vocab_labels()) consider(label, label);
  for (const auto& [alias, canon] : alias_table()) consider(alias, canon);
  return best;
}

}  // namespace gsmem
