// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace gsmem {

// Dimension of the synthetic semantic embedding space.
inline constexpr int kFeatureDim = 32;

// The shipped 64-label indoor vocabulary. Canonical labels map to fixed unit
// vectors in R^32: the first 32 to the standard basis, the remaining 32 to
// normalized rows of the order-32 Hadamard matrix, so any two distinct
// canonical labels have |cosine| <= 1/sqrt(32) ~= 0.177.
const std::vector<std::string>& vocab_labels();

// Synonyms collapse onto one canonical label ("couch" -> "sofa"); labels
// without an alias entry pass through unchanged.
std::string canonical_label(const std::string& label);

// Index into vocab_labels() after alias resolution, or -1 if out of
// vocabulary.
int vocab_index(const std::string& label);

// Coarse category tags for a canonical vocabulary label (empty when out of
// vocabulary). Scene objects share these through their semantic_tags.
const std::vector<std::string>& vocab_tags(const std::string& label);

// Unit embedding of a label: the vocabulary table after alias resolution, or
// a reproducible hashed unit vector for labels outside the vocabulary.
std::vector<double> embed_label(const std::string& label);

// The most specific vocabulary label or alias occurring in free text
// (longest match, ties to canonical order), resolved to canonical form.
// Empty string when nothing matches.
std::string target_label(const std::string& text);

}  // namespace gsmem
