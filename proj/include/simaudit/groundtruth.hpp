#pragma once

#include <string>
#include <vector>

#include "simaudit/corpus.hpp"
#include "simaudit/simspace.hpp"

namespace simaudit {

struct WeightedSource {
  SimMatrix matrix;
  double weight = 1.0;
};

/// Weighted binary similarity sources over one shared vocabulary.
struct GroundTruthSpec {
  std::vector<WeightedSource> sources;
};

/// 1 for distinct terms sharing a pile, else 0; diagonal 1.
/// Throws UnknownLabel for pile members outside `vocab`.
SimMatrix pile_similarity_matrix(const PileSorting& piles, const Vocab& vocab);

/// 1 for distinct terms used for at least one common performance, else 0;
/// diagonal 1. Throws UnknownLabel.
SimMatrix performance_cooccurrence_matrix(const PerfTermTable& table, const Vocab& vocab);

/// Weighted mean of the sources (sum divided by total weight).
/// Throws VocabMismatch, InvalidArgument.
SimMatrix combine(const GroundTruthSpec& spec);

/// Vocabulary for ground-truth construction: sorted union of every pile
/// member and every table term.
Vocab ground_truth_vocab(const std::vector<PileSorting>& groups, const PerfTermTable* table);

/// Each label represented by its row of similarities to every label, so a
/// similarity matrix can be clustered like an embedding space.
EmbeddingSet similarity_profiles(const SimMatrix& sim, const std::string& tag = "GT");

}  // namespace simaudit
