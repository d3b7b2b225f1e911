#pragma once

#include <vector>

#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/rules.hpp"

namespace iterlogic {

enum class ConfidenceKind { Standard, Pca };

struct MiningConfig {
  int max_length = 2;                        // 1 or 2
  double min_confidence = 0.8;               // in (0, 1]
  std::uint64_t min_support = 2;
  ConfidenceKind confidence_kind = ConfidenceKind::Pca;
  // PCA denominator counts premise instantiations whose subject x already
  // has some conclusion-relation fact. Set true to count by object z
  // instead (the other functionality direction).
  bool pca_object_direction = false;

  void validate() const;
};

// Mines all closed Horn rules of length <= max_length with
// confidence >= min_confidence and support >= min_support.
//
// Counting is over distinct premise instantiations. An instantiation whose
// conclusion would be the very triple of one of its premise atoms is never
// counted (no r(x,y) => r(x,y) tautologies). Standard confidence divides
// support by all premise instantiations; PCA confidence divides by the
// instantiations whose subject has at least one conclusion-relation fact.
//
// Output is deterministic: sorted by premise relations, orientation and
// conclusion relation.
std::vector<HornRule> mine_rules(const KnowledgeGraph& kg, const MiningConfig& config);

}  // namespace iterlogic
