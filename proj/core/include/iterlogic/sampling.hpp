#pragma once

#include <random>
#include <vector>

#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/types.hpp"

namespace iterlogic {

struct LabeledExample {
  Triple triple;
  int label = +1;  // exactly +1 or -1
};

// Draws `count` corrupted triples for one positive: each negative replaces
// the head or the tail (uniform choice) with a uniformly random entity and
// is resampled while it is still present in the graph. After 100 rejected
// draws the candidate is accepted as-is (saturated-relation fallback).
// Deterministic for a fixed rng state.
std::vector<Triple> sample_negatives(const KnowledgeGraph& kg, const Triple& positive,
                                     std::uint32_t count, std::mt19937_64& rng);

}  // namespace iterlogic
