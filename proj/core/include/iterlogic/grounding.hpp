#pragma once

#include <vector>

#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/rules.hpp"

namespace iterlogic {

// One forward-chaining cycle: instantiates every rule premise against the
// current graph and emits the conclusion triples that are not already
// present. Conclusions are NOT chained into further premises within the
// call. Groups are deduplicated and sorted by (head, relation, tail);
// group i corresponds to rules[i].
//
// Per-rule work runs on `workers` threads when workers > 1; the merged
// result is deterministic either way.
ConclusionSet ground_rules(const KnowledgeGraph& kg, const std::vector<HornRule>& rules,
                           unsigned workers = 1);

}  // namespace iterlogic
