#pragma once

#include <string>
#include <vector>

#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/rules.hpp"

namespace iterlogic {

// One planted rule body_k(x,y) => head_k(x,y). The head relation holds
// exactly between cluster-compatible entity pairs; the generator controls
// how many premise pairs have their conclusion already in the train split
// (observed), held out (true candidates) or planted on incompatible pairs
// (false candidates).
struct SynthRuleSpec {
  double confidence = 1.0;              // declared rule confidence
  std::uint32_t observed_conclusions = 300;
  std::uint32_t true_candidates = 80;
  std::uint32_t false_candidates = 20;
  std::uint32_t background_facts = 600;  // extra head-relation facts
};

struct SynthConfig {
  std::uint32_t entities = 200;
  std::uint32_t clusters = 10;
  std::vector<SynthRuleSpec> rules = {SynthRuleSpec{}};
  std::uint32_t peer_facts = 800;        // same-cluster helper relation
  std::uint32_t valid_per_rule = 40;     // fresh true pairs per rule
  std::uint32_t test_per_rule = 80;      // fresh true pairs, plus all held-out
  std::uint64_t seed = 7;
};

struct SynthDataset {
  std::shared_ptr<Vocabulary> vocab;
  KnowledgeGraph train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  std::vector<HornRule> rules;
  // Ground truth per rule, index-aligned with `rules`.
  std::vector<std::vector<Triple>> held_out_true;
  std::vector<std::vector<Triple>> planted_false;
};

SynthDataset generate_synthetic(const SynthConfig& config);

// Writes train.tsv / valid.tsv / test.tsv / rules.txt plus
// truth_true.tsv and truth_false.tsv (rule<TAB>head<TAB>relation<TAB>tail).
void save_synthetic(const SynthDataset& data, const std::string& dir);

}  // namespace iterlogic
