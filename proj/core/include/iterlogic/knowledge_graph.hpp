#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iterlogic/types.hpp"
#include "iterlogic/vocabulary.hpp"

namespace iterlogic {

struct LoadReport {
  std::size_t lines_read = 0;
  std::size_t duplicates_dropped = 0;
};

// Triple store with the join indexes needed for grounding, mining and
// filtered ranking. The graph is immutable during a training epoch and
// mutated only between epochs (conclusion promotion): concurrent readers
// are safe, writers need exclusive access.
class KnowledgeGraph {
 public:
  KnowledgeGraph() : KnowledgeGraph(nullptr) {}
  explicit KnowledgeGraph(std::shared_ptr<Vocabulary> vocab);

  // Inserts one triple; returns false if it was already present.
  // Throws std::out_of_range when an id is outside the vocabulary.
  bool insert(const Triple& t);

  // Batch insert. Duplicates are silently skipped; returns the number
  // actually inserted.
  std::size_t add_triples(std::span<const Triple> triples);

  bool contains(const Triple& t) const { return triples_set_.count(pack_triple(t)) != 0; }

  std::size_t size() const { return triples_.size(); }
  std::uint32_t entity_count() const { return vocab_->entity_count(); }
  std::uint32_t relation_count() const { return vocab_->relation_count(); }

  const Vocabulary& vocab() const { return *vocab_; }
  const std::shared_ptr<Vocabulary>& vocab_ptr() const { return vocab_; }

  // Insertion-ordered triple list (stable across runs for a fixed input).
  const std::vector<Triple>& triples() const { return triples_; }

  // All (head, tail) pairs of one relation, insertion order.
  const std::vector<std::pair<EntityId, EntityId>>& pairs_of(RelationId r) const;

  // Tails t with (h, r, t) in the graph; empty span if none.
  std::span<const EntityId> tails(EntityId h, RelationId r) const;
  // Heads h with (h, r, t) in the graph; empty span if none.
  std::span<const EntityId> heads(EntityId t, RelationId r) const;

  // Every (x, y, z) with (x, r1, y) and (y, r2, z) present. Exact, no
  // duplicates, order unspecified.
  std::vector<std::array<EntityId, 3>> join_pairs(RelationId r1, RelationId r2) const;

  // TSV ingestion: one "head<TAB>relation<TAB>tail" line per triple.
  // With grow_vocab=false unseen symbols are an error.
  static KnowledgeGraph load_tsv(const std::string& path,
                                 std::shared_ptr<Vocabulary> vocab,
                                 bool grow_vocab,
                                 LoadReport* report = nullptr);

  // Writes the triple set in the same TSV format, insertion order.
  void save_tsv(const std::string& path) const;

 private:
  void check_bounds(const Triple& t) const;

  std::shared_ptr<Vocabulary> vocab_;
  std::vector<Triple> triples_;
  std::unordered_set<std::uint64_t> triples_set_;
  std::vector<std::vector<std::pair<EntityId, EntityId>>> by_relation_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> head_rel_;  // (h,r) -> tails
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tail_rel_;  // (t,r) -> heads
};

// Loads train/valid/test with a shared vocabulary built from the train
// split. Valid/test may be empty paths.
struct Dataset {
  std::shared_ptr<Vocabulary> vocab;
  KnowledgeGraph train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
};

Dataset load_dataset(const std::string& train_path, const std::string& valid_path,
                     const std::string& test_path);

}  // namespace iterlogic
