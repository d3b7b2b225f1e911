#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iterlogic/types.hpp"

namespace iterlogic {

// Bijective string <-> dense id mapping for entities and relations.
// Ids are assigned in first-appearance order, which makes ingestion
// reproducible for a fixed input file.
class Vocabulary {
 public:
  EntityId intern_entity(std::string_view name);
  RelationId intern_relation(std::string_view name);

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;

  const std::string& entity_name(EntityId id) const;
  const std::string& relation_name(RelationId id) const;

  std::uint32_t entity_count() const { return std::uint32_t(entities_.size()); }
  std::uint32_t relation_count() const { return std::uint32_t(relations_.size()); }

  // A frozen vocabulary rejects new symbols (used when loading the
  // validation/test splits against the training vocabulary).
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // TSV dumps, one "id<TAB>name" line per symbol, id order.
  void save(const std::string& entity_path, const std::string& relation_path) const;
  static Vocabulary load(const std::string& entity_path, const std::string& relation_path);

 private:
  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::unordered_map<std::string, RelationId> relation_ids_;
  bool frozen_ = false;
};

}  // namespace iterlogic
