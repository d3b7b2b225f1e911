#include "iterlogic/vocabulary.hpp"

#include <fstream>
#include <stdexcept>

#include "iterlogic/text.hpp"

namespace iterlogic {

EntityId Vocabulary::intern_entity(std::string_view name) {
  auto it = entity_ids_.find(std::string(name));
  if (it != entity_ids_.end()) return it->second;
  if (frozen_) {
    throw std::out_of_range("unknown entity under fixed vocabulary: '" + std::string(name) + "'");
  }
  if (entities_.size() >= kMaxEntities) {
    throw std::length_error("entity vocabulary exceeds supported size");
  }
  EntityId id = EntityId(entities_.size());
  entities_.emplace_back(name);
  entity_ids_.emplace(entities_.back(), id);
  return id;
}

RelationId Vocabulary::intern_relation(std::string_view name) {
  auto it = relation_ids_.find(std::string(name));
  if (it != relation_ids_.end()) return it->second;
  if (frozen_) {
    throw std::out_of_range("unknown relation under fixed vocabulary: '" + std::string(name) + "'");
  }
  if (relations_.size() >= kMaxRelations) {
    throw std::length_error("relation vocabulary exceeds supported size");
  }
  RelationId id = RelationId(relations_.size());
  relations_.emplace_back(name);
  relation_ids_.emplace(relations_.back(), id);
  return id;
}

std::optional<EntityId> Vocabulary::find_entity(std::string_view name) const {
  auto it = entity_ids_.find(std::string(name));
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::find_relation(std::string_view name) const {
  auto it = relation_ids_.find(std::string(name));
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::entity_name(EntityId id) const {
  return entities_.at(id);
}

const std::string& Vocabulary::relation_name(RelationId id) const {
  return relations_.at(id);
}

void Vocabulary::save(const std::string& entity_path, const std::string& relation_path) const {
  FileWriter ents(entity_path);
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    ents.write(std::to_string(i) + "\t" + entities_[i] + "\n");
  }
  ents.commit();
  FileWriter rels(relation_path);
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    rels.write(std::to_string(i) + "\t" + relations_[i] + "\n");
  }
  rels.commit();
}

namespace {

void load_symbols(const std::string& path, std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    auto fields = split(view, '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'id<TAB>name'");
    }
    std::uint64_t id = parse_uint(fields[0]);
    if (id != names.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ids must be contiguous from 0");
    }
    names.emplace_back(fields[1]);
  }
}

}  // namespace

Vocabulary Vocabulary::load(const std::string& entity_path, const std::string& relation_path) {
  Vocabulary vocab;
  load_symbols(entity_path, vocab.entities_);
  load_symbols(relation_path, vocab.relations_);
  for (std::size_t i = 0; i < vocab.entities_.size(); ++i) {
    vocab.entity_ids_.emplace(vocab.entities_[i], EntityId(i));
  }
  for (std::size_t i = 0; i < vocab.relations_.size(); ++i) {
    vocab.relation_ids_.emplace(vocab.relations_[i], RelationId(i));
  }
  return vocab;
}

}  // namespace iterlogic
