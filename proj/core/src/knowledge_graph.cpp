#include "iterlogic/knowledge_graph.hpp"

#include <fstream>
#include <stdexcept>

#include "iterlogic/text.hpp"

namespace iterlogic {

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<Vocabulary> vocab)
    : vocab_(std::move(vocab)) {
  if (vocab_ == nullptr) {
    vocab_ = std::make_shared<Vocabulary>();
  }
}

void KnowledgeGraph::check_bounds(const Triple& t) const {
  if (t.head >= entity_count() || t.tail >= entity_count()) {
    throw std::out_of_range("entity id out of vocabulary bounds");
  }
  if (t.relation >= relation_count()) {
    throw std::out_of_range("relation id out of vocabulary bounds");
  }
}

bool KnowledgeGraph::insert(const Triple& t) {
  check_bounds(t);
  if (!triples_set_.insert(pack_triple(t)).second) return false;
  triples_.push_back(t);
  if (by_relation_.size() < relation_count()) by_relation_.resize(relation_count());
  by_relation_[t.relation].emplace_back(t.head, t.tail);
  head_rel_[pack_pair(t.head, t.relation)].push_back(t.tail);
  tail_rel_[pack_pair(t.tail, t.relation)].push_back(t.head);
  return true;
}

std::size_t KnowledgeGraph::add_triples(std::span<const Triple> triples) {
  std::size_t inserted = 0;
  for (const Triple& t : triples) {
    if (insert(t)) ++inserted;
  }
  return inserted;
}

const std::vector<std::pair<EntityId, EntityId>>& KnowledgeGraph::pairs_of(
    RelationId r) const {
  static const std::vector<std::pair<EntityId, EntityId>> kEmpty;
  if (r >= relation_count()) throw std::out_of_range("relation id out of bounds");
  if (r >= by_relation_.size()) return kEmpty;
  return by_relation_[r];
}

std::span<const EntityId> KnowledgeGraph::tails(EntityId h, RelationId r) const {
  auto it = head_rel_.find(pack_pair(h, r));
  if (it == head_rel_.end()) return {};
  return it->second;
}

std::span<const EntityId> KnowledgeGraph::heads(EntityId t, RelationId r) const {
  auto it = tail_rel_.find(pack_pair(t, r));
  if (it == tail_rel_.end()) return {};
  return it->second;
}

std::vector<std::array<EntityId, 3>> KnowledgeGraph::join_pairs(RelationId r1,
                                                                RelationId r2) const {
  if (r1 >= relation_count() || r2 >= relation_count()) {
    throw std::out_of_range("relation id out of bounds");
  }
  std::vector<std::array<EntityId, 3>> out;
  for (const auto& [x, y] : pairs_of(r1)) {
    for (EntityId z : tails(y, r2)) {
      out.push_back({x, y, z});
    }
  }
  return out;
}

KnowledgeGraph KnowledgeGraph::load_tsv(const std::string& path,
                                        std::shared_ptr<Vocabulary> vocab,
                                        bool grow_vocab, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open triple file: " + path);
  if (vocab == nullptr) vocab = std::make_shared<Vocabulary>();

  KnowledgeGraph kg(vocab);
  LoadReport local;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty()) continue;
    ++local.lines_read;
    auto fields = split(view, '\t');
    if (fields.size() != 3) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 3 tab-separated fields, got " +
                               std::to_string(fields.size()));
    }
    Triple t;
    if (grow_vocab) {
      t.head = vocab->intern_entity(fields[0]);
      t.relation = vocab->intern_relation(fields[1]);
      t.tail = vocab->intern_entity(fields[2]);
    } else {
      auto h = vocab->find_entity(fields[0]);
      auto r = vocab->find_relation(fields[1]);
      auto tl = vocab->find_entity(fields[2]);
      if (!h || !r || !tl) {
        throw std::out_of_range(path + ":" + std::to_string(line_no) +
                                ": symbol not in fixed vocabulary");
      }
      t = Triple{*h, *r, *tl};
    }
    if (!kg.insert(t)) ++local.duplicates_dropped;
  }
  if (report != nullptr) *report = local;
  return kg;
}

void KnowledgeGraph::save_tsv(const std::string& path) const {
  FileWriter out(path);
  std::string buf;
  for (const Triple& t : triples_) {
    buf.clear();
    buf += vocab_->entity_name(t.head);
    buf += '\t';
    buf += vocab_->relation_name(t.relation);
    buf += '\t';
    buf += vocab_->entity_name(t.tail);
    buf += '\n';
    out.write(buf);
  }
  out.commit();
}

Dataset load_dataset(const std::string& train_path, const std::string& valid_path,
                     const std::string& test_path) {
  auto vocab = std::make_shared<Vocabulary>();
  KnowledgeGraph train = KnowledgeGraph::load_tsv(train_path, vocab, /*grow_vocab=*/true);
  vocab->freeze();

  auto load_split = [&](const std::string& path) {
    std::vector<Triple> out;
    if (path.empty()) return out;
    KnowledgeGraph kg = KnowledgeGraph::load_tsv(path, vocab, /*grow_vocab=*/false);
    out = kg.triples();
    return out;
  };

  Dataset ds{vocab, std::move(train), load_split(valid_path), load_split(test_path)};
  return ds;
}

}  // namespace iterlogic
