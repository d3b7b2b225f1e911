#include "iterlogic/mining.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace iterlogic {

void MiningConfig::validate() const {
  if (max_length != 1 && max_length != 2) {
    throw std::invalid_argument("mining max_length must be 1 or 2");
  }
  if (!(min_confidence > 0.0) || min_confidence > 1.0) {
    throw std::invalid_argument("mining min_confidence must be in (0, 1]");
  }
}

namespace {

// Relations holding between each connected (head, tail) pair. Used to
// discover candidate conclusion relations while walking premise
// instantiations.
std::unordered_map<std::uint64_t, std::vector<RelationId>> build_pair_index(
    const KnowledgeGraph& kg) {
  std::unordered_map<std::uint64_t, std::vector<RelationId>> index;
  index.reserve(kg.size());
  for (const Triple& t : kg.triples()) {
    index[pack_pair(t.head, t.tail)].push_back(t.relation);
  }
  return index;
}

// Relations with at least one outgoing edge per entity (premise expansion
// at the shared variable).
std::vector<std::vector<RelationId>> build_out_relations(const KnowledgeGraph& kg) {
  std::vector<std::vector<RelationId>> out(kg.entity_count());
  for (const Triple& t : kg.triples()) {
    out[t.head].push_back(t.relation);
  }
  for (auto& rels : out) {
    std::sort(rels.begin(), rels.end());
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
  }
  return out;
}

struct Miner {
  const KnowledgeGraph& kg;
  const MiningConfig& cfg;
  std::unordered_map<std::uint64_t, std::vector<RelationId>> pair_rels;
  std::vector<HornRule> rules;

  // True when the PCA denominator counts this instantiation: the subject
  // (or object, by flag) of the would-be conclusion already has some
  // conclusion-relation fact.
  bool pca_counts(EntityId subject, EntityId object, RelationId rc) const {
    if (cfg.pca_object_direction) return !kg.heads(object, rc).empty();
    return !kg.tails(subject, rc).empty();
  }

  void emit(HornRule rule) {
    if (rule.support < cfg.min_support || rule.support == 0) return;
    if (rule.confidence < cfg.min_confidence) return;
    rules.push_back(std::move(rule));
  }

  const std::vector<RelationId>* relations_between(EntityId h, EntityId t) const {
    auto it = pair_rels.find(pack_pair(h, t));
    if (it == pair_rels.end()) return nullptr;
    return &it->second;
  }

  void mine_length1(RelationId rp) {
    const auto& pairs = kg.pairs_of(rp);
    if (pairs.size() < std::max<std::uint64_t>(cfg.min_support, 1)) return;

    std::uint64_t reflexive = 0;
    std::unordered_map<RelationId, std::uint64_t> support_straight;
    std::unordered_map<RelationId, std::uint64_t> support_inverse;
    for (const auto& [a, b] : pairs) {
      if (a == b) ++reflexive;
      if (const auto* rels = relations_between(a, b)) {
        for (RelationId rc : *rels) {
          if (rc != rp) ++support_straight[rc];  // rc == rp is the tautology
        }
      }
      if (const auto* rels = relations_between(b, a)) {
        for (RelationId rc : *rels) {
          if (rc == rp && a == b) continue;  // conclusion == premise triple
          ++support_inverse[rc];
        }
      }
    }

    auto sorted_keys = [](const std::unordered_map<RelationId, std::uint64_t>& m) {
      std::vector<RelationId> keys;
      keys.reserve(m.size());
      for (const auto& [k, v] : m) keys.push_back(k);
      std::sort(keys.begin(), keys.end());
      return keys;
    };

    for (RelationId rc : sorted_keys(support_straight)) {
      std::uint64_t sup = support_straight[rc];
      if (sup < cfg.min_support) continue;
      std::uint64_t body = pairs.size();
      if (cfg.confidence_kind == ConfidenceKind::Pca) {
        body = 0;
        for (const auto& [a, b] : pairs) {
          if (pca_counts(a, b, rc)) ++body;
        }
      }
      HornRule rule{{Atom{rp, Var::X, Var::Y}}, Atom{rc, Var::X, Var::Y},
                    double(sup) / double(body), sup, body};
      emit(std::move(rule));
    }

    for (RelationId rc : sorted_keys(support_inverse)) {
      std::uint64_t sup = support_inverse[rc];
      if (sup < cfg.min_support) continue;
      std::uint64_t body = 0;
      if (cfg.confidence_kind == ConfidenceKind::Pca) {
        for (const auto& [a, b] : pairs) {
          if (rc == rp && a == b) continue;
          if (pca_counts(b, a, rc)) ++body;
        }
      } else {
        body = pairs.size() - (rc == rp ? reflexive : 0);
      }
      HornRule rule{{Atom{rp, Var::Y, Var::X}}, Atom{rc, Var::X, Var::Y},
                    double(sup) / double(body), sup, body};
      emit(std::move(rule));
    }
  }

  void mine_length2(RelationId r1, const std::vector<std::vector<RelationId>>& out_rels) {
    const auto& pairs = kg.pairs_of(r1);
    if (pairs.empty()) return;

    // One walk over all (x,r1,y),(y,r2,z) instantiations: premise counts
    // per r2, tautology-skip counts and conclusion support per (r2, rc).
    std::unordered_map<RelationId, std::uint64_t> body_by_r2;
    std::unordered_map<std::uint64_t, std::uint64_t> skip;     // (r2, rc) -> skipped
    std::unordered_map<std::uint64_t, std::uint64_t> support;  // (r2, rc) -> support
    for (const auto& [x, y] : pairs) {
      for (RelationId r2 : out_rels[y]) {
        auto zs = kg.tails(y, r2);
        body_by_r2[r2] += zs.size();
        if (x == y) skip[pack_pair(r2, r2)] += zs.size();
        for (EntityId z : zs) {
          if (z == y) ++skip[pack_pair(r2, r1)];
          if (const auto* rels = relations_between(x, z)) {
            for (RelationId rc : *rels) {
              if ((rc == r1 && z == y) || (rc == r2 && x == y)) continue;
              ++support[pack_pair(r2, rc)];
            }
          }
        }
      }
    }

    std::vector<std::uint64_t> keys;
    keys.reserve(support.size());
    for (const auto& [k, v] : support) {
      if (v >= cfg.min_support) keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    if (keys.empty()) return;

    std::unordered_map<std::uint64_t, std::uint64_t> pca_body;
    if (cfg.confidence_kind == ConfidenceKind::Pca) {
      // Second walk restricted to surviving (r2, rc) candidates.
      std::unordered_map<RelationId, std::vector<RelationId>> cands_by_r2;
      for (std::uint64_t key : keys) {
        cands_by_r2[RelationId(key >> 32)].push_back(RelationId(key & 0xffffffff));
      }
      for (const auto& [x, y] : pairs) {
        for (RelationId r2 : out_rels[y]) {
          auto cand_it = cands_by_r2.find(r2);
          if (cand_it == cands_by_r2.end()) continue;
          for (EntityId z : kg.tails(y, r2)) {
            for (RelationId rc : cand_it->second) {
              if ((rc == r1 && z == y) || (rc == r2 && x == y)) continue;
              if (pca_counts(x, z, rc)) ++pca_body[pack_pair(r2, rc)];
            }
          }
        }
      }
    }

    for (std::uint64_t key : keys) {
      RelationId r2 = RelationId(key >> 32);
      RelationId rc = RelationId(key & 0xffffffff);
      std::uint64_t sup = support[key];
      std::uint64_t body;
      if (cfg.confidence_kind == ConfidenceKind::Pca) {
        body = pca_body[key];
      } else {
        auto skip_it = skip.find(key);
        body = body_by_r2[r2] - (skip_it == skip.end() ? 0 : skip_it->second);
      }
      HornRule rule{{Atom{r1, Var::X, Var::Y}, Atom{r2, Var::Y, Var::Z}},
                    Atom{rc, Var::X, Var::Z}, double(sup) / double(body), sup, body};
      emit(std::move(rule));
    }
  }
};

}  // namespace

std::vector<HornRule> mine_rules(const KnowledgeGraph& kg, const MiningConfig& config) {
  config.validate();
  if (kg.size() == 0) {
    throw std::invalid_argument("cannot mine rules from an empty graph");
  }

  Miner miner{kg, config, build_pair_index(kg), {}};
  for (RelationId rp = 0; rp < kg.relation_count(); ++rp) {
    miner.mine_length1(rp);
  }
  if (config.max_length >= 2) {
    auto out_rels = build_out_relations(kg);
    for (RelationId r1 = 0; r1 < kg.relation_count(); ++r1) {
      miner.mine_length2(r1, out_rels);
    }
  }

  std::sort(miner.rules.begin(), miner.rules.end(),
            [](const HornRule& a, const HornRule& b) {
              auto key = [](const HornRule& r) {
                return std::tuple(r.length(), r.premise[0].relation,
                                  r.length() == 2 ? r.premise[1].relation
                                                  : RelationId(r.inverse_premise()),
                                  r.conclusion.relation);
              };
              return key(a) < key(b);
            });
  return miner.rules;
}

}  // namespace iterlogic
