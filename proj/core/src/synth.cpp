#include "iterlogic/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "iterlogic/text.hpp"

namespace iterlogic {

namespace {

// Entities live in clusters; head_k(x,y) holds exactly when the cluster of
// y is the rule's image of the cluster of x. The embedding can therefore
// separate true from false conclusions from the block structure alone.
struct ClusterSpace {
  std::uint32_t clusters;
  std::vector<std::vector<EntityId>> members;

  std::uint32_t cluster_of(EntityId e) const { return e % clusters; }
};

}  // namespace

SynthDataset generate_synthetic(const SynthConfig& config) {
  if (config.clusters < 2 || config.entities < 2 * config.clusters) {
    throw std::invalid_argument("synthetic generator needs >= 2 clusters and >= 2 entities per cluster");
  }
  if (config.rules.empty()) {
    throw std::invalid_argument("synthetic generator needs at least one rule spec");
  }

  std::mt19937_64 rng(config.seed);
  auto vocab = std::make_shared<Vocabulary>();
  for (std::uint32_t e = 0; e < config.entities; ++e) {
    vocab->intern_entity("e" + std::to_string(e));
  }
  std::vector<RelationId> body_rel, head_rel;
  for (std::size_t k = 0; k < config.rules.size(); ++k) {
    body_rel.push_back(vocab->intern_relation("body" + std::to_string(k)));
    head_rel.push_back(vocab->intern_relation("head" + std::to_string(k)));
  }
  const RelationId peer_rel = vocab->intern_relation("peer");

  ClusterSpace space{config.clusters, {}};
  space.members.resize(config.clusters);
  for (EntityId e = 0; e < config.entities; ++e) {
    space.members[space.cluster_of(e)].push_back(e);
  }

  SynthDataset data;
  data.vocab = vocab;
  data.train = KnowledgeGraph(vocab);
  data.held_out_true.resize(config.rules.size());
  data.planted_false.resize(config.rules.size());

  std::uniform_int_distribution<EntityId> any_entity(0, config.entities - 1);
  auto member_of = [&](std::uint32_t cluster) {
    std::uniform_int_distribution<std::size_t> pick(0, space.members[cluster].size() - 1);
    return space.members[cluster][pick(rng)];
  };

  for (std::size_t k = 0; k < config.rules.size(); ++k) {
    const SynthRuleSpec& spec = config.rules[k];
    // Cluster image without fixed points, distinct per rule.
    const std::uint32_t shift = 1 + std::uint32_t(k) % (config.clusters - 1);
    auto image = [&](std::uint32_t c) { return (c + shift) % config.clusters; };

    std::unordered_set<std::uint64_t> used_pairs;
    auto sample_true_pair = [&]() {
      while (true) {
        EntityId x = any_entity(rng);
        EntityId y = member_of(image(space.cluster_of(x)));
        if (used_pairs.insert(pack_pair(x, y)).second) return std::pair(x, y);
      }
    };
    auto sample_false_pair = [&]() {
      while (true) {
        EntityId x = any_entity(rng);
        EntityId y = any_entity(rng);
        if (x == y || space.cluster_of(y) == image(space.cluster_of(x))) continue;
        if (used_pairs.insert(pack_pair(x, y)).second) return std::pair(x, y);
      }
    };

    for (std::uint32_t i = 0; i < spec.observed_conclusions; ++i) {
      auto [x, y] = sample_true_pair();
      data.train.insert({x, body_rel[k], y});
      data.train.insert({x, head_rel[k], y});
    }
    for (std::uint32_t i = 0; i < spec.true_candidates; ++i) {
      auto [x, y] = sample_true_pair();
      data.train.insert({x, body_rel[k], y});
      data.held_out_true[k].push_back({x, head_rel[k], y});
    }
    for (std::uint32_t i = 0; i < spec.background_facts; ++i) {
      auto [x, y] = sample_true_pair();
      data.train.insert({x, head_rel[k], y});
    }
    for (std::uint32_t i = 0; i < config.valid_per_rule; ++i) {
      auto [x, y] = sample_true_pair();
      data.valid.push_back({x, head_rel[k], y});
    }
    for (std::uint32_t i = 0; i < config.test_per_rule; ++i) {
      auto [x, y] = sample_true_pair();
      data.test.push_back({x, head_rel[k], y});
    }
    for (std::uint32_t i = 0; i < spec.false_candidates; ++i) {
      auto [x, y] = sample_false_pair();
      data.train.insert({x, body_rel[k], y});
      data.planted_false[k].push_back({x, head_rel[k], y});
    }

    // Rule-derivable facts are part of the test set: promoting them is the
    // whole point of the iterative loop.
    for (const Triple& t : data.held_out_true[k]) data.test.push_back(t);

    HornRule rule{{Atom{body_rel[k], Var::X, Var::Y}},
                  Atom{head_rel[k], Var::X, Var::Y},
                  spec.confidence,
                  spec.observed_conclusions,
                  std::uint64_t(std::llround(spec.observed_conclusions / spec.confidence))};
    rule.validate(vocab->relation_count());
    data.rules.push_back(std::move(rule));
  }

  std::uniform_int_distribution<std::uint32_t> any_cluster(0, config.clusters - 1);
  for (std::uint32_t i = 0; i < config.peer_facts; ++i) {
    const std::uint32_t c = any_cluster(rng);
    EntityId x = member_of(c);
    EntityId y = member_of(c);
    if (x == y) continue;
    data.train.insert({x, peer_rel, y});
  }
  return data;
}

void save_synthetic(const SynthDataset& data, const std::string& dir) {
  data.train.save_tsv(dir + "/train.tsv");
  const Vocabulary& vocab = *data.vocab;

  auto write_split = [&](const std::vector<Triple>& triples, const std::string& path) {
    FileWriter out(path);
    for (const Triple& t : triples) {
      out.write(vocab.entity_name(t.head) + "\t" + vocab.relation_name(t.relation) +
                "\t" + vocab.entity_name(t.tail) + "\n");
    }
    out.commit();
  };
  write_split(data.valid, dir + "/valid.tsv");
  write_split(data.test, dir + "/test.tsv");
  serialize_rules(data.rules, vocab, dir + "/rules.txt");

  auto write_truth = [&](const std::vector<std::vector<Triple>>& per_rule,
                         const std::string& path) {
    FileWriter out(path);
    for (std::size_t k = 0; k < per_rule.size(); ++k) {
      for (const Triple& t : per_rule[k]) {
        out.write(std::to_string(k) + "\t" + vocab.entity_name(t.head) + "\t" +
                  vocab.relation_name(t.relation) + "\t" + vocab.entity_name(t.tail) +
                  "\n");
      }
    }
    out.commit();
  };
  write_truth(data.held_out_true, dir + "/truth_true.tsv");
  write_truth(data.planted_false, dir + "/truth_false.tsv");
}

}  // namespace iterlogic
