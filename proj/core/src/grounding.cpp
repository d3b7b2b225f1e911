#include "iterlogic/grounding.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <unordered_set>

namespace iterlogic {

namespace {

std::vector<Triple> ground_one(const KnowledgeGraph& kg, const HornRule& rule) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<Triple> out;
  auto consider = [&](EntityId x, EntityId target_y_or_z) {
    Triple c{x, rule.conclusion.relation, target_y_or_z};
    if (kg.contains(c)) return;
    if (seen.insert(pack_triple(c)).second) out.push_back(c);
  };

  if (rule.length() == 1) {
    const bool inverse = rule.inverse_premise();
    for (const auto& [a, b] : kg.pairs_of(rule.premise[0].relation)) {
      if (inverse) {
        consider(b, a);  // premise (y,r_p,x): y=a, x=b
      } else {
        consider(a, b);
      }
    }
  } else {
    for (const auto& [x, y, z] :
         kg.join_pairs(rule.premise[0].relation, rule.premise[1].relation)) {
      consider(x, z);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ConclusionSet ground_rules(const KnowledgeGraph& kg, const std::vector<HornRule>& rules,
                           unsigned workers) {
  for (const HornRule& rule : rules) {
    rule.validate(kg.relation_count());
  }

  ConclusionSet set;
  set.groups.resize(rules.size());

  if (workers > 1 && rules.size() > 1) {
    const std::size_t n_jobs = std::min<std::size_t>(workers, rules.size());
    std::vector<std::future<void>> jobs;
    jobs.reserve(n_jobs);
    for (std::size_t w = 0; w < n_jobs; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < rules.size(); i += n_jobs) {
          set.groups[i] = {i, ground_one(kg, rules[i])};
        }
      }));
    }
    for (auto& job : jobs) job.get();
  } else {
    for (std::size_t i = 0; i < rules.size(); ++i) {
      set.groups[i] = {i, ground_one(kg, rules[i])};
    }
  }

  for (const auto& group : set.groups) {
    for (const Triple& t : group.triples) {
      set.provenance[pack_triple(t)].push_back(group.rule_index);
    }
  }
  return set;
}

}  // namespace iterlogic
