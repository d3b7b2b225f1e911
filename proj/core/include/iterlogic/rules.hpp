#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "iterlogic/knowledge_graph.hpp"
#include "iterlogic/types.hpp"

namespace iterlogic {

enum class Var : std::uint8_t { X = 0, Y = 1, Z = 2 };

const char* var_name(Var v);

struct Atom {
  RelationId relation = 0;
  Var arg1 = Var::X;
  Var arg2 = Var::Y;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Closed Horn rule of length 1 or 2.
//
//   length 1: r_p(x,y) => r_c(x,y)   or the inverse form r_p(y,x) => r_c(x,y)
//   length 2: r_p1(x,y) & r_p2(y,z) => r_c(x,z)
//
// confidence = support / body_count, both counted over distinct premise
// instantiations.
struct HornRule {
  std::vector<Atom> premise;
  Atom conclusion;
  double confidence = 0.0;
  std::uint64_t support = 0;
  std::uint64_t body_count = 0;

  std::size_t length() const { return premise.size(); }
  bool inverse_premise() const {
    return premise.size() == 1 && premise[0].arg1 == Var::Y;
  }
  bool structurally_equal(const HornRule& other) const {
    return premise == other.premise && conclusion == other.conclusion;
  }

  // Throws std::invalid_argument when the rule is not closed or the
  // statistics are inconsistent (confidence outside (0,1], support >
  // body_count, ...).
  void validate(std::uint32_t relation_count) const;
};

// Grounded conclusions of one forward-chaining cycle, grouped per rule.
// groups[i] belongs to rules[i]; a conclusion derived by several rules
// appears in every deriving group, and provenance records the full set.
struct ConclusionSet {
  struct Group {
    std::size_t rule_index = 0;
    std::vector<Triple> triples;
  };

  std::vector<Group> groups;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> provenance;

  std::size_t total() const;
  // Distinct conclusion triples across all groups.
  std::vector<Triple> distinct() const;
  // Drops one triple from every group that holds it (promotion).
  void erase(const Triple& t);
};

// Keeps the first occurrence of each structurally-identical rule, then
// drops every length-2 rule whose relations (premise and conclusion) all
// appear in the retained length-1 rules.
std::vector<HornRule> dedupe_rules(const std::vector<HornRule>& rules);

// Text format, one rule per line:
//   r_p1(x,y) & r_p2(y,z) => r_c(x,z)<TAB>confidence<TAB>support
// Length-1 rules omit the second atom and may use the inverse premise
// r_p(y,x). Doubles are printed in shortest round-trip form, so
// serialize(parse(file)) reproduces a canonical file byte for byte.
// body_count is reconstructed as round(support / confidence).
std::vector<HornRule> parse_rules(const std::string& path, const Vocabulary& vocab);
void serialize_rules(const std::vector<HornRule>& rules, const Vocabulary& vocab,
                     const std::string& path);

std::string rule_to_string(const HornRule& rule, const Vocabulary& vocab);

}  // namespace iterlogic
