#include "iterlogic/rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "iterlogic/text.hpp"

namespace iterlogic {

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::Z: return "z";
  }
  return "?";
}

void HornRule::validate(std::uint32_t relation_count) const {
  if (premise.size() != 1 && premise.size() != 2) {
    throw std::invalid_argument("rule premise must have 1 or 2 atoms");
  }
  for (const Atom& a : premise) {
    if (a.relation >= relation_count) {
      throw std::invalid_argument("premise relation id out of vocabulary bounds");
    }
  }
  if (conclusion.relation >= relation_count) {
    throw std::invalid_argument("conclusion relation id out of vocabulary bounds");
  }
  if (premise.size() == 1) {
    bool straight = premise[0].arg1 == Var::X && premise[0].arg2 == Var::Y;
    bool inverse = premise[0].arg1 == Var::Y && premise[0].arg2 == Var::X;
    if (!straight && !inverse) {
      throw std::invalid_argument("length-1 premise must be r(x,y) or r(y,x)");
    }
    if (conclusion.arg1 != Var::X || conclusion.arg2 != Var::Y) {
      throw std::invalid_argument("length-1 conclusion must be r(x,y)");
    }
  } else {
    if (premise[0].arg1 != Var::X || premise[0].arg2 != Var::Y ||
        premise[1].arg1 != Var::Y || premise[1].arg2 != Var::Z) {
      throw std::invalid_argument("length-2 premise must be r1(x,y) & r2(y,z)");
    }
    if (conclusion.arg1 != Var::X || conclusion.arg2 != Var::Z) {
      throw std::invalid_argument("length-2 conclusion must be r(x,z)");
    }
  }
  if (!(confidence > 0.0) || confidence > 1.0) {
    throw std::invalid_argument("rule confidence must be in (0, 1]");
  }
  if (body_count > 0 && support > body_count) {
    throw std::invalid_argument("rule support exceeds body count");
  }
}

std::size_t ConclusionSet::total() const {
  std::size_t n = 0;
  for (const Group& g : groups) n += g.triples.size();
  return n;
}

std::vector<Triple> ConclusionSet::distinct() const {
  std::unordered_set<std::uint64_t> seen;
  std::vector<Triple> out;
  for (const Group& g : groups) {
    for (const Triple& t : g.triples) {
      if (seen.insert(pack_triple(t)).second) out.push_back(t);
    }
  }
  return out;
}

void ConclusionSet::erase(const Triple& t) {
  for (Group& g : groups) {
    auto it = std::find(g.triples.begin(), g.triples.end(), t);
    if (it != g.triples.end()) g.triples.erase(it);
  }
}

std::vector<HornRule> dedupe_rules(const std::vector<HornRule>& rules) {
  std::vector<HornRule> kept;
  for (const HornRule& r : rules) {
    bool dup = std::any_of(kept.begin(), kept.end(), [&](const HornRule& k) {
      return k.structurally_equal(r);
    });
    if (!dup) kept.push_back(r);
  }

  std::unordered_set<RelationId> short_relations;
  for (const HornRule& r : kept) {
    if (r.length() == 1) {
      short_relations.insert(r.premise[0].relation);
      short_relations.insert(r.conclusion.relation);
    }
  }

  std::vector<HornRule> out;
  for (HornRule& r : kept) {
    if (r.length() == 2 && short_relations.count(r.premise[0].relation) &&
        short_relations.count(r.premise[1].relation) &&
        short_relations.count(r.conclusion.relation)) {
      continue;
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string atom_to_string(const Atom& a, const Vocabulary& vocab) {
  std::string s = vocab.relation_name(a.relation);
  s += '(';
  s += var_name(a.arg1);
  s += ',';
  s += var_name(a.arg2);
  s += ')';
  return s;
}

Var parse_var(std::string_view name, const std::string& context) {
  if (name == "x") return Var::X;
  if (name == "y") return Var::Y;
  if (name == "z") return Var::Z;
  throw std::invalid_argument(context + ": unknown variable '" + std::string(name) + "'");
}

Atom parse_atom(std::string_view text, const Vocabulary& vocab, const std::string& context) {
  text = trim(text);
  std::size_t open = text.rfind('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw std::invalid_argument(context + ": malformed atom '" + std::string(text) + "'");
  }
  std::string_view name = text.substr(0, open);
  std::string_view args = text.substr(open + 1, text.size() - open - 2);
  auto parts = split(args, ',');
  if (parts.size() != 2) {
    throw std::invalid_argument(context + ": atom needs two variables");
  }
  auto rel = vocab.find_relation(name);
  if (!rel) {
    throw std::invalid_argument(context + ": unknown relation '" + std::string(name) + "'");
  }
  return Atom{*rel, parse_var(trim(parts[0]), context), parse_var(trim(parts[1]), context)};
}

}  // namespace

std::string rule_to_string(const HornRule& rule, const Vocabulary& vocab) {
  std::string s;
  for (std::size_t i = 0; i < rule.premise.size(); ++i) {
    if (i > 0) s += " & ";
    s += atom_to_string(rule.premise[i], vocab);
  }
  s += " => ";
  s += atom_to_string(rule.conclusion, vocab);
  return s;
}

std::vector<HornRule> parse_rules(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file: " + path);

  std::vector<HornRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const std::string context = path + ":" + std::to_string(line_no);

    auto fields = split(view, '\t');
    if (fields.size() != 3) {
      throw std::invalid_argument(context + ": expected 'rule<TAB>confidence<TAB>support'");
    }
    std::string_view rule_text = fields[0];
    std::size_t arrow = rule_text.find("=>");
    if (arrow == std::string_view::npos) {
      throw std::invalid_argument(context + ": missing '=>'");
    }

    HornRule rule;
    for (std::string_view atom_text : split(rule_text.substr(0, arrow), '&')) {
      rule.premise.push_back(parse_atom(atom_text, vocab, context));
    }
    rule.conclusion = parse_atom(rule_text.substr(arrow + 2), vocab, context);
    rule.confidence = parse_double(trim(fields[1]));
    rule.support = parse_uint(trim(fields[2]));
    if (!(rule.confidence > 0.0) || rule.confidence > 1.0) {
      throw std::invalid_argument(context + ": confidence must be in (0, 1]");
    }
    // The format carries confidence and support; the denominator is implied.
    rule.body_count = std::uint64_t(std::llround(double(rule.support) / rule.confidence));
    rule.validate(vocab.relation_count());
    rules.push_back(std::move(rule));
  }
  return rules;
}

void serialize_rules(const std::vector<HornRule>& rules, const Vocabulary& vocab,
                     const std::string& path) {
  FileWriter out(path);
  for (const HornRule& rule : rules) {
    out.write(rule_to_string(rule, vocab) + "\t" + format_double(rule.confidence) +
              "\t" + std::to_string(rule.support) + "\n");
  }
  out.commit();
}

}  // namespace iterlogic
