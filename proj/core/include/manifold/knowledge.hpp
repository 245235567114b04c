#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "manifold/errors.hpp"

namespace manifold {

// Concept taxonomy with is-a subsumption. Multiple parents allowed;
// cycles rejected at load time.
class Ontology {
 public:
  void add_concept(std::string name);
  // Throws ParseError-free Error(Errc::unknown_concept) for undeclared
  // endpoints; returns false if the edge would close a cycle.
  bool add_is_a(const std::string& child, const std::string& parent);

  bool has(std::string_view name) const { return concepts_.count(std::string(name)) > 0; }

  // True iff ancestor is reachable from concept via is-a edges, or the
  // names are equal. Throws Errc::unknown_concept for undeclared names.
  bool is_subsumed(const std::string& concept_name, const std::string& ancestor) const;

  const std::set<std::string>& concepts() const { return concepts_; }
  const std::map<std::string, std::set<std::string>>& parents() const { return parents_; }

 private:
  bool reachable(const std::string& from, const std::string& to) const;

  std::set<std::string> concepts_;
  std::map<std::string, std::set<std::string>> parents_;
};

// Phrase -> concept lookup. Phrases are stored normalized; every
// referenced concept must exist in the companion ontology.
class Lexicon {
 public:
  void add_term(std::string_view phrase, std::set<std::string> concept_names);

  // Union of concept sets for every phrase occurring as a substring of
  // the normalized text. All matches contribute; no longest-match rule.
  std::set<std::string> concepts_in(std::string_view text) const;

  const std::map<std::string, std::set<std::string>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::set<std::string>> entries_;
};

// Fixed-weight bag-of-words stand-in for a text classifier. Duplicate
// tokens count once, so repetition padding does not move the score.
struct KeywordScorer {
  std::string name;
  std::map<std::string, double> weights;
  double bias = 0.0;

  // clamp(bias + sum of weights over distinct tokens, 0, 1)
  double score(std::string_view text) const;
};

// Everything filter matchers may consult: taxonomy, term lexicon, and
// named scorers. Immutable after load; safe to share between engines.
struct KnowledgeBase {
  Ontology ontology;
  Lexicon lexicon;
  std::map<std::string, KeywordScorer> scorers;

  const KeywordScorer* find_scorer(std::string_view name) const;

  // Line-oriented knowledge file:
  //   concept <name>
  //   isa <child> <parent>
  //   term "<phrase>" -> <concept>[,<concept>...]
  //   scorer <name> bias <real>
  //   w <token> <real>            (attaches to the preceding scorer)
  // '#' starts a comment. Throws ParseError with position on bad input.
  static KnowledgeBase parse(std::string_view source);
  static KnowledgeBase load(const std::string& path);
};

}  // namespace manifold
