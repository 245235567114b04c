#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "manifold/filter.hpp"

namespace manifold {

// Parsed filter configuration: rules, declared contradictions, budgets,
// and source trust entries. Cross-references (scorer/concept names) are
// captured syntactically here and checked against a knowledge base by
// link_check.
struct RuleFile {
  FilterSet filter_set;
  std::vector<ConflictDeclaration> contradictions;
  std::map<std::string, double> budgets;
  SourceTrustTable trust;

  bool operator==(const RuleFile&) const = default;
};

// Total parser: every input yields a RuleFile or throws ParseError with a
// position on the offending token. No error recovery — the first problem
// aborts, a partially accepted filter config is worse than none.
//
// Grammar sketch (full EBNF in docs/rule-dsl.md):
//   rule <id> { mode: whitelist|blacklist  stage: <list>|*  sector: <list>|*
//               level: <a>..<b> | <a>..* | *
//               match: contains "…" | pattern "…" | concept <name>
//                    | classifier <name> >=|< <real>
//                    | numeric "…(\d+)…" <cmp> (<real> | budget <key>)
//               when-context: [sector <list>] contains|pattern "…"
//               unless-context: …
//               action: reject|quarantine|flag "…"|downweight <real>
//               priority: <int> }
//   contradiction <id> { a: … b: … resolve: quarantine-newer
//                        | downweight-newer <real> | flag-only }
//   budget <key> <real>
//   trust "<source-prefix>" <real>
RuleFile parse_rules(std::string_view source);

// Canonical text: rules in evaluation order, defaults written out, fixed
// field order and whitespace. parse_rules(serialize_rules(f)) is
// structurally equal to f. The empty RuleFile serializes to "".
std::string serialize_rules(const RuleFile& file);

// Existence checks the parser cannot do alone: scorer and concept names
// against a knowledge base, budget keys against the file's own budget
// table. Returns one message per problem, empty when clean.
std::vector<std::string> link_check(const RuleFile& file, const KnowledgeBase& knowledge);

RuleFile load_rules(const std::string& path);

}  // namespace manifold
