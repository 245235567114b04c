#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "manifold/belief.hpp"
#include "manifold/knowledge.hpp"
#include "manifold/pattern.hpp"

namespace manifold {

// The four cognitive transitions where filters intervene.
enum class Stage { assimilation, retrieval, reflection, planning };

const char* stage_name(Stage stage);
std::optional<Stage> stage_from_name(std::string_view name);

// ── Matchers ────────────────────────────────────────────────────────────

struct ContainsMatcher {
  std::string literal;  // non-empty after normalization
  bool operator==(const ContainsMatcher&) const = default;
};

struct PatternMatcher {
  Pattern pattern;
  bool operator==(const PatternMatcher&) const = default;
};

struct ConceptMatcher {
  std::string concept_name;
  bool operator==(const ConceptMatcher&) const = default;
};

struct ClassifierMatcher {
  std::string scorer;
  double threshold = 0.5;  // in [0,1]
  bool at_least = true;    // true: score >= threshold fires; false: score < threshold
  bool operator==(const ClassifierMatcher&) const = default;
};

enum class NumericCmp { lt, le, gt, ge, eq };

const char* numeric_cmp_name(NumericCmp cmp);

struct NumericMatcher {
  Pattern capture;  // must contain the (\d+) group
  NumericCmp cmp = NumericCmp::gt;
  // Compared against a literal bound or a budget value looked up in the
  // evaluation context. A text with no captured number never fires.
  std::variant<double, std::string> bound;
  bool operator==(const NumericMatcher&) const = default;
};

using Matcher =
    std::variant<ContainsMatcher, PatternMatcher, ConceptMatcher, ClassifierMatcher,
                 NumericMatcher>;

// ── Rule scoping and context ────────────────────────────────────────────

// Empty stage/sector sets mean wildcard. Level wildcard is the full range.
struct LevelRange {
  Level min = 0;
  Level max = kLevelMax;
  bool is_wildcard() const { return min == 0 && max == kLevelMax; }
  bool operator==(const LevelRange&) const = default;
};

struct Scope {
  std::set<Stage> stages;
  std::set<std::string> sectors;
  LevelRange levels;
  bool operator==(const Scope&) const = default;
};

enum class ContextPolarity { when, unless };

// Gate on the current active beliefs rather than the fragment itself:
// `when` requires some active text to match, `unless` requires none to.
// Only contains/pattern matchers are allowed here. An optional sector
// set restricts which active texts are considered.
struct ContextCondition {
  ContextPolarity polarity = ContextPolarity::when;
  Matcher matcher;  // ContainsMatcher or PatternMatcher only
  std::set<std::string> sectors;
  bool operator==(const ContextCondition&) const = default;
};

// ── Rules and verdicts ──────────────────────────────────────────────────

enum class RuleMode { whitelist, blacklist };

struct Action {
  enum class Kind { reject, quarantine, flag, downweight };
  Kind kind = Kind::reject;
  std::string label;    // flag only
  double factor = 0.5;  // downweight only, strictly in (0,1)
  bool operator==(const Action&) const = default;
};

struct FilterRule {
  std::string id;
  RuleMode mode = RuleMode::blacklist;
  Scope scope;
  Matcher matcher;
  std::vector<ContextCondition> context;
  std::optional<Action> action;  // blacklist only; whitelists have a fixed effect
  int priority = 0;
  bool operator==(const FilterRule&) const = default;
};

// Rules kept in evaluation order: descending priority, ties by ascending id.
class FilterSet {
 public:
  void add(FilterRule rule);  // throws Errc::duplicate_rule_id
  const std::vector<FilterRule>& rules() const { return rules_; }
  const FilterRule* find(std::string_view id) const;
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  bool operator==(const FilterSet& other) const { return rules_ == other.rules_; }

 private:
  std::vector<FilterRule> rules_;
};

FilterSet compose_filter_sets(const std::vector<FilterSet>& sets);

enum class VerdictOutcome { accept, reject, quarantine };
enum class VerdictReason { no_rule_matched, blacklist_terminal, whitelist_matched,
                           whitelist_unmatched };

const char* outcome_name(VerdictOutcome outcome);
const char* reason_name(VerdictReason reason);

struct Verdict {
  VerdictOutcome outcome = VerdictOutcome::accept;
  std::vector<std::string> flags;
  double confidence_factor = 1.0;  // product of applied down-weights, in (0,1]
  std::vector<std::string> matched_rules;
  VerdictReason reason = VerdictReason::no_rule_matched;
  bool operator==(const Verdict&) const = default;
};

// State a filter application may consult beyond the fragment itself.
struct EvaluationContext {
  struct ActiveText {
    std::string sector;
    std::string text;  // normalized
  };
  std::vector<ActiveText> active_texts;
  std::map<std::string, double> budgets;
  std::uint64_t cycle = 0;
};

// ── Declared contradictions (consumed by the reflective monitor) ────────

enum class ConflictResolve { quarantine_newer, downweight_newer, flag_only };

const char* conflict_resolve_name(ConflictResolve r);

struct ConflictDeclaration {
  std::string id;
  Matcher pattern_a;  // contains/pattern only
  Matcher pattern_b;
  ConflictResolve resolve = ConflictResolve::quarantine_newer;
  double factor = 0.5;  // downweight_newer only, strictly in (0,1)
  bool operator==(const ConflictDeclaration&) const = default;
};

// ── Operations ──────────────────────────────────────────────────────────

bool matches(const Matcher& matcher, const BeliefFragment& fragment,
             const EvaluationContext& ctx, const KnowledgeBase& knowledge);

bool in_scope(const FilterRule& rule, Stage stage, const Coordinate& coordinate);

// Deterministic composition semantics, applied to one fragment at one stage:
// walk rules in evaluation order, skipping rules that are out of scope or
// whose context conditions fail. A matching blacklist rule with
// reject/quarantine ends the walk with that outcome; flag/downweight rules
// accumulate and the walk continues; whitelist matches mark the fragment
// admitted and continue. After the walk, if any whitelist rule was in scope
// for this stage and coordinate and none matched, the fragment is rejected
// (whitelist-unmatched) — the whitelist is an admission requirement wherever
// one applies, whether or not its context held. Matcher errors carry the
// offending rule id.
Verdict apply_filters(const FilterSet& set, const BeliefFragment& fragment, Stage stage,
                      const EvaluationContext& ctx, const KnowledgeBase& knowledge);

}  // namespace manifold
