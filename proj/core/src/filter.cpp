#include "manifold/filter.hpp"

#include <algorithm>
#include <charconv>

#include "manifold/text.hpp"

namespace manifold {

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::assimilation: return "assimilation";
    case Stage::retrieval: return "retrieval";
    case Stage::reflection: return "reflection";
    case Stage::planning: return "planning";
  }
  return "?";
}

std::optional<Stage> stage_from_name(std::string_view name) {
  if (name == "assimilation") return Stage::assimilation;
  if (name == "retrieval") return Stage::retrieval;
  if (name == "reflection") return Stage::reflection;
  if (name == "planning") return Stage::planning;
  return std::nullopt;
}

const char* numeric_cmp_name(NumericCmp cmp) {
  switch (cmp) {
    case NumericCmp::lt: return "<";
    case NumericCmp::le: return "<=";
    case NumericCmp::gt: return ">";
    case NumericCmp::ge: return ">=";
    case NumericCmp::eq: return "==";
  }
  return "?";
}

const char* outcome_name(VerdictOutcome outcome) {
  switch (outcome) {
    case VerdictOutcome::accept: return "accept";
    case VerdictOutcome::reject: return "reject";
    case VerdictOutcome::quarantine: return "quarantine";
  }
  return "?";
}

const char* reason_name(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::no_rule_matched: return "no-rule-matched";
    case VerdictReason::blacklist_terminal: return "blacklist-terminal";
    case VerdictReason::whitelist_matched: return "whitelist-matched";
    case VerdictReason::whitelist_unmatched: return "whitelist-unmatched";
  }
  return "?";
}

const char* conflict_resolve_name(ConflictResolve r) {
  switch (r) {
    case ConflictResolve::quarantine_newer: return "quarantine-newer";
    case ConflictResolve::downweight_newer: return "downweight-newer";
    case ConflictResolve::flag_only: return "flag-only";
  }
  return "?";
}

// ── FilterSet ───────────────────────────────────────────────────────────

namespace {

bool evaluation_order(const FilterRule& a, const FilterRule& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  return a.id < b.id;
}

}  // namespace

void FilterSet::add(FilterRule rule) {
  for (const FilterRule& existing : rules_) {
    if (existing.id == rule.id)
      throw Error(Errc::duplicate_rule_id, "duplicate rule id: " + rule.id);
  }
  auto it = std::upper_bound(rules_.begin(), rules_.end(), rule, evaluation_order);
  rules_.insert(it, std::move(rule));
}

const FilterRule* FilterSet::find(std::string_view id) const {
  for (const FilterRule& rule : rules_) {
    if (rule.id == id) return &rule;
  }
  return nullptr;
}

FilterSet compose_filter_sets(const std::vector<FilterSet>& sets) {
  FilterSet out;
  for (const FilterSet& set : sets) {
    for (const FilterRule& rule : set.rules()) out.add(rule);
  }
  return out;
}

// ── Matching ────────────────────────────────────────────────────────────

namespace {

bool matches_normalized(const Matcher& matcher, const std::string& norm_text,
                        const EvaluationContext& ctx, const KnowledgeBase& knowledge) {
  return std::visit(
      [&](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ContainsMatcher>) {
          std::string needle = normalize_text(m.literal);
          return !needle.empty() && norm_text.find(needle) != std::string::npos;
        } else if constexpr (std::is_same_v<T, PatternMatcher>) {
          return m.pattern.search(norm_text);
        } else if constexpr (std::is_same_v<T, ConceptMatcher>) {
          if (!knowledge.ontology.has(m.concept_name))
            throw Error(Errc::unknown_concept, "unknown concept: " + m.concept_name);
          for (const std::string& found : knowledge.lexicon.concepts_in(norm_text)) {
            if (knowledge.ontology.is_subsumed(found, m.concept_name)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, ClassifierMatcher>) {
          const KeywordScorer* scorer = knowledge.find_scorer(m.scorer);
          if (!scorer) throw Error(Errc::unknown_scorer, "unknown scorer: " + m.scorer);
          double score = scorer->score(norm_text);
          return m.at_least ? score >= m.threshold : score < m.threshold;
        } else {
          static_assert(std::is_same_v<T, NumericMatcher>);
          std::optional<std::string> digits = m.capture.capture_first(norm_text);
          if (!digits) return false;  // no number, no trigger
          double value = 0.0;
          auto [end, ec] = std::from_chars(digits->data(), digits->data() + digits->size(), value);
          (void)end;
          if (ec != std::errc()) return false;
          double bound;
          if (std::holds_alternative<double>(m.bound)) {
            bound = std::get<double>(m.bound);
          } else {
            const std::string& key = std::get<std::string>(m.bound);
            auto it = ctx.budgets.find(key);
            if (it == ctx.budgets.end())
              throw Error(Errc::unknown_budget_key, "unknown budget key: " + key);
            bound = it->second;
          }
          switch (m.cmp) {
            case NumericCmp::lt: return value < bound;
            case NumericCmp::le: return value <= bound;
            case NumericCmp::gt: return value > bound;
            case NumericCmp::ge: return value >= bound;
            case NumericCmp::eq: return value == bound;
          }
          return false;
        }
      },
      matcher);
}

bool context_matcher_hits(const Matcher& matcher, const std::string& active_text) {
  if (const auto* c = std::get_if<ContainsMatcher>(&matcher)) {
    std::string needle = normalize_text(c->literal);
    return !needle.empty() && active_text.find(needle) != std::string::npos;
  }
  if (const auto* p = std::get_if<PatternMatcher>(&matcher)) {
    return p->pattern.search(active_text);
  }
  return false;
}

bool condition_holds_somewhere(const ContextCondition& cond, const EvaluationContext& ctx) {
  for (const auto& at : ctx.active_texts) {
    if (!cond.sectors.empty() && !cond.sectors.count(at.sector)) continue;
    if (context_matcher_hits(cond.matcher, at.text)) return true;
  }
  return false;
}

bool context_satisfied(const FilterRule& rule, const EvaluationContext& ctx) {
  for (const ContextCondition& cond : rule.context) {
    bool hit = condition_holds_somewhere(cond, ctx);
    if (cond.polarity == ContextPolarity::when && !hit) return false;
    if (cond.polarity == ContextPolarity::unless && hit) return false;
  }
  return true;
}

}  // namespace

bool matches(const Matcher& matcher, const BeliefFragment& fragment,
             const EvaluationContext& ctx, const KnowledgeBase& knowledge) {
  return matches_normalized(matcher, normalize_text(fragment.text), ctx, knowledge);
}

bool in_scope(const FilterRule& rule, Stage stage, const Coordinate& coordinate) {
  const Scope& s = rule.scope;
  if (!s.stages.empty() && !s.stages.count(stage)) return false;
  if (!s.sectors.empty() && !s.sectors.count(coordinate.sector.name)) return false;
  if (coordinate.level < s.levels.min || coordinate.level > s.levels.max) return false;
  return true;
}

Verdict apply_filters(const FilterSet& set, const BeliefFragment& fragment, Stage stage,
                      const EvaluationContext& ctx, const KnowledgeBase& knowledge) {
  Verdict verdict;
  std::string norm_text = normalize_text(fragment.text);

  bool whitelist_in_scope = false;
  bool whitelist_matched = false;

  for (const FilterRule& rule : set.rules()) {
    if (!in_scope(rule, stage, fragment.coordinate)) continue;
    if (rule.mode == RuleMode::whitelist) whitelist_in_scope = true;
    if (!context_satisfied(rule, ctx)) continue;

    bool hit;
    try {
      hit = matches_normalized(rule.matcher, norm_text, ctx, knowledge);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (rule " + rule.id + ")");
    }
    if (!hit) continue;

    verdict.matched_rules.push_back(rule.id);
    if (rule.mode == RuleMode::whitelist) {
      whitelist_matched = true;
      continue;
    }
    const Action& action = *rule.action;
    switch (action.kind) {
      case Action::Kind::reject:
        verdict.outcome = VerdictOutcome::reject;
        verdict.reason = VerdictReason::blacklist_terminal;
        return verdict;
      case Action::Kind::quarantine:
        verdict.outcome = VerdictOutcome::quarantine;
        verdict.reason = VerdictReason::blacklist_terminal;
        return verdict;
      case Action::Kind::flag:
        verdict.flags.push_back(action.label);
        break;
      case Action::Kind::downweight:
        verdict.confidence_factor *= action.factor;
        break;
    }
  }

  if (whitelist_in_scope && !whitelist_matched) {
    verdict.outcome = VerdictOutcome::reject;
    verdict.reason = VerdictReason::whitelist_unmatched;
    return verdict;
  }
  verdict.outcome = VerdictOutcome::accept;
  verdict.reason = whitelist_matched ? VerdictReason::whitelist_matched
                                     : VerdictReason::no_rule_matched;
  return verdict;
}

}  // namespace manifold
