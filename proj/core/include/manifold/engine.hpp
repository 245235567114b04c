#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "manifold/audit.hpp"
#include "manifold/belief.hpp"
#include "manifold/rules.hpp"

namespace manifold {

// New information arriving from a sensor, a peer, or an internal process.
struct InputEvent {
  std::string text;
  SectorId sector;
  Level level = 0;
  std::string source;
};

// Per-cycle outcome summary. The five lists are pairwise disjoint; a
// fragment admitted and then quarantined within the same cycle moves to
// the quarantined list. Ids of suppressed retrieval/plan candidates are
// provisional (the fragment never entered the state).
struct CycleReport {
  std::uint64_t cycle = 0;
  std::vector<FragmentId> admitted;
  std::vector<FragmentId> rejected;
  std::vector<FragmentId> quarantined;
  std::vector<FragmentId> conflicts_emitted;
  std::vector<FragmentId> plans_pruned;
};

// One agent's filtered cognitive loop: belief state, long-term memory,
// filter configuration, and the audit log, driven cycle by cycle.
// Single-threaded by design; distinct engines may share one immutable
// knowledge base.
class Engine {
 public:
  Engine(RuleFile config, std::shared_ptr<const KnowledgeBase> knowledge = nullptr);

  // Gatekeeper for incoming data. Accepted fragments become active and
  // are stored to memory; quarantined ones sit inert in the state;
  // rejected ones never enter the state but leave a reflective note at
  // (refl, 1). Exactly one audit record per call.
  Verdict assimilate(const InputEvent& event);

  // Memory candidates ranked by token overlap, each filtered at the
  // retrieval stage against the current active beliefs. Admitted
  // candidates re-enter the state under fresh ids with provenance
  // source "memory:<original id>".
  std::vector<BeliefFragment> retrieve_filtered(std::string_view query, std::size_t limit);

  // Scans active fragments against the declared contradictions. Each
  // firing emits a conflict fragment at (refl, 1) (itself filtered at
  // the reflection stage) and applies the declaration's resolution to
  // the newer of the pair. A given unordered pair fires a declaration
  // at most once per call; fragments emitted during the call do not
  // join pairs until the next call. Returns ids of emitted conflicts.
  std::vector<FragmentId> reflect();

  // Guardrail on candidate plans. All candidates must sit in the plan
  // sector. Suppressed candidates are audited and dropped silently (no
  // reflective note — plans are hypothetical). Returns admitted
  // fragments in input order.
  std::vector<BeliefFragment> plan_filter(const std::vector<InputEvent>& candidates);

  // Advances the cycle counter, then: assimilate every event, run every
  // retrieval query, reflect, filter plan candidates. A failing event
  // aborts the cycle after auditing the failure.
  CycleReport run_cycle(const std::vector<InputEvent>& events,
                        const std::vector<InputEvent>& plan_candidates,
                        const std::vector<std::string>& queries);

  // Status and confidence changes routed through the engine touch both
  // the active state and the memory copy, so quarantine keeps a belief
  // out of retrieval as well.
  void set_fragment_status(FragmentId id, FragmentStatus status);
  void scale_fragment_confidence(FragmentId id, double factor);

  EvaluationContext make_context() const;

  BeliefState& state() { return state_; }
  const BeliefState& state() const { return state_; }
  MemoryStore& memory() { return memory_; }
  const MemoryStore& memory() const { return memory_; }
  AuditLog& audit() { return audit_; }
  const AuditLog& audit() const { return audit_; }
  const RuleFile& config() const { return config_; }
  const KnowledgeBase& knowledge() const { return *knowledge_; }

  std::size_t retrieval_limit() const { return retrieval_limit_; }
  void set_retrieval_limit(std::size_t limit) { retrieval_limit_ = limit; }

 private:
  struct AssimilationOutcome {
    Verdict verdict;
    FragmentId id = 0;
  };

  AssimilationOutcome assimilate_impl(const InputEvent& event, CycleReport* report);
  std::vector<BeliefFragment> retrieve_impl(std::string_view query, std::size_t limit,
                                            CycleReport* report);
  std::vector<FragmentId> reflect_impl(CycleReport* report);
  std::vector<BeliefFragment> plan_impl(const std::vector<InputEvent>& candidates,
                                        CycleReport* report);

  void audit_decision(AuditStage stage, std::optional<FragmentId> id,
                      const BeliefFragment& fragment, const Verdict& verdict);

  RuleFile config_;
  std::shared_ptr<const KnowledgeBase> knowledge_;
  BeliefState state_;
  MemoryStore memory_;
  AuditLog audit_;
  std::size_t retrieval_limit_ = 5;
};

}  // namespace manifold
