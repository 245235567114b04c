#include "manifold/engine.hpp"

#include <algorithm>
#include <tuple>

#include "manifold/text.hpp"

namespace manifold {

namespace {

const char* kReflectionSource = "internal:reflection";
const char* kFilterNoteSource = "internal:filter";

void erase_id(std::vector<FragmentId>& list, FragmentId id) {
  list.erase(std::remove(list.begin(), list.end(), id), list.end());
}

}  // namespace

Engine::Engine(RuleFile config, std::shared_ptr<const KnowledgeBase> knowledge)
    : config_(std::move(config)),
      knowledge_(knowledge ? std::move(knowledge)
                           : std::make_shared<const KnowledgeBase>()) {}

EvaluationContext Engine::make_context() const {
  EvaluationContext ctx;
  ctx.cycle = state_.current_cycle();
  ctx.budgets = config_.budgets;
  for (const auto& [id, f] : state_.fragments()) {
    if (f.status != FragmentStatus::active) continue;
    ctx.active_texts.push_back({f.coordinate.sector.name, normalize_text(f.text)});
  }
  return ctx;
}

void Engine::set_fragment_status(FragmentId id, FragmentStatus status) {
  bool known = false;
  if (state_.contains(id)) {
    state_.update_fragment(id, status, std::nullopt);
    known = true;
  }
  if (memory_.contains(id)) {
    memory_.set_status(id, status);
    known = true;
  }
  if (!known) throw Error(Errc::unknown_id, "unknown fragment id: " + std::to_string(id));
}

void Engine::scale_fragment_confidence(FragmentId id, double factor) {
  bool known = false;
  if (state_.contains(id)) {
    state_.update_fragment(id, std::nullopt, factor);
    known = true;
  }
  if (memory_.contains(id)) {
    memory_.scale_confidence(id, factor);
    known = true;
  }
  if (!known) throw Error(Errc::unknown_id, "unknown fragment id: " + std::to_string(id));
}

void Engine::audit_decision(AuditStage stage, std::optional<FragmentId> id,
                            const BeliefFragment& fragment, const Verdict& verdict) {
  AuditRecord rec;
  rec.cycle = state_.current_cycle();
  rec.stage = stage;
  rec.fragment_id = id;
  rec.text = normalize_text(fragment.text);
  rec.coordinate = fragment.coordinate;
  rec.outcome = outcome_name(verdict.outcome);
  rec.rules = verdict.matched_rules;
  rec.reason = reason_name(verdict.reason);
  audit_.append(std::move(rec));
}

// ── Assimilation ────────────────────────────────────────────────────────

Engine::AssimilationOutcome Engine::assimilate_impl(const InputEvent& event,
                                                    CycleReport* report) {
  FragmentId id = state_.allocate_id();
  BeliefFragment f = build_fragment(id, event.text, {event.sector, event.level},
                                    event.source, config_.trust, state_.current_cycle());
  EvaluationContext ctx = make_context();
  Verdict verdict =
      apply_filters(config_.filter_set, f, Stage::assimilation, ctx, *knowledge_);

  // Record before applying: no decision without a durable record. A
  // rejection is logged under the rejection-note pseudo-stage — the one
  // record both rejects the fragment and routes it to reflection.
  AuditStage stage = verdict.outcome == VerdictOutcome::reject ? AuditStage::rejection_note
                                                               : AuditStage::assimilation;
  audit_decision(stage, id, f, verdict);

  switch (verdict.outcome) {
    case VerdictOutcome::accept: {
      f.confidence *= verdict.confidence_factor;
      state_.insert(f);
      memory_.insert(f);
      if (report) report->admitted.push_back(id);
      break;
    }
    case VerdictOutcome::quarantine: {
      f.status = FragmentStatus::quarantined;
      f.confidence *= verdict.confidence_factor;
      state_.insert(std::move(f));
      if (report) report->quarantined.push_back(id);
      break;
    }
    case VerdictOutcome::reject: {
      std::string rule_ref =
          (verdict.reason == VerdictReason::blacklist_terminal && !verdict.matched_rules.empty())
              ? verdict.matched_rules.back()
              : reason_name(verdict.reason);
      FragmentId note_id = state_.allocate_id();
      BeliefFragment note =
          build_fragment(note_id, "rejected at assimilation: " + rule_ref,
                         {sector_refl(), 1}, kFilterNoteSource, config_.trust,
                         state_.current_cycle());
      state_.insert(std::move(note));
      if (report) report->rejected.push_back(id);
      break;
    }
  }
  return {std::move(verdict), id};
}

Verdict Engine::assimilate(const InputEvent& event) {
  return assimilate_impl(event, nullptr).verdict;
}

// ── Filtered retrieval ──────────────────────────────────────────────────

std::vector<BeliefFragment> Engine::retrieve_impl(std::string_view query, std::size_t limit,
                                                  CycleReport* report) {
  if (limit < 1) throw Error(Errc::invalid_range, "retrieval limit must be >= 1");
  std::vector<BeliefFragment> admitted;
  for (const BeliefFragment& original : memory_.retrieve(query, limit)) {
    FragmentId id = state_.allocate_id();
    BeliefFragment candidate;
    candidate.id = id;
    candidate.text = original.text;
    candidate.coordinate = original.coordinate;
    candidate.confidence = original.confidence;
    candidate.source = "memory:" + std::to_string(original.id);
    candidate.status = FragmentStatus::active;
    candidate.created_cycle = state_.current_cycle();

    // context rebuilt per candidate so earlier admissions count
    EvaluationContext ctx = make_context();
    Verdict verdict =
        apply_filters(config_.filter_set, candidate, Stage::retrieval, ctx, *knowledge_);
    audit_decision(AuditStage::retrieval, id, candidate, verdict);

    if (verdict.outcome == VerdictOutcome::accept) {
      candidate.confidence = original.confidence * verdict.confidence_factor;
      state_.insert(candidate);
      admitted.push_back(std::move(candidate));
      if (report) report->admitted.push_back(id);
    } else if (report) {
      if (verdict.outcome == VerdictOutcome::quarantine)
        report->quarantined.push_back(id);
      else
        report->rejected.push_back(id);
    }
  }
  return admitted;
}

std::vector<BeliefFragment> Engine::retrieve_filtered(std::string_view query,
                                                      std::size_t limit) {
  return retrieve_impl(query, limit, nullptr);
}

// ── Reflective monitoring ───────────────────────────────────────────────

std::vector<FragmentId> Engine::reflect_impl(CycleReport* report) {
  std::vector<FragmentId> emitted;

  // pair universe fixed at call start; status checked live
  std::vector<FragmentId> snapshot;
  snapshot.reserve(state_.fragments().size());
  for (const auto& [id, f] : state_.fragments()) snapshot.push_back(id);

  EvaluationContext empty_ctx;
  auto is_active = [&](FragmentId id) {
    const BeliefFragment* f = state_.find(id);
    return f && f->status == FragmentStatus::active;
  };

  std::set<std::tuple<std::string, FragmentId, FragmentId>> fired;

  for (const ConflictDeclaration& decl : config_.contradictions) {
    for (FragmentId x_id : snapshot) {
      if (!is_active(x_id)) continue;
      const BeliefFragment* x = state_.find(x_id);
      if (!matches(decl.pattern_a, *x, empty_ctx, *knowledge_)) continue;
      for (FragmentId y_id : snapshot) {
        if (y_id == x_id) continue;
        if (!is_active(x_id)) break;  // a resolution may have removed x mid-scan
        if (!is_active(y_id)) continue;
        const BeliefFragment* y = state_.find(y_id);
        if (!matches(decl.pattern_b, *y, empty_ctx, *knowledge_)) continue;

        auto key = std::make_tuple(decl.id, std::min(x_id, y_id), std::max(x_id, y_id));
        if (!fired.insert(key).second) continue;

        // emission: the conflict note is itself filtered at reflection
        FragmentId conflict_id = state_.allocate_id();
        std::string text = "contradictory beliefs detected: " + std::to_string(x_id) +
                           " vs " + std::to_string(y_id) + " (" + decl.id + ")";
        BeliefFragment note =
            build_fragment(conflict_id, text, {sector_refl(), 1}, kReflectionSource,
                           config_.trust, state_.current_cycle());
        EvaluationContext ctx = make_context();
        Verdict verdict =
            apply_filters(config_.filter_set, note, Stage::reflection, ctx, *knowledge_);
        audit_decision(AuditStage::conflict_emission, conflict_id, note, verdict);
        if (verdict.outcome == VerdictOutcome::accept) {
          note.confidence *= verdict.confidence_factor;
          state_.insert(std::move(note));
        }
        emitted.push_back(conflict_id);
        if (report) report->conflicts_emitted.push_back(conflict_id);

        // resolution lands on the newer of the pair
        const BeliefFragment* fx = state_.find(x_id);
        const BeliefFragment* fy = state_.find(y_id);
        FragmentId newer_id;
        if (fx->created_cycle != fy->created_cycle)
          newer_id = fx->created_cycle > fy->created_cycle ? x_id : y_id;
        else
          newer_id = std::max(x_id, y_id);
        const BeliefFragment* newer = state_.find(newer_id);

        if (decl.resolve == ConflictResolve::quarantine_newer) {
          AuditRecord rec;
          rec.cycle = state_.current_cycle();
          rec.stage = AuditStage::conflict_resolution;
          rec.fragment_id = newer_id;
          rec.text = normalize_text(newer->text);
          rec.coordinate = newer->coordinate;
          rec.outcome = "quarantine";
          rec.rules = {decl.id};
          rec.reason = "quarantine-newer";
          audit_.append(std::move(rec));
          set_fragment_status(newer_id, FragmentStatus::quarantined);
          if (report) {
            erase_id(report->admitted, newer_id);
            report->quarantined.push_back(newer_id);
          }
        } else if (decl.resolve == ConflictResolve::downweight_newer) {
          AuditRecord rec;
          rec.cycle = state_.current_cycle();
          rec.stage = AuditStage::conflict_resolution;
          rec.fragment_id = newer_id;
          rec.text = normalize_text(newer->text);
          rec.coordinate = newer->coordinate;
          rec.outcome = "downweight";
          rec.rules = {decl.id};
          rec.reason = "downweight-newer";
          audit_.append(std::move(rec));
          scale_fragment_confidence(newer_id, decl.factor);
        }
        // flag-only: the emission is the whole effect
      }
    }
  }
  return emitted;
}

std::vector<FragmentId> Engine::reflect() { return reflect_impl(nullptr); }

// ── Plan filtering ──────────────────────────────────────────────────────

std::vector<BeliefFragment> Engine::plan_impl(const std::vector<InputEvent>& candidates,
                                              CycleReport* report) {
  for (const InputEvent& c : candidates) {
    if (c.sector.name != SectorId::kPlan)
      throw Error(Errc::non_plan_sector,
                  "plan candidate in sector \"" + c.sector.name + "\"");
  }
  std::vector<BeliefFragment> admitted;
  for (const InputEvent& c : candidates) {
    FragmentId id = state_.allocate_id();
    BeliefFragment f = build_fragment(id, c.text, {c.sector, c.level}, c.source,
                                      config_.trust, state_.current_cycle());
    EvaluationContext ctx = make_context();
    Verdict verdict =
        apply_filters(config_.filter_set, f, Stage::planning, ctx, *knowledge_);
    audit_decision(AuditStage::planning, id, f, verdict);
    if (verdict.outcome == VerdictOutcome::accept) {
      f.confidence *= verdict.confidence_factor;
      state_.insert(f);
      admitted.push_back(f);
      if (report) report->admitted.push_back(id);
    } else if (report) {
      report->plans_pruned.push_back(id);
    }
  }
  return admitted;
}

std::vector<BeliefFragment> Engine::plan_filter(const std::vector<InputEvent>& candidates) {
  return plan_impl(candidates, nullptr);
}

// ── Cycle orchestration ─────────────────────────────────────────────────

CycleReport Engine::run_cycle(const std::vector<InputEvent>& events,
                              const std::vector<InputEvent>& plan_candidates,
                              const std::vector<std::string>& queries) {
  state_.advance_cycle();
  CycleReport report;
  report.cycle = state_.current_cycle();

  for (const InputEvent& event : events) {
    try {
      assimilate_impl(event, &report);
    } catch (const Error& e) {
      if (e.code() != Errc::sink_write_failure) {
        AuditRecord rec;
        rec.cycle = state_.current_cycle();
        rec.stage = AuditStage::assimilation;
        rec.text = normalize_text(event.text);
        rec.coordinate = {event.sector, event.level};
        rec.outcome = "error";
        rec.reason = e.what();
        audit_.append(std::move(rec));
      }
      throw;
    }
  }
  for (const std::string& query : queries) retrieve_impl(query, retrieval_limit_, &report);
  reflect_impl(&report);
  plan_impl(plan_candidates, &report);
  return report;
}

}  // namespace manifold
