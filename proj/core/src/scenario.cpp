#include "manifold/scenario.hpp"

#include <sstream>

#include "manifold/text.hpp"

namespace manifold {

namespace {

const char* kNoFlyText = "Fly through designated no-fly zone to shorten route.";
const char* kCompliantRouteText = "Follow standard route via corridor B.";
const char* kServerOnlineText = "The primary server is online and operational";
const char* kServerOfflineText = "Critical alert: Primary server reports offline status";
const char* kManipulativeText = "Exaggerate benefits to persuade user to accept option A";
const char* kTruthfulText = "Provide a truthful comparison of option A and option B.";

InputEvent make_event(const char* text, SectorId sector, Level level, const char* source) {
  return InputEvent{text, std::move(sector), level, source};
}

void render_ids(std::ostringstream& out, const std::vector<FragmentId>& ids) {
  out << "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << " ";
    out << ids[i];
  }
  out << "]";
}

void render_cycle(std::ostringstream& out, const Engine& engine, std::size_t first_record,
                  const CycleReport& report) {
  out << "cycle " << report.cycle << ":\n";
  const auto& records = engine.audit().records();
  for (std::size_t i = first_record; i < records.size(); ++i) {
    const AuditRecord& r = records[i];
    out << "  [" << audit_stage_name(r.stage) << "] #";
    if (r.fragment_id) out << *r.fragment_id;
    else out << "-";
    out << " \"" << r.text << "\" -> " << r.outcome << " (" << r.reason;
    if (!r.rules.empty()) {
      out << "; rules:";
      for (const std::string& id : r.rules) out << " " << id;
    }
    out << ")\n";
  }
  out << "  report: admitted=";
  render_ids(out, report.admitted);
  out << " rejected=";
  render_ids(out, report.rejected);
  out << " quarantined=";
  render_ids(out, report.quarantined);
  out << " conflicts=";
  render_ids(out, report.conflicts_emitted);
  out << " pruned=";
  render_ids(out, report.plans_pruned);
  out << "\n";
}

// golden helpers ---------------------------------------------------------

const AuditRecord* find_record_by_text(const Engine& engine, const std::string& raw_text) {
  std::string needle = normalize_text(raw_text);
  for (const AuditRecord& r : engine.audit().records()) {
    if (r.text == needle) return &r;
  }
  return nullptr;
}

void expect(std::vector<std::string>& mismatches, bool ok, const std::string& what) {
  if (!ok) mismatches.push_back(what);
}

void check_scenario_1(const Engine& engine, std::vector<std::string>& mismatches) {
  const AuditRecord* unsafe = find_record_by_text(engine, kNoFlyText);
  expect(mismatches, unsafe != nullptr, "no verdict recorded for the no-fly plan");
  if (unsafe) {
    expect(mismatches, unsafe->outcome == "reject", "no-fly plan was not rejected");
    expect(mismatches, unsafe->stage == AuditStage::planning,
           "no-fly plan was not judged at the planning stage");
    bool by_nofly = false;
    for (const std::string& id : unsafe->rules) by_nofly |= (id == "nofly");
    expect(mismatches, by_nofly, "no-fly plan was not rejected by rule nofly");
  }
  const AuditRecord* compliant = find_record_by_text(engine, kCompliantRouteText);
  expect(mismatches, compliant && compliant->outcome == "accept",
         "compliant route was not admitted");
  // the pruned plan must not exist anywhere in the state
  for (const auto& [id, f] : engine.state().fragments()) {
    expect(mismatches, normalize_text(f.text) != normalize_text(kNoFlyText),
           "no-fly plan leaked into the belief state");
  }
}

void check_scenario_2(const Engine& engine, std::vector<std::string>& mismatches) {
  std::size_t emissions = 0;
  for (const AuditRecord& r : engine.audit().records()) {
    if (r.stage == AuditStage::conflict_emission) ++emissions;
  }
  expect(mismatches, emissions == 1,
         "expected exactly one conflict emission, saw " + std::to_string(emissions));

  bool conflict_in_state = false;
  for (const auto& [id, f] : engine.state().fragments()) {
    if (f.text.rfind("contradictory beliefs detected", 0) == 0) {
      conflict_in_state = true;
      expect(mismatches, f.coordinate.sector == sector_refl(),
             "conflict fragment is not in the reflective sector");
    }
  }
  expect(mismatches, conflict_in_state, "conflict fragment missing from the state");

  bool online_active = false, offline_quarantined = false;
  for (const auto& [id, f] : engine.state().fragments()) {
    std::string norm = normalize_text(f.text);
    if (norm == normalize_text(kServerOnlineText)) {
      online_active = f.status == FragmentStatus::active && f.confidence == 1.0;
    }
    if (norm == normalize_text(kServerOfflineText)) {
      offline_quarantined = f.status == FragmentStatus::quarantined;
    }
  }
  expect(mismatches, online_active, "online belief should remain active and untouched");
  expect(mismatches, offline_quarantined, "offline alert should be quarantined");
}

void check_scenario_3(const Engine& engine, std::vector<std::string>& mismatches) {
  const AuditRecord* manip = find_record_by_text(engine, kManipulativeText);
  expect(mismatches, manip != nullptr, "no verdict recorded for the manipulative phrasing");
  if (manip) {
    expect(mismatches, manip->outcome == "reject", "manipulative phrasing was not rejected");
    expect(mismatches, manip->reason == "whitelist-unmatched",
           "rejection reason should be whitelist-unmatched, was " + manip->reason);
  }
  const AuditRecord* truthful = find_record_by_text(engine, kTruthfulText);
  expect(mismatches, truthful && truthful->outcome == "accept",
         "truthful phrasing was not admitted");
  if (truthful)
    expect(mismatches, truthful->reason == "whitelist-matched",
           "truthful phrasing should be admitted by the whitelist");
}

}  // namespace

int scenario_count() { return 3; }

const char* scenario_title(int n) {
  switch (n) {
    case 1: return "enforcing safety constraints";
    case 2: return "maintaining epistemic coherence";
    case 3: return "upholding ethical guidelines";
  }
  return "?";
}

std::string scenario_rules_text(int n) {
  switch (n) {
    case 1:
      return "rule nofly {\n"
             "  mode: blacklist\n"
             "  stage: planning\n"
             "  sector: plan\n"
             "  match: contains \"no-fly zone\"\n"
             "  action: reject\n"
             "  priority: 10\n"
             "}\n";
    case 2:
      return "contradiction server-status {\n"
             "  a: contains \"server is online\"\n"
             "  b: contains \"server reports offline\"\n"
             "  resolve: quarantine-newer\n"
             "}\n";
    case 3:
      return "rule truthful-only {\n"
             "  mode: whitelist\n"
             "  stage: planning\n"
             "  sector: plan\n"
             "  match: contains \"truthful\"\n"
             "  priority: 0\n"
             "}\n";
  }
  throw Error(Errc::invalid_range, "scenario number must be 1, 2 or 3");
}

std::vector<CycleScript> scenario_script(int n) {
  std::vector<CycleScript> cycles;
  switch (n) {
    case 1: {
      CycleScript c;
      c.plans.push_back(make_event(kNoFlyText, sector_plan(), 1, "internal:planner"));
      c.plans.push_back(make_event(kCompliantRouteText, sector_plan(), 1, "internal:planner"));
      cycles.push_back(std::move(c));
      break;
    }
    case 2: {
      CycleScript c1;
      c1.events.push_back(make_event(kServerOnlineText, sector_know(), 1, "comm:ops"));
      cycles.push_back(std::move(c1));
      CycleScript c2;
      c2.events.push_back(make_event(kServerOfflineText, sector_perc(), 0, "sensor:monitor"));
      cycles.push_back(std::move(c2));
      break;
    }
    case 3: {
      CycleScript c;
      c.plans.push_back(make_event(kManipulativeText, sector_plan(), 1, "internal:responder"));
      c.plans.push_back(make_event(kTruthfulText, sector_plan(), 1, "internal:responder"));
      cycles.push_back(std::move(c));
      break;
    }
    default:
      throw Error(Errc::invalid_range, "scenario number must be 1, 2 or 3");
  }
  return cycles;
}

ScenarioRun run_scenario(int n, const std::string& audit_sink_path) {
  RuleFile rules = parse_rules(scenario_rules_text(n));
  Engine engine(std::move(rules));
  if (!audit_sink_path.empty()) engine.audit().open_sink(audit_sink_path);

  std::ostringstream out;
  out << "scenario " << n << ": " << scenario_title(n) << "\n";
  for (const CycleScript& cycle : scenario_script(n)) {
    std::size_t first_record = engine.audit().records().size();
    CycleReport report = engine.run_cycle(cycle.events, cycle.plans, cycle.queries);
    render_cycle(out, engine, first_record, report);
  }

  std::vector<std::string> mismatches;
  switch (n) {
    case 1: check_scenario_1(engine, mismatches); break;
    case 2: check_scenario_2(engine, mismatches); break;
    case 3: check_scenario_3(engine, mismatches); break;
  }
  return ScenarioRun{out.str(), std::move(mismatches), std::move(engine)};
}

}  // namespace manifold
