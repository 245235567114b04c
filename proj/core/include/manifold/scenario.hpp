#pragma once

#include <string>
#include <vector>

#include "manifold/corpus.hpp"
#include "manifold/engine.hpp"

namespace manifold {

// Self-contained replay fixtures for the three worked situations the
// engine is built around: a planning blacklist pruning a no-fly route, a
// declared contradiction quarantining a conflicting alert, and a
// planning whitelist excluding manipulative phrasing. No clock, no
// randomness — transcripts are byte-deterministic.
struct ScenarioRun {
  std::string transcript;              // fragment-by-fragment verdicts per cycle
  std::vector<std::string> mismatches; // empty when the golden outcomes hold
  Engine engine;                       // final state, for inspection

  bool golden_ok() const { return mismatches.empty(); }
};

int scenario_count();
const char* scenario_title(int n);

// Rule file text and input script for scenario n in 1..3 (exposed so the
// fixtures can be inspected and re-parsed in tests).
std::string scenario_rules_text(int n);
std::vector<CycleScript> scenario_script(int n);

// Runs scenario n; optionally streams the audit log to audit_sink_path.
ScenarioRun run_scenario(int n, const std::string& audit_sink_path = "");

}  // namespace manifold
