#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "manifold/engine.hpp"

namespace manifold {

// Belief corpus: UTF-8, one JSON object per line with keys text, sector,
// level, source and optional confidence. Unknown keys are rejected.
// Records land in the engine's long-term memory store; the active state
// is built up by events.
void load_corpus(Engine& engine, const std::string& path);
void parse_corpus_into(Engine& engine, std::string_view source, const std::string& origin);

// One cycle's worth of input records.
struct CycleScript {
  std::vector<InputEvent> events;
  std::vector<InputEvent> plans;
  std::vector<std::string> queries;
};

// Event stream: corpus record format plus a "kind" key (event|plan|query);
// query records carry only text. A blank line ends a cycle. Sections with
// no records are skipped.
std::vector<CycleScript> parse_event_stream(std::string_view source,
                                            const std::string& origin);
std::vector<CycleScript> load_event_stream(const std::string& path);

// Engine state dump, the persisted form `quarantine` operates on. One
// header line {"store":"engine","cycle":...,"next_id":...} followed by one
// line per fragment with keys store (state|memory), id, text, sector,
// level, source, confidence, status, created_cycle.
void save_state_dump(const Engine& engine, const std::string& path);
void load_state_dump(Engine& engine, const std::string& path);

}  // namespace manifold
