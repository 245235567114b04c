#include "manifold/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace manifold {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_line(const std::string& origin, int line_no, const std::string& what) {
  throw Error(Errc::io_error, origin + " line " + std::to_string(line_no) + ": " + what);
}

ordered_json parse_line(const std::string& origin, int line_no, std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) bad_line(origin, line_no, "malformed JSON record");
  if (!j.is_object()) bad_line(origin, line_no, "record must be a JSON object");
  return j;
}

void check_keys(const std::string& origin, int line_no, const ordered_json& j,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      bad_line(origin, line_no, "unknown key \"" + it.key() + "\"");
  }
}

std::string require_string(const std::string& origin, int line_no, const ordered_json& j,
                           const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    bad_line(origin, line_no, std::string("missing string key \"") + key + "\"");
  return j.at(key).get<std::string>();
}

Level require_level(const std::string& origin, int line_no, const ordered_json& j) {
  if (!j.contains("level") || !j.at("level").is_number_integer())
    bad_line(origin, line_no, "missing integer key \"level\"");
  auto v = j.at("level").get<std::int64_t>();
  if (v < 0) bad_line(origin, line_no, "level must be non-negative");
  return static_cast<Level>(std::min<std::int64_t>(v, kLevelMax));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

void parse_corpus_into(Engine& engine, std::string_view source, const std::string& origin) {
  static const std::set<std::string> allowed = {"text", "sector", "level", "source",
                                                "confidence"};
  std::istringstream in{std::string(source)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    ordered_json j = parse_line(origin, line_no, line);
    check_keys(origin, line_no, j, allowed);
    std::string text = require_string(origin, line_no, j, "text");
    SectorId sector = SectorId::checked(require_string(origin, line_no, j, "sector"));
    Level level = require_level(origin, line_no, j);
    std::string src = require_string(origin, line_no, j, "source");

    FragmentId id = engine.state().allocate_id();
    BeliefFragment f = build_fragment(id, text, {sector, level}, src,
                                      engine.config().trust, engine.state().current_cycle());
    if (j.contains("confidence")) {
      if (!j.at("confidence").is_number())
        bad_line(origin, line_no, "confidence must be a number");
      double c = j.at("confidence").get<double>();
      if (c < 0.0 || c > 1.0) bad_line(origin, line_no, "confidence must lie in [0,1]");
      f.confidence = c;
    }
    engine.memory().insert(std::move(f));
  }
}

void load_corpus(Engine& engine, const std::string& path) {
  parse_corpus_into(engine, read_file(path), path);
}

std::vector<CycleScript> parse_event_stream(std::string_view source,
                                            const std::string& origin) {
  static const std::set<std::string> record_keys = {"kind", "text", "sector", "level",
                                                    "source"};
  static const std::set<std::string> query_keys = {"kind", "text"};

  std::vector<CycleScript> cycles;
  CycleScript current;
  bool current_has_records = false;
  auto flush = [&] {
    if (current_has_records) cycles.push_back(std::move(current));
    current = CycleScript{};
    current_has_records = false;
  };

  std::istringstream in{std::string(source)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) {
      flush();
      continue;
    }
    ordered_json j = parse_line(origin, line_no, line);
    std::string kind = require_string(origin, line_no, j, "kind");
    if (kind == "query") {
      check_keys(origin, line_no, j, query_keys);
      current.queries.push_back(require_string(origin, line_no, j, "text"));
    } else if (kind == "event" || kind == "plan") {
      check_keys(origin, line_no, j, record_keys);
      InputEvent e;
      e.text = require_string(origin, line_no, j, "text");
      e.sector = SectorId::checked(require_string(origin, line_no, j, "sector"));
      e.level = require_level(origin, line_no, j);
      e.source = require_string(origin, line_no, j, "source");
      (kind == "event" ? current.events : current.plans).push_back(std::move(e));
    } else {
      bad_line(origin, line_no, "kind must be event, plan or query");
    }
    current_has_records = true;
  }
  flush();
  return cycles;
}

std::vector<CycleScript> load_event_stream(const std::string& path) {
  return parse_event_stream(read_file(path), path);
}

namespace {

ordered_json fragment_record(const char* store, const BeliefFragment& f) {
  ordered_json j;
  j["store"] = store;
  j["id"] = f.id;
  j["text"] = f.text;
  j["sector"] = f.coordinate.sector.name;
  j["level"] = f.coordinate.level;
  j["source"] = f.source;
  j["confidence"] = f.confidence;
  j["status"] = status_name(f.status);
  j["created_cycle"] = f.created_cycle;
  return j;
}

BeliefFragment fragment_from_record(const std::string& origin, int line_no,
                                    const ordered_json& j) {
  BeliefFragment f;
  f.id = j.at("id").get<FragmentId>();
  f.text = j.at("text").get<std::string>();
  f.coordinate.sector = SectorId(j.at("sector").get<std::string>());
  f.coordinate.level = j.at("level").get<Level>();
  f.source = j.at("source").get<std::string>();
  f.confidence = j.at("confidence").get<double>();
  auto status = status_from_name(j.at("status").get<std::string>());
  if (!status) bad_line(origin, line_no, "bad status");
  f.status = *status;
  f.created_cycle = j.at("created_cycle").get<std::uint64_t>();
  return f;
}

}  // namespace

void save_state_dump(const Engine& engine, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write state dump: " + path);
  ordered_json header;
  header["store"] = "engine";
  header["cycle"] = engine.state().current_cycle();
  header["next_id"] = engine.state().peek_next_id();
  out << header.dump() << '\n';
  for (const auto& [id, f] : engine.state().fragments())
    out << fragment_record("state", f).dump() << '\n';
  for (const auto& [id, f] : engine.memory().fragments())
    out << fragment_record("memory", f).dump() << '\n';
  if (!out) throw Error(Errc::io_error, "short write on state dump: " + path);
}

void load_state_dump(Engine& engine, const std::string& path) {
  std::string source = read_file(path);
  std::istringstream in(source);
  std::string line;
  int line_no = 0;
  std::uint64_t header_next_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    ordered_json j = parse_line(path, line_no, line);
    try {
      std::string store = require_string(path, line_no, j, "store");
      if (store == "engine") {
        engine.state().set_cycle(j.at("cycle").get<std::uint64_t>());
        header_next_id = j.at("next_id").get<std::uint64_t>();
      } else if (store == "state") {
        engine.state().insert(fragment_from_record(path, line_no, j));
      } else if (store == "memory") {
        engine.memory().insert(fragment_from_record(path, line_no, j));
      } else {
        bad_line(path, line_no, "store must be engine, state or memory");
      }
    } catch (const ordered_json::exception& e) {
      bad_line(path, line_no, e.what());
    }
  }
  if (header_next_id > engine.state().peek_next_id())
    engine.state().set_next_id(header_next_id);
}

}  // namespace manifold
