#include "manifold/audit.hpp"

#include <json.hpp>

namespace manifold {

using ordered_json = nlohmann::ordered_json;

const char* audit_stage_name(AuditStage stage) {
  switch (stage) {
    case AuditStage::assimilation: return "assimilation";
    case AuditStage::retrieval: return "retrieval";
    case AuditStage::reflection: return "reflection";
    case AuditStage::planning: return "planning";
    case AuditStage::conflict_emission: return "conflict-emission";
    case AuditStage::conflict_resolution: return "conflict-resolution";
    case AuditStage::rejection_note: return "rejection-note";
    case AuditStage::operator_action: return "operator";
  }
  return "?";
}

std::optional<AuditStage> audit_stage_from_name(std::string_view name) {
  if (name == "assimilation") return AuditStage::assimilation;
  if (name == "retrieval") return AuditStage::retrieval;
  if (name == "reflection") return AuditStage::reflection;
  if (name == "planning") return AuditStage::planning;
  if (name == "conflict-emission") return AuditStage::conflict_emission;
  if (name == "conflict-resolution") return AuditStage::conflict_resolution;
  if (name == "rejection-note") return AuditStage::rejection_note;
  if (name == "operator") return AuditStage::operator_action;
  return std::nullopt;
}

std::string AuditLog::record_to_line(const AuditRecord& r) {
  ordered_json j;
  j["seq"] = r.seq;
  j["cycle"] = r.cycle;
  j["stage"] = audit_stage_name(r.stage);
  if (r.fragment_id) j["fragment_id"] = *r.fragment_id;
  else j["fragment_id"] = nullptr;
  j["text"] = r.text;
  j["sector"] = r.coordinate.sector.name;
  j["level"] = r.coordinate.level;
  j["outcome"] = r.outcome;
  j["rules"] = r.rules;
  j["reason"] = r.reason;
  return j.dump();
}

AuditRecord AuditLog::record_from_line(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, true);
  AuditRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.cycle = j.at("cycle").get<std::uint64_t>();
  auto stage = audit_stage_from_name(j.at("stage").get<std::string>());
  if (!stage) throw Error(Errc::io_error, "bad stage in audit record");
  r.stage = *stage;
  if (!j.at("fragment_id").is_null()) r.fragment_id = j.at("fragment_id").get<FragmentId>();
  r.text = j.at("text").get<std::string>();
  r.coordinate.sector = SectorId(j.at("sector").get<std::string>());
  r.coordinate.level = j.at("level").get<Level>();
  r.outcome = j.at("outcome").get<std::string>();
  r.rules = j.at("rules").get<std::vector<std::string>>();
  r.reason = j.at("reason").get<std::string>();
  return r;
}

void AuditLog::open_sink(const std::string& path, bool append) {
  if (append) {
    // continue the sequence after whatever the file already holds
    std::uint64_t continue_from = 0;
    try {
      std::vector<AuditRecord> existing = read_file(path);
      if (!existing.empty()) continue_from = existing.back().seq + 1;
    } catch (const Error&) {
      // no readable file yet; start fresh
    }
    if (continue_from > next_seq_) next_seq_ = continue_from;
    sink_.open(path, std::ios::binary | std::ios::app);
  } else {
    sink_.open(path, std::ios::binary | std::ios::trunc);
  }
  if (!sink_) throw Error(Errc::sink_write_failure, "cannot open audit sink: " + path);
  sink_closed_ = false;
}

void AuditLog::close_sink() {
  if (sink_.is_open()) sink_.close();
  sink_closed_ = true;
}

std::uint64_t AuditLog::append(AuditRecord record) {
  if (sink_closed_)
    throw Error(Errc::sink_write_failure, "audit sink is closed");
  record.seq = next_seq_;
  if (sink_.is_open()) {
    sink_ << record_to_line(record) << '\n';
    sink_.flush();
    if (!sink_)
      throw Error(Errc::sink_write_failure, "audit sink write failed");
  }
  ++next_seq_;
  records_.push_back(std::move(record));
  return records_.back().seq;
}

std::vector<AuditRecord> AuditLog::query(const Query& q) const {
  if (q.cycle_range && q.cycle_range->first > q.cycle_range->second)
    throw Error(Errc::invalid_range, "cycle range min exceeds max");
  std::vector<AuditRecord> out;
  for (const AuditRecord& r : records_) {
    if (q.stage && r.stage != *q.stage) continue;
    if (q.rule_id) {
      bool found = false;
      for (const std::string& id : r.rules) {
        if (id == *q.rule_id) {
          found = true;
          break;
        }
      }
      if (!found) continue;
    }
    if (q.outcome && r.outcome != *q.outcome) continue;
    if (q.cycle_range && (r.cycle < q.cycle_range->first || r.cycle > q.cycle_range->second))
      continue;
    out.push_back(r);
  }
  return out;
}

std::vector<AuditRecord> AuditLog::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open audit file: " + path);
  std::vector<AuditRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_line(line));
    } catch (const ordered_json::exception& e) {
      throw Error(Errc::io_error, "bad audit record at line " + std::to_string(line_no) +
                                      ": " + e.what());
    }
  }
  return out;
}

}  // namespace manifold
