#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manifold/belief.hpp"
#include "manifold/filter.hpp"

namespace manifold {

// Where a decision happened: one of the four filter stages, or a
// pseudo-stage for decisions the stages themselves generate. An
// assimilation rejection is logged as rejection-note (the record that
// routes the fragment to reflective monitoring); operator covers
// quarantine promote/purge done from the CLI.
enum class AuditStage {
  assimilation,
  retrieval,
  reflection,
  planning,
  conflict_emission,
  conflict_resolution,
  rejection_note,
  operator_action,
};

const char* audit_stage_name(AuditStage stage);
std::optional<AuditStage> audit_stage_from_name(std::string_view name);

struct AuditRecord {
  std::uint64_t seq = 0;
  std::uint64_t cycle = 0;
  AuditStage stage = AuditStage::assimilation;
  std::optional<FragmentId> fragment_id;
  std::string text;  // normalized snapshot at decision time
  Coordinate coordinate;
  std::string outcome;  // accept / reject / quarantine / downweight / promote / purge / error
  std::vector<std::string> rules;
  std::string reason;

  bool operator==(const AuditRecord&) const = default;
};

// Append-only decision log. When a sink is attached every record is
// written and flushed before append returns, so no decision is applied
// without a durable record. Sink lines are flat JSON objects with keys
// seq, cycle, stage, fragment_id, text, sector, level, outcome, rules,
// reason — in that order, LF-terminated.
class AuditLog {
 public:
  AuditLog() = default;

  // Truncates or appends. In append mode the sequence continues after
  // the records already in the file.
  void open_sink(const std::string& path, bool append = false);
  void close_sink();
  bool has_sink() const { return sink_.is_open(); }

  // Assigns the next seq, persists (when a sink is attached), then
  // stores. Throws Errc::sink_write_failure if the sink cannot take it.
  std::uint64_t append(AuditRecord record);

  struct Query {
    std::optional<AuditStage> stage;
    std::optional<std::string> rule_id;  // matches records listing this rule
    std::optional<std::string> outcome;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> cycle_range;
  };

  // Records matching every given criterion, in seq order.
  std::vector<AuditRecord> query(const Query& q) const;

  static bool matches_query(const AuditRecord& record, const Query& q);

  const std::vector<AuditRecord>& records() const { return records_; }
  std::uint64_t next_seq() const { return next_seq_; }
  bool sink_closed_explicitly() const { return sink_closed_; }

  static std::string record_to_line(const AuditRecord& record);
  static AuditRecord record_from_line(std::string_view line);
  static std::vector<AuditRecord> read_file(const std::string& path);

 private:
  std::vector<AuditRecord> records_;
  std::uint64_t next_seq_ = 0;
  std::ofstream sink_;
  bool sink_closed_ = false;  // a closed sink refuses further appends
};

}  // namespace manifold
