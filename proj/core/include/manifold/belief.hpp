#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "manifold/errors.hpp"

namespace manifold {

using FragmentId = std::uint64_t;
using Level = std::uint32_t;

constexpr Level kLevelMax = UINT32_MAX;

// Functional domain of a fragment. Five canonical sectors plus open
// extension by identifier: non-empty, lowercase, no whitespace.
struct SectorId {
  std::string name;

  SectorId() = default;
  explicit SectorId(std::string n) : name(std::move(n)) {}

  static bool valid_name(std::string_view name);
  static SectorId checked(std::string_view name);  // throws Errc::invalid_sector

  static const char* kPerc;
  static const char* kPlan;
  static const char* kMem;
  static const char* kRefl;
  static const char* kKnow;

  auto operator<=>(const SectorId&) const = default;
};

SectorId sector_perc();
SectorId sector_plan();
SectorId sector_mem();
SectorId sector_refl();
SectorId sector_know();

// Position in the manifold: sector plus abstraction level.
// Level 0 means concrete / sensor-grounded.
struct Coordinate {
  SectorId sector;
  Level level = 0;

  auto operator<=>(const Coordinate&) const = default;
};

enum class FragmentStatus { active, quarantined, suppressed, superseded };

const char* status_name(FragmentStatus status);
std::optional<FragmentStatus> status_from_name(std::string_view name);

// One natural-language belief. Text is stored sanitized (no control
// characters, single-spaced); matching uses normalize_text on top.
struct BeliefFragment {
  FragmentId id = 0;
  std::string text;
  Coordinate coordinate;
  double confidence = 1.0;
  std::string source;
  FragmentStatus status = FragmentStatus::active;
  std::uint64_t created_cycle = 0;

  bool operator==(const BeliefFragment&) const = default;
};

// Initial-confidence lookup by source tag. Longest matching prefix wins;
// fallback applies when nothing matches.
struct SourceTrustTable {
  std::map<std::string, double> entries;
  double fallback = 1.0;

  double lookup(std::string_view source) const;

  bool operator==(const SourceTrustTable&) const = default;
};

// Validates and builds a fragment without inserting it anywhere.
// Throws Errc::empty_text / Errc::invalid_sector.
BeliefFragment build_fragment(FragmentId id, std::string_view text,
                              const Coordinate& coordinate, std::string_view source,
                              const SourceTrustTable& trust, std::uint64_t cycle);

// The active ensemble, indexed by id and by coordinate. Single writer;
// reads are side-effect-free.
class BeliefState {
 public:
  FragmentId add_fragment(std::string_view text, const Coordinate& coordinate,
                          std::string_view source, const SourceTrustTable& trust);

  // Replaces status and/or scales confidence by factor in (0,1].
  // Confidence never increases through this call.
  const BeliefFragment& update_fragment(FragmentId id,
                                        std::optional<FragmentStatus> new_status,
                                        std::optional<double> confidence_factor);

  // All fragments matching every given criterion, ascending id.
  std::vector<BeliefFragment> query(const std::optional<SectorId>& sector,
                                    std::optional<std::pair<Level, Level>> level_range,
                                    std::optional<FragmentStatus> status) const;

  const BeliefFragment* find(FragmentId id) const;
  bool contains(FragmentId id) const { return find(id) != nullptr; }
  std::size_t size() const { return fragments_.size(); }

  // Engine hooks: one id sequence covers the state and the memory store
  // it is paired with, so ids stay unique across both.
  FragmentId allocate_id() { return next_id_++; }
  void insert(BeliefFragment fragment);

  std::uint64_t current_cycle() const { return current_cycle_; }
  void advance_cycle() { ++current_cycle_; }
  void set_cycle(std::uint64_t cycle) { current_cycle_ = cycle; }
  FragmentId peek_next_id() const { return next_id_; }
  void set_next_id(FragmentId id) { next_id_ = id; }

  const std::map<FragmentId, BeliefFragment>& fragments() const { return fragments_; }
  const std::map<Coordinate, std::set<FragmentId>>& coordinate_index() const {
    return coordinate_index_;
  }

 private:
  std::map<FragmentId, BeliefFragment> fragments_;
  std::map<Coordinate, std::set<FragmentId>> coordinate_index_;
  std::uint64_t current_cycle_ = 0;
  FragmentId next_id_ = 1;
};

// Long-term store with an inverted token index for retrieval.
class MemoryStore {
 public:
  void insert(BeliefFragment fragment);
  void set_status(FragmentId id, FragmentStatus status);
  void scale_confidence(FragmentId id, double factor);

  // Active fragments ranked by shared-token count with the query,
  // ties broken by more recent created_cycle then lower id. Fragments
  // sharing no token are not candidates.
  std::vector<BeliefFragment> retrieve(std::string_view query_text, std::size_t limit) const;

  const BeliefFragment* find(FragmentId id) const;
  bool contains(FragmentId id) const { return find(id) != nullptr; }
  std::size_t size() const { return fragments_.size(); }

  const std::map<FragmentId, BeliefFragment>& fragments() const { return fragments_; }
  const std::map<std::string, std::set<FragmentId>>& term_index() const { return term_index_; }

 private:
  std::map<FragmentId, BeliefFragment> fragments_;
  std::map<std::string, std::set<FragmentId>> term_index_;
};

}  // namespace manifold
