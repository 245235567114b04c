#include "manifold/belief.hpp"

#include <algorithm>

#include "manifold/text.hpp"

namespace manifold {

const char* SectorId::kPerc = "perc";
const char* SectorId::kPlan = "plan";
const char* SectorId::kMem = "mem";
const char* SectorId::kRefl = "refl";
const char* SectorId::kKnow = "know";

SectorId sector_perc() { return SectorId{SectorId::kPerc}; }
SectorId sector_plan() { return SectorId{SectorId::kPlan}; }
SectorId sector_mem() { return SectorId{SectorId::kMem}; }
SectorId sector_refl() { return SectorId{SectorId::kRefl}; }
SectorId sector_know() { return SectorId{SectorId::kKnow}; }

bool SectorId::valid_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.front() < 'a' || name.front() > 'z') return false;
  for (unsigned char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

SectorId SectorId::checked(std::string_view name) {
  if (!valid_name(name))
    throw Error(Errc::invalid_sector, "invalid sector name: \"" + std::string(name) + "\"");
  return SectorId(std::string(name));
}

const char* status_name(FragmentStatus status) {
  switch (status) {
    case FragmentStatus::active: return "active";
    case FragmentStatus::quarantined: return "quarantined";
    case FragmentStatus::suppressed: return "suppressed";
    case FragmentStatus::superseded: return "superseded";
  }
  return "?";
}

std::optional<FragmentStatus> status_from_name(std::string_view name) {
  if (name == "active") return FragmentStatus::active;
  if (name == "quarantined") return FragmentStatus::quarantined;
  if (name == "suppressed") return FragmentStatus::suppressed;
  if (name == "superseded") return FragmentStatus::superseded;
  return std::nullopt;
}

double SourceTrustTable::lookup(std::string_view source) const {
  std::size_t best_len = 0;
  double best = fallback;
  for (const auto& [prefix, value] : entries) {
    if (prefix.size() >= best_len && source.substr(0, prefix.size()) == prefix) {
      best_len = prefix.size();
      best = value;
    }
  }
  return best;
}

BeliefFragment build_fragment(FragmentId id, std::string_view text,
                              const Coordinate& coordinate, std::string_view source,
                              const SourceTrustTable& trust, std::uint64_t cycle) {
  if (!SectorId::valid_name(coordinate.sector.name))
    throw Error(Errc::invalid_sector,
                "invalid sector name: \"" + coordinate.sector.name + "\"");
  std::string stored = sanitize_text(text);
  if (normalize_text(stored).empty())
    throw Error(Errc::empty_text, "fragment text is empty after normalization");

  BeliefFragment f;
  f.id = id;
  f.text = std::move(stored);
  f.coordinate = coordinate;
  f.confidence = trust.lookup(source);
  f.source.assign(source.begin(), source.end());
  f.status = FragmentStatus::active;
  f.created_cycle = cycle;
  return f;
}

FragmentId BeliefState::add_fragment(std::string_view text, const Coordinate& coordinate,
                                     std::string_view source,
                                     const SourceTrustTable& trust) {
  BeliefFragment f = build_fragment(next_id_, text, coordinate, source, trust, current_cycle_);
  ++next_id_;
  FragmentId id = f.id;
  insert(std::move(f));
  return id;
}

void BeliefState::insert(BeliefFragment fragment) {
  if (fragments_.count(fragment.id))
    throw Error(Errc::unknown_id, "fragment id already present: " + std::to_string(fragment.id));
  if (fragment.id >= next_id_) next_id_ = fragment.id + 1;
  coordinate_index_[fragment.coordinate].insert(fragment.id);
  fragments_.emplace(fragment.id, std::move(fragment));
}

const BeliefFragment& BeliefState::update_fragment(FragmentId id,
                                                   std::optional<FragmentStatus> new_status,
                                                   std::optional<double> confidence_factor) {
  auto it = fragments_.find(id);
  if (it == fragments_.end())
    throw Error(Errc::unknown_id, "unknown fragment id: " + std::to_string(id));
  if (confidence_factor) {
    double f = *confidence_factor;
    if (!(f > 0.0 && f <= 1.0))
      throw Error(Errc::invalid_factor, "confidence factor must lie in (0,1]");
    it->second.confidence *= f;
  }
  if (new_status) it->second.status = *new_status;
  return it->second;
}

std::vector<BeliefFragment> BeliefState::query(
    const std::optional<SectorId>& sector,
    std::optional<std::pair<Level, Level>> level_range,
    std::optional<FragmentStatus> status) const {
  if (level_range && level_range->first > level_range->second)
    throw Error(Errc::invalid_range, "level range min exceeds max");

  std::vector<BeliefFragment> out;
  for (const auto& [id, f] : fragments_) {
    if (sector && f.coordinate.sector != *sector) continue;
    if (level_range &&
        (f.coordinate.level < level_range->first || f.coordinate.level > level_range->second))
      continue;
    if (status && f.status != *status) continue;
    out.push_back(f);
  }
  return out;  // map iteration is already ascending by id
}

const BeliefFragment* BeliefState::find(FragmentId id) const {
  auto it = fragments_.find(id);
  return it == fragments_.end() ? nullptr : &it->second;
}

void MemoryStore::insert(BeliefFragment fragment) {
  if (fragments_.count(fragment.id))
    throw Error(Errc::unknown_id, "fragment id already present: " + std::to_string(fragment.id));
  for (const auto& token : tokenize(fragment.text)) {
    term_index_[token].insert(fragment.id);
  }
  fragments_.emplace(fragment.id, std::move(fragment));
}

void MemoryStore::set_status(FragmentId id, FragmentStatus status) {
  auto it = fragments_.find(id);
  if (it != fragments_.end()) it->second.status = status;
}

void MemoryStore::scale_confidence(FragmentId id, double factor) {
  auto it = fragments_.find(id);
  if (it != fragments_.end()) it->second.confidence *= factor;
}

std::vector<BeliefFragment> MemoryStore::retrieve(std::string_view query_text,
                                                  std::size_t limit) const {
  std::vector<std::string> tokens = tokenize(query_text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());

  std::map<FragmentId, std::size_t> scores;
  for (const auto& token : tokens) {
    auto it = term_index_.find(token);
    if (it == term_index_.end()) continue;
    for (FragmentId id : it->second) ++scores[id];
  }

  std::vector<const BeliefFragment*> candidates;
  for (const auto& [id, score] : scores) {
    (void)score;
    const BeliefFragment& f = fragments_.at(id);
    if (f.status == FragmentStatus::active) candidates.push_back(&f);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const BeliefFragment* a, const BeliefFragment* b) {
              std::size_t sa = scores.at(a->id), sb = scores.at(b->id);
              if (sa != sb) return sa > sb;
              if (a->created_cycle != b->created_cycle)
                return a->created_cycle > b->created_cycle;
              return a->id < b->id;
            });

  if (candidates.size() > limit) candidates.resize(limit);
  std::vector<BeliefFragment> out;
  out.reserve(candidates.size());
  for (const BeliefFragment* f : candidates) out.push_back(*f);
  return out;
}

const BeliefFragment* MemoryStore::find(FragmentId id) const {
  auto it = fragments_.find(id);
  return it == fragments_.end() ? nullptr : &it->second;
}

}  // namespace manifold
