#include "manifold/knowledge.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include "manifold/text.hpp"

namespace manifold {

void Ontology::add_concept(std::string name) { concepts_.insert(std::move(name)); }

bool Ontology::add_is_a(const std::string& child, const std::string& parent) {
  if (!concepts_.count(child))
    throw Error(Errc::unknown_concept, "undeclared concept: " + child);
  if (!concepts_.count(parent))
    throw Error(Errc::unknown_concept, "undeclared concept: " + parent);
  if (child == parent || reachable(parent, child)) return false;  // would close a cycle
  parents_[child].insert(parent);
  return true;
}

bool Ontology::reachable(const std::string& from, const std::string& to) const {
  if (from == to) return true;
  std::deque<const std::string*> work{&from};
  std::set<std::string> seen{from};
  while (!work.empty()) {
    const std::string& cur = *work.front();
    work.pop_front();
    auto it = parents_.find(cur);
    if (it == parents_.end()) continue;
    for (const std::string& parent : it->second) {
      if (parent == to) return true;
      if (seen.insert(parent).second) work.push_back(&parent);
    }
  }
  return false;
}

bool Ontology::is_subsumed(const std::string& concept_name, const std::string& ancestor) const {
  if (!concepts_.count(concept_name))
    throw Error(Errc::unknown_concept, "undeclared concept: " + concept_name);
  if (!concepts_.count(ancestor))
    throw Error(Errc::unknown_concept, "undeclared concept: " + ancestor);
  return reachable(concept_name, ancestor);
}

void Lexicon::add_term(std::string_view phrase, std::set<std::string> concept_names) {
  std::string key = normalize_text(phrase);
  auto& bucket = entries_[key];
  bucket.merge(concept_names);
}

std::set<std::string> Lexicon::concepts_in(std::string_view text) const {
  std::string norm = normalize_text(text);
  std::set<std::string> out;
  for (const auto& [phrase, concepts] : entries_) {
    if (!phrase.empty() && norm.find(phrase) != std::string::npos) {
      out.insert(concepts.begin(), concepts.end());
    }
  }
  return out;
}

double KeywordScorer::score(std::string_view text) const {
  std::vector<std::string> tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  double sum = bias;
  for (const auto& token : tokens) {
    auto it = weights.find(token);
    if (it != weights.end()) sum += it->second;
  }
  return std::clamp(sum, 0.0, 1.0);
}

const KeywordScorer* KnowledgeBase::find_scorer(std::string_view name) const {
  auto it = scorers.find(std::string(name));
  return it == scorers.end() ? nullptr : &it->second;
}

namespace {

struct LineCursor {
  std::string_view line;
  int line_no;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  bool done() {
    skip_ws();
    return pos >= line.size() || line[pos] == '#';
  }

  int column() const { return static_cast<int>(pos) + 1; }

  [[noreturn]] void fail(ParseErrorKind kind, const std::string& message) {
    throw ParseError(line_no, column(), kind, message);
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '#')
      ++pos;
    if (pos == start) fail(ParseErrorKind::syntax, "expected a word");
    return std::string(line.substr(start, pos - start));
  }

  std::string quoted() {
    skip_ws();
    if (pos >= line.size() || line[pos] != '"')
      fail(ParseErrorKind::syntax, "expected a quoted phrase");
    std::size_t open_col = pos;
    ++pos;
    std::string out;
    while (pos < line.size()) {
      char c = line[pos];
      if (c == '"') {
        ++pos;
        return out;
      }
      if (c == '\\' && pos + 1 < line.size() &&
          (line[pos + 1] == '"' || line[pos + 1] == '\\')) {
        out.push_back(line[pos + 1]);
        pos += 2;
        continue;
      }
      out.push_back(c);
      ++pos;
    }
    throw ParseError(line_no, static_cast<int>(open_col) + 1,
                     ParseErrorKind::unterminated_string, "unterminated phrase");
  }

  double real() {
    skip_ws();
    std::size_t start = pos;
    std::string w = word();
    double value = 0.0;
    auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (ec != std::errc() || end != w.data() + w.size())
      throw ParseError(line_no, static_cast<int>(start) + 1, ParseErrorKind::syntax,
                       "expected a number, got \"" + w + "\"");
    return value;
  }
};

}  // namespace

KnowledgeBase KnowledgeBase::parse(std::string_view source) {
  KnowledgeBase kb;
  KeywordScorer* current_scorer = nullptr;

  std::size_t offset = 0;
  int line_no = 0;
  while (offset <= source.size()) {
    std::size_t eol = source.find('\n', offset);
    std::string_view line = source.substr(
        offset, eol == std::string_view::npos ? source.size() - offset : eol - offset);
    ++line_no;
    offset = eol == std::string_view::npos ? source.size() + 1 : eol + 1;

    LineCursor cur{line, line_no};
    if (cur.done()) continue;
    std::size_t directive_col = cur.pos;
    std::string directive = cur.word();

    if (directive == "concept") {
      kb.ontology.add_concept(cur.word());
      current_scorer = nullptr;
    } else if (directive == "isa") {
      std::string child = cur.word();
      std::size_t parent_col = (cur.skip_ws(), cur.pos);
      std::string parent = cur.word();
      bool ok;
      try {
        ok = kb.ontology.add_is_a(child, parent);
      } catch (const Error& e) {
        throw ParseError(line_no, static_cast<int>(directive_col) + 1,
                         ParseErrorKind::syntax, e.what());
      }
      if (!ok)
        throw ParseError(line_no, static_cast<int>(parent_col) + 1, ParseErrorKind::syntax,
                         "isa edge " + child + " -> " + parent + " closes a cycle");
      current_scorer = nullptr;
    } else if (directive == "term") {
      std::string phrase = cur.quoted();
      cur.skip_ws();
      if (line.substr(cur.pos, 2) != "->")
        cur.fail(ParseErrorKind::syntax, "expected '->' after phrase");
      cur.pos += 2;
      cur.skip_ws();
      std::size_t list_col = cur.pos;
      std::size_t end = line.find('#', cur.pos);
      if (end == std::string_view::npos) end = line.size();
      std::string rest(line.substr(cur.pos, end - cur.pos));
      cur.pos = end;
      std::set<std::string> concept_names;
      std::stringstream ss(rest);
      std::string piece;
      while (std::getline(ss, piece, ',')) {
        while (!piece.empty() && (piece.front() == ' ' || piece.front() == '\t'))
          piece.erase(piece.begin());
        while (!piece.empty() && (piece.back() == ' ' || piece.back() == '\t'))
          piece.pop_back();
        if (piece.empty()) continue;
        if (!kb.ontology.has(piece))
          throw ParseError(line_no, static_cast<int>(list_col) + 1, ParseErrorKind::syntax,
                           "term references undeclared concept: " + piece);
        concept_names.insert(piece);
      }
      if (concept_names.empty())
        throw ParseError(line_no, static_cast<int>(list_col) + 1, ParseErrorKind::syntax,
                         "term maps to no concept");
      kb.lexicon.add_term(phrase, std::move(concept_names));
      current_scorer = nullptr;
    } else if (directive == "scorer") {
      std::string name = cur.word();
      std::string kw = cur.word();
      if (kw != "bias") cur.fail(ParseErrorKind::syntax, "expected 'bias'");
      double bias = cur.real();
      if (kb.scorers.count(name))
        throw ParseError(line_no, static_cast<int>(directive_col) + 1,
                         ParseErrorKind::duplicate_id, "duplicate scorer: " + name);
      KeywordScorer scorer;
      scorer.name = name;
      scorer.bias = bias;
      auto [it, _] = kb.scorers.emplace(name, std::move(scorer));
      current_scorer = &it->second;
    } else if (directive == "w") {
      if (!current_scorer)
        throw ParseError(line_no, static_cast<int>(directive_col) + 1,
                         ParseErrorKind::syntax, "'w' line outside a scorer block");
      std::string token = normalize_text(cur.word());
      current_scorer->weights[token] = cur.real();
    } else {
      throw ParseError(line_no, static_cast<int>(directive_col) + 1,
                       ParseErrorKind::unknown_keyword, "unknown directive: " + directive);
    }

    if (!cur.done())
      cur.fail(ParseErrorKind::syntax, "unexpected trailing input");
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open knowledge file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace manifold
