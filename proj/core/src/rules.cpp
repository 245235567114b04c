#include "manifold/rules.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "manifold/text.hpp"

namespace manifold {

// ── Lexer ───────────────────────────────────────────────────────────────

namespace {

enum class Tok { ident, number, string, lbrace, rbrace, colon, comma, star, dotdot, cmp, eof };

struct Token {
  Tok kind = Tok::eof;
  std::string text;  // ident/number raw text, decoded string value, cmp spelling
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::eof;
      return t;
    }
    char c = src_[pos_];
    if (c == '{') return punct(t, Tok::lbrace);
    if (c == '}') return punct(t, Tok::rbrace);
    if (c == ':') return punct(t, Tok::colon);
    if (c == ',') return punct(t, Tok::comma);
    if (c == '*') return punct(t, Tok::star);
    if (c == '.' && peek(1) == '.') {
      advance();
      advance();
      t.kind = Tok::dotdot;
      return t;
    }
    if (c == '<' || c == '>') {
      advance();
      t.kind = Tok::cmp;
      t.text = c;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        t.text += '=';
        advance();
      }
      return t;
    }
    if (c == '=' && peek(1) == '=') {
      advance();
      advance();
      t.kind = Tok::cmp;
      t.text = "==";
      return t;
    }
    if (c == '"') return lex_string(t);
    if (is_digit(c) || (c == '-' && is_digit(peek(1)))) return lex_number(t);
    if (is_ident_start(c)) return lex_ident(t);
    throw ParseError(t.line, t.column, ParseErrorKind::syntax,
                     std::string("unexpected character '") + printable(c) + "'");
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || is_digit(c) || c == '-';
  }
  static std::string printable(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", u);
    return buf;
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token punct(Token& t, Tok kind) {
    t.kind = kind;
    advance();
    return t;
  }

  Token lex_string(Token& t) {
    t.kind = Tok::string;
    advance();  // opening quote
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return t;
      }
      if (c == '\n') break;  // strings do not span lines
      if (c == '\\' && (peek(1) == '"' || peek(1) == '\\')) {
        t.text.push_back(peek(1));
        advance();
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
    throw ParseError(t.line, t.column, ParseErrorKind::unterminated_string,
                     "unterminated string");
  }

  Token lex_number(Token& t) {
    t.kind = Tok::number;
    if (src_[pos_] == '-') {
      t.text.push_back('-');
      advance();
    }
    while (pos_ < src_.size() && is_digit(src_[pos_])) {
      t.text.push_back(src_[pos_]);
      advance();
    }
    // fraction — but leave '..' alone for level ranges
    if (pos_ < src_.size() && src_[pos_] == '.' && is_digit(peek(1))) {
      t.text.push_back('.');
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        t.text.push_back(src_[pos_]);
        advance();
      }
    }
    // exponent, so serialized doubles like 1e-05 lex back
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t after = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
      if (is_digit(peek(after))) {
        t.text.push_back(src_[pos_]);
        advance();
        if (src_[pos_] == '+' || src_[pos_] == '-') {
          t.text.push_back(src_[pos_]);
          advance();
        }
        while (pos_ < src_.size() && is_digit(src_[pos_])) {
          t.text.push_back(src_[pos_]);
          advance();
        }
      }
    }
    return t;
  }

  Token lex_ident(Token& t) {
    t.kind = Tok::ident;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
      t.text.push_back(src_[pos_]);
      advance();
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ── Parser ──────────────────────────────────────────────────────────────

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  RuleFile parse_file() {
    RuleFile file;
    while (cur_.kind != Tok::eof) {
      Token head = expect(Tok::ident, "expected 'rule', 'contradiction', 'budget' or 'trust'");
      if (head.text == "rule") {
        parse_rule(file, head);
      } else if (head.text == "contradiction") {
        parse_contradiction(file);
      } else if (head.text == "budget") {
        Token key = expect(Tok::ident, "expected budget key");
        double value = real_value(expect(Tok::number, "expected budget value"));
        if (file.budgets.count(key.text))
          fail_at(key, ParseErrorKind::duplicate_id, "duplicate budget key: " + key.text);
        file.budgets.emplace(key.text, value);
      } else if (head.text == "trust") {
        Token prefix = expect(Tok::string, "expected quoted source prefix");
        Token value_tok = expect(Tok::number, "expected trust value");
        double value = real_value(value_tok);
        if (value < 0.0 || value > 1.0)
          fail_at(value_tok, ParseErrorKind::invalid_threshold,
                  "trust value must lie in [0,1]");
        if (file.trust.entries.count(prefix.text))
          fail_at(prefix, ParseErrorKind::duplicate_id,
                  "duplicate trust prefix: \"" + prefix.text + "\"");
        file.trust.entries.emplace(prefix.text, value);
      } else {
        fail_at(head, ParseErrorKind::unknown_keyword, "unknown directive: " + head.text);
      }
    }
    return file;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) fail_at(cur_, ParseErrorKind::syntax, what);
    Token t = cur_;
    shift();
    return t;
  }

  [[noreturn]] static void fail_at(const Token& t, ParseErrorKind kind,
                                   const std::string& message) {
    throw ParseError(t.line, t.column, kind, message);
  }

  double real_value(const Token& t) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || end != t.text.data() + t.text.size())
      fail_at(t, ParseErrorKind::syntax, "malformed number: " + t.text);
    return v;
  }

  long long int_value(const Token& t) {
    if (t.text.find('.') != std::string::npos || t.text.find('e') != std::string::npos ||
        t.text.find('E') != std::string::npos)
      fail_at(t, ParseErrorKind::syntax, "expected an integer, got " + t.text);
    long long v = 0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || end != t.text.data() + t.text.size())
      fail_at(t, ParseErrorKind::syntax, "integer out of range: " + t.text);
    return v;
  }

  Pattern compile_pattern(const Token& string_tok, bool allow_capture) {
    try {
      return Pattern::compile(string_tok.text, allow_capture);
    } catch (const PatternSyntaxError& e) {
      fail_at(string_tok, ParseErrorKind::syntax, std::string("bad pattern: ") + e.what());
    }
  }

  Matcher parse_matcher(bool context_only) {
    Token kind = expect(Tok::ident, "expected a matcher kind");
    if (kind.text == "contains") {
      Token lit = expect(Tok::string, "expected quoted literal");
      if (normalize_text(lit.text).empty())
        fail_at(lit, ParseErrorKind::syntax, "contains literal is empty after normalization");
      return ContainsMatcher{lit.text};
    }
    if (kind.text == "pattern") {
      Token src = expect(Tok::string, "expected quoted pattern");
      return PatternMatcher{compile_pattern(src, false)};
    }
    if (context_only)
      fail_at(kind, ParseErrorKind::syntax,
              "only contains/pattern matchers are allowed here");
    if (kind.text == "concept") {
      Token name = expect(Tok::ident, "expected concept name");
      return ConceptMatcher{name.text};
    }
    if (kind.text == "classifier") {
      Token name = expect(Tok::ident, "expected scorer name");
      Token cmp = expect(Tok::cmp, "expected '>=' or '<'");
      if (cmp.text != ">=" && cmp.text != "<")
        fail_at(cmp, ParseErrorKind::syntax, "classifier direction must be '>=' or '<'");
      Token thr = expect(Tok::number, "expected threshold");
      double threshold = real_value(thr);
      if (threshold < 0.0 || threshold > 1.0)
        fail_at(thr, ParseErrorKind::invalid_threshold, "threshold must lie in [0,1]");
      return ClassifierMatcher{name.text, threshold, cmp.text == ">="};
    }
    if (kind.text == "numeric") {
      Token src = expect(Tok::string, "expected quoted capture pattern");
      Pattern capture = compile_pattern(src, true);
      if (!capture.has_capture())
        fail_at(src, ParseErrorKind::syntax, "numeric pattern needs one (\\d+) group");
      Token cmp = expect(Tok::cmp, "expected a comparator");
      NumericCmp op;
      if (cmp.text == "<") op = NumericCmp::lt;
      else if (cmp.text == "<=") op = NumericCmp::le;
      else if (cmp.text == ">") op = NumericCmp::gt;
      else if (cmp.text == ">=") op = NumericCmp::ge;
      else op = NumericCmp::eq;
      NumericMatcher m{std::move(capture), op, 0.0};
      if (cur_.kind == Tok::ident && cur_.text == "budget") {
        shift();
        Token key = expect(Tok::ident, "expected budget key");
        m.bound = key.text;
      } else {
        Token bound = expect(Tok::number, "expected bound or 'budget <key>'");
        m.bound = real_value(bound);
      }
      return m;
    }
    fail_at(kind, ParseErrorKind::unknown_keyword, "unknown matcher kind: " + kind.text);
  }

  std::set<std::string> parse_sector_list() {
    std::set<std::string> out;
    while (true) {
      Token s = expect(Tok::ident, "expected sector name");
      if (!SectorId::valid_name(s.text))
        fail_at(s, ParseErrorKind::syntax, "invalid sector name: " + s.text);
      out.insert(s.text);
      if (cur_.kind != Tok::comma) break;
      shift();
    }
    return out;
  }

  ContextCondition parse_context(ContextPolarity polarity) {
    ContextCondition cond;
    cond.polarity = polarity;
    if (cur_.kind == Tok::ident && cur_.text == "sector") {
      shift();
      cond.sectors = parse_sector_list();
    }
    cond.matcher = parse_matcher(/*context_only=*/true);
    return cond;
  }

  void parse_rule(RuleFile& file, const Token& head) {
    (void)head;
    Token id = expect(Tok::ident, "expected rule id");
    expect(Tok::lbrace, "expected '{'");

    FilterRule rule;
    rule.id = id.text;
    bool saw_mode = false, saw_stage = false, saw_sector = false, saw_level = false;
    bool saw_match = false, saw_action = false, saw_priority = false;
    Token action_tok;

    while (cur_.kind != Tok::rbrace) {
      Token field = expect(Tok::ident, "expected a rule field or '}'");
      expect(Tok::colon, "expected ':' after field name");
      if (field.text == "mode") {
        if (saw_mode) fail_at(field, ParseErrorKind::syntax, "duplicate field: mode");
        saw_mode = true;
        Token m = expect(Tok::ident, "expected 'whitelist' or 'blacklist'");
        if (m.text == "whitelist") rule.mode = RuleMode::whitelist;
        else if (m.text == "blacklist") rule.mode = RuleMode::blacklist;
        else fail_at(m, ParseErrorKind::syntax, "mode must be whitelist or blacklist");
      } else if (field.text == "stage") {
        if (saw_stage) fail_at(field, ParseErrorKind::syntax, "duplicate field: stage");
        saw_stage = true;
        if (cur_.kind == Tok::star) {
          shift();
        } else {
          while (true) {
            Token s = expect(Tok::ident, "expected stage name");
            auto stage = stage_from_name(s.text);
            if (!stage) fail_at(s, ParseErrorKind::syntax, "unknown stage: " + s.text);
            rule.scope.stages.insert(*stage);
            if (cur_.kind != Tok::comma) break;
            shift();
          }
        }
      } else if (field.text == "sector") {
        if (saw_sector) fail_at(field, ParseErrorKind::syntax, "duplicate field: sector");
        saw_sector = true;
        if (cur_.kind == Tok::star) shift();
        else rule.scope.sectors = parse_sector_list();
      } else if (field.text == "level") {
        if (saw_level) fail_at(field, ParseErrorKind::syntax, "duplicate field: level");
        saw_level = true;
        rule.scope.levels = parse_level_range();
      } else if (field.text == "match") {
        if (saw_match) fail_at(field, ParseErrorKind::syntax, "duplicate field: match");
        saw_match = true;
        rule.matcher = parse_matcher(false);
      } else if (field.text == "when-context") {
        rule.context.push_back(parse_context(ContextPolarity::when));
      } else if (field.text == "unless-context") {
        rule.context.push_back(parse_context(ContextPolarity::unless));
      } else if (field.text == "action") {
        if (saw_action) fail_at(field, ParseErrorKind::syntax, "duplicate field: action");
        saw_action = true;
        action_tok = field;
        rule.action = parse_action();
      } else if (field.text == "priority") {
        if (saw_priority) fail_at(field, ParseErrorKind::syntax, "duplicate field: priority");
        saw_priority = true;
        Token p = expect(Tok::number, "expected priority integer");
        long long v = int_value(p);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
          fail_at(p, ParseErrorKind::syntax, "priority out of range");
        rule.priority = static_cast<int>(v);
      } else {
        fail_at(field, ParseErrorKind::unknown_keyword, "unknown rule field: " + field.text);
      }
    }
    Token close = expect(Tok::rbrace, "expected '}'");

    if (!saw_mode)
      fail_at(id, ParseErrorKind::syntax, "rule " + rule.id + " is missing mode");
    if (!saw_match)
      fail_at(id, ParseErrorKind::syntax, "rule " + rule.id + " is missing match");
    if (rule.mode == RuleMode::whitelist && rule.action)
      fail_at(action_tok, ParseErrorKind::syntax,
              "whitelist rules carry no action (their effect is fixed)");
    if (rule.mode == RuleMode::blacklist && !rule.action)
      fail_at(close, ParseErrorKind::syntax, "rule " + rule.id + " is missing action");

    try {
      file.filter_set.add(std::move(rule));
    } catch (const Error&) {
      fail_at(id, ParseErrorKind::duplicate_id, "duplicate rule id: " + id.text);
    }
  }

  LevelRange parse_level_range() {
    LevelRange range;
    if (cur_.kind == Tok::star) {
      shift();
      return range;
    }
    Token lo = expect(Tok::number, "expected level or '*'");
    long long min_v = int_value(lo);
    if (min_v < 0) fail_at(lo, ParseErrorKind::syntax, "level must be non-negative");
    expect(Tok::dotdot, "expected '..' in level range");
    range.min = static_cast<Level>(std::min<long long>(min_v, kLevelMax));
    if (cur_.kind == Tok::star) {
      shift();
      range.max = kLevelMax;
      return range;
    }
    Token hi = expect(Tok::number, "expected level or '*'");
    long long max_v = int_value(hi);
    if (max_v < 0) fail_at(hi, ParseErrorKind::syntax, "level must be non-negative");
    range.max = static_cast<Level>(std::min<long long>(max_v, kLevelMax));
    if (range.min > range.max)
      fail_at(hi, ParseErrorKind::syntax, "level range min exceeds max");
    return range;
  }

  Action parse_action() {
    Token kind = expect(Tok::ident, "expected an action");
    Action action;
    if (kind.text == "reject") {
      action.kind = Action::Kind::reject;
    } else if (kind.text == "quarantine") {
      action.kind = Action::Kind::quarantine;
    } else if (kind.text == "flag") {
      action.kind = Action::Kind::flag;
      action.label = expect(Tok::string, "expected flag label").text;
    } else if (kind.text == "downweight") {
      action.kind = Action::Kind::downweight;
      Token f = expect(Tok::number, "expected downweight factor");
      action.factor = real_value(f);
      if (!(action.factor > 0.0 && action.factor < 1.0))
        fail_at(f, ParseErrorKind::invalid_factor,
                "downweight factor must lie strictly in (0,1)");
    } else {
      fail_at(kind, ParseErrorKind::syntax, "unknown action: " + kind.text);
    }
    return action;
  }

  void parse_contradiction(RuleFile& file) {
    Token id = expect(Tok::ident, "expected contradiction id");
    for (const ConflictDeclaration& existing : file.contradictions) {
      if (existing.id == id.text)
        fail_at(id, ParseErrorKind::duplicate_id, "duplicate contradiction id: " + id.text);
    }
    expect(Tok::lbrace, "expected '{'");
    ConflictDeclaration decl;
    decl.id = id.text;
    bool saw_a = false, saw_b = false, saw_resolve = false;
    while (cur_.kind != Tok::rbrace) {
      Token field = expect(Tok::ident, "expected 'a', 'b', 'resolve' or '}'");
      expect(Tok::colon, "expected ':' after field name");
      if (field.text == "a") {
        if (saw_a) fail_at(field, ParseErrorKind::syntax, "duplicate field: a");
        saw_a = true;
        decl.pattern_a = parse_matcher(true);
      } else if (field.text == "b") {
        if (saw_b) fail_at(field, ParseErrorKind::syntax, "duplicate field: b");
        saw_b = true;
        decl.pattern_b = parse_matcher(true);
      } else if (field.text == "resolve") {
        if (saw_resolve) fail_at(field, ParseErrorKind::syntax, "duplicate field: resolve");
        saw_resolve = true;
        Token r = expect(Tok::ident, "expected a resolution");
        if (r.text == "quarantine-newer") {
          decl.resolve = ConflictResolve::quarantine_newer;
        } else if (r.text == "downweight-newer") {
          decl.resolve = ConflictResolve::downweight_newer;
          Token f = expect(Tok::number, "expected downweight factor");
          decl.factor = real_value(f);
          if (!(decl.factor > 0.0 && decl.factor < 1.0))
            fail_at(f, ParseErrorKind::invalid_factor,
                    "downweight factor must lie strictly in (0,1)");
        } else if (r.text == "flag-only") {
          decl.resolve = ConflictResolve::flag_only;
        } else {
          fail_at(r, ParseErrorKind::syntax, "unknown resolution: " + r.text);
        }
      } else {
        fail_at(field, ParseErrorKind::unknown_keyword,
                "unknown contradiction field: " + field.text);
      }
    }
    Token close = expect(Tok::rbrace, "expected '}'");
    if (!saw_a || !saw_b || !saw_resolve)
      fail_at(close, ParseErrorKind::syntax,
              "contradiction " + decl.id + " needs fields a, b and resolve");
    file.contradictions.push_back(std::move(decl));
  }

  Lexer lexer_;
  Token cur_;
};

}  // namespace

RuleFile parse_rules(std::string_view source) { return Parser(source).parse_file(); }

// ── Serializer ──────────────────────────────────────────────────────────

namespace {

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "0";
  return std::string(buf, end);
}

std::string quote(const std::string& raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string matcher_text(const Matcher& matcher) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ContainsMatcher>) {
          return "contains " + quote(m.literal);
        } else if constexpr (std::is_same_v<T, PatternMatcher>) {
          return "pattern " + quote(m.pattern.source());
        } else if constexpr (std::is_same_v<T, ConceptMatcher>) {
          return "concept " + m.concept_name;
        } else if constexpr (std::is_same_v<T, ClassifierMatcher>) {
          return "classifier " + m.scorer + (m.at_least ? " >= " : " < ") +
                 format_real(m.threshold);
        } else {
          static_assert(std::is_same_v<T, NumericMatcher>);
          std::string out = "numeric " + quote(m.capture.source()) + " " +
                            numeric_cmp_name(m.cmp) + " ";
          if (std::holds_alternative<double>(m.bound))
            out += format_real(std::get<double>(m.bound));
          else
            out += "budget " + std::get<std::string>(m.bound);
          return out;
        }
      },
      matcher);
}

std::string sector_list_text(const std::set<std::string>& sectors) {
  std::string out;
  for (const std::string& s : sectors) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

void write_rule(std::ostringstream& out, const FilterRule& rule) {
  out << "rule " << rule.id << " {\n";
  out << "  mode: " << (rule.mode == RuleMode::whitelist ? "whitelist" : "blacklist") << "\n";
  out << "  stage: ";
  if (rule.scope.stages.empty()) {
    out << "*";
  } else {
    bool first = true;
    for (Stage s : rule.scope.stages) {
      if (!first) out << ",";
      out << stage_name(s);
      first = false;
    }
  }
  out << "\n";
  out << "  sector: "
      << (rule.scope.sectors.empty() ? "*" : sector_list_text(rule.scope.sectors)) << "\n";
  out << "  level: ";
  if (rule.scope.levels.is_wildcard()) {
    out << "*";
  } else if (rule.scope.levels.max == kLevelMax) {
    out << rule.scope.levels.min << "..*";
  } else {
    out << rule.scope.levels.min << ".." << rule.scope.levels.max;
  }
  out << "\n";
  out << "  match: " << matcher_text(rule.matcher) << "\n";
  for (const ContextCondition& cond : rule.context) {
    out << (cond.polarity == ContextPolarity::when ? "  when-context: "
                                                   : "  unless-context: ");
    if (!cond.sectors.empty()) out << "sector " << sector_list_text(cond.sectors) << " ";
    out << matcher_text(cond.matcher) << "\n";
  }
  if (rule.action) {
    out << "  action: ";
    switch (rule.action->kind) {
      case Action::Kind::reject: out << "reject"; break;
      case Action::Kind::quarantine: out << "quarantine"; break;
      case Action::Kind::flag: out << "flag " << quote(rule.action->label); break;
      case Action::Kind::downweight:
        out << "downweight " << format_real(rule.action->factor);
        break;
    }
    out << "\n";
  }
  out << "  priority: " << rule.priority << "\n";
  out << "}\n";
}

void write_contradiction(std::ostringstream& out, const ConflictDeclaration& decl) {
  out << "contradiction " << decl.id << " {\n";
  out << "  a: " << matcher_text(decl.pattern_a) << "\n";
  out << "  b: " << matcher_text(decl.pattern_b) << "\n";
  out << "  resolve: ";
  switch (decl.resolve) {
    case ConflictResolve::quarantine_newer: out << "quarantine-newer"; break;
    case ConflictResolve::downweight_newer:
      out << "downweight-newer " << format_real(decl.factor);
      break;
    case ConflictResolve::flag_only: out << "flag-only"; break;
  }
  out << "\n}\n";
}

}  // namespace

std::string serialize_rules(const RuleFile& file) {
  std::ostringstream out;
  bool first = true;
  auto gap = [&] {
    if (!first) out << "\n";
    first = false;
  };
  for (const FilterRule& rule : file.filter_set.rules()) {
    gap();
    write_rule(out, rule);
  }
  for (const ConflictDeclaration& decl : file.contradictions) {
    gap();
    write_contradiction(out, decl);
  }
  if (!file.budgets.empty()) {
    gap();
    for (const auto& [key, value] : file.budgets)
      out << "budget " << key << " " << format_real(value) << "\n";
  }
  if (!file.trust.entries.empty()) {
    gap();
    for (const auto& [prefix, value] : file.trust.entries)
      out << "trust " << quote(prefix) << " " << format_real(value) << "\n";
  }
  return out.str();
}

std::vector<std::string> link_check(const RuleFile& file, const KnowledgeBase& knowledge) {
  std::vector<std::string> problems;
  for (const FilterRule& rule : file.filter_set.rules()) {
    if (const auto* c = std::get_if<ClassifierMatcher>(&rule.matcher)) {
      if (!knowledge.find_scorer(c->scorer))
        problems.push_back("rule " + rule.id + ": unknown scorer \"" + c->scorer + "\"");
    } else if (const auto* k = std::get_if<ConceptMatcher>(&rule.matcher)) {
      if (!knowledge.ontology.has(k->concept_name))
        problems.push_back("rule " + rule.id + ": unknown concept \"" + k->concept_name +
                           "\"");
    } else if (const auto* n = std::get_if<NumericMatcher>(&rule.matcher)) {
      if (const auto* key = std::get_if<std::string>(&n->bound)) {
        if (!file.budgets.count(*key))
          problems.push_back("rule " + rule.id + ": undeclared budget key \"" + *key + "\"");
      }
    }
  }
  return problems;
}

RuleFile load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str());
}

}  // namespace manifold
