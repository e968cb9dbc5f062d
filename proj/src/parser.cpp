#include <algorithm>
#include <charconv>
#include <map>
#include <span>

#include "kcl/dsl.hpp"

namespace kcl {

namespace {

using Severity = ParseDiagnostic::Severity;

constexpr int kMaxNesting = 200;

/// Recursive descent over one line's tokens (no newlines or comments).
class ExprParser {
 public:
  explicit ExprParser(std::span<const Token> tokens, int line)
      : tokens_(tokens), line_(line) {}

  std::optional<Expr> parse_all() {
    if (tokens_.empty()) {
      fail("expected an expression", line_, 0);
      return std::nullopt;
    }
    std::optional<Expr> e = parse_xor(0);
    if (e && pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      fail("unexpected " + std::string(to_string(t.kind)) + " '" + t.text + "'",
           t.line, t.column);
      return std::nullopt;
    }
    return e;
  }

  std::optional<ParseDiagnostic> diagnostic() const { return diag_; }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  void fail(std::string message, int line, int column) {
    if (!diag_) diag_ = ParseDiagnostic{std::move(message), line, column, Severity::kError};
  }

  void fail_at_end(const std::string& expected) {
    if (const Token* t = peek()) {
      fail("expected " + expected + ", found " + std::string(to_string(t->kind)),
           t->line, t->column);
    } else {
      const Token& last = tokens_.back();
      fail("expected " + expected + " at end of expression", last.line,
           last.column + static_cast<int>(last.text.size()));
    }
  }

  // One precedence level: operands joined by `op` build a single n-ary node.
  template <typename Next>
  std::optional<Expr> parse_chain(TokenKind op, Expr::Kind kind, int depth, Next next) {
    std::optional<Expr> first = next(depth);
    if (!first) return std::nullopt;
    std::vector<Expr> operands;
    operands.push_back(std::move(*first));
    while (const Token* t = peek()) {
      if (t->kind != op) break;
      ++pos_;
      std::optional<Expr> rhs = next(depth);
      if (!rhs) return std::nullopt;
      operands.push_back(std::move(*rhs));
    }
    if (operands.size() == 1) return std::move(operands.front());
    Expr e;
    e.kind = kind;
    e.children = std::move(operands);
    return e;
  }

  std::optional<Expr> parse_xor(int depth) {
    return parse_chain(TokenKind::kCaret, Expr::Kind::kNewXor, depth,
                       [this](int d) { return parse_or(d); });
  }

  std::optional<Expr> parse_or(int depth) {
    return parse_chain(TokenKind::kPlus, Expr::Kind::kMaxOr, depth,
                       [this](int d) { return parse_and(d); });
  }

  std::optional<Expr> parse_and(int depth) {
    return parse_chain(TokenKind::kDot, Expr::Kind::kMinAnd, depth,
                       [this](int d) { return parse_primary(d); });
  }

  std::optional<Expr> parse_primary(int depth) {
    const Token* t = peek();
    if (!t) {
      fail_at_end("an entity or '('");
      return std::nullopt;
    }
    if (t->kind == TokenKind::kIdentifier) {
      ++pos_;
      return Expr::ref(t->text);
    }
    if (t->kind == TokenKind::kLParen) {
      if (depth >= kMaxNesting) {
        fail("expression nested too deeply", t->line, t->column);
        return std::nullopt;
      }
      ++pos_;
      std::optional<Expr> inner = parse_xor(depth + 1);
      if (!inner) return std::nullopt;
      const Token* close = peek();
      if (!close || close->kind != TokenKind::kRParen) {
        fail_at_end("')'");
        return std::nullopt;
      }
      ++pos_;
      return inner;
    }
    fail("expected an entity or '(', found " + std::string(to_string(t->kind)),
         t->line, t->column);
    return std::nullopt;
  }

  std::span<const Token> tokens_;
  int line_;
  std::size_t pos_ = 0;
  std::optional<ParseDiagnostic> diag_;
};

bool has_error(const std::vector<ParseDiagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const ParseDiagnostic& d) {
    return d.severity == Severity::kError;
  });
}

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

/// Splits a token stream into non-empty lines, dropping comments.
std::vector<Line> split_lines(const std::vector<Token>& tokens) {
  std::vector<Line> lines;
  Line current;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kComment) continue;
    if (t.kind == TokenKind::kNewline) {
      if (!current.tokens.empty()) lines.push_back(std::move(current));
      current = Line{};
      continue;
    }
    if (current.tokens.empty()) current.number = t.line;
    current.tokens.push_back(t);
  }
  if (!current.tokens.empty()) lines.push_back(std::move(current));
  return lines;
}

std::optional<int> to_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> to_int64(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

class NetworkParser {
 public:
  ParseResult<JointNetwork> run(std::string_view source) {
    TokenizeResult lexed = tokenize(source);
    diags_ = std::move(lexed.diagnostics);
    enum class Section { kNone, kEntities, kEdges, kIdrs } section = Section::kNone;

    for (const Line& line : split_lines(lexed.tokens)) {
      const Token& head = line.tokens.front();
      if (head.kind == TokenKind::kSectionHeader) {
        if (line.tokens.size() > 1) {
          error("unexpected text after section header", line.tokens[1]);
        }
        if (head.text == "entities") {
          section = Section::kEntities;
        } else if (head.text == "edges") {
          section = Section::kEdges;
        } else if (head.text == "idrs") {
          section = Section::kIdrs;
        } else {
          error("unknown section [" + head.text + "]", head);
          section = Section::kNone;
        }
        continue;
      }
      switch (section) {
        case Section::kNone: error("content outside a section", head); break;
        case Section::kEntities: parse_entity(line); break;
        case Section::kEdges: parse_edge(line); break;
        case Section::kIdrs: parse_idr(line); break;
      }
    }
    cross_validate();

    ParseResult<JointNetwork> result;
    if (!has_error(diags_)) result.value = std::move(net_);
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  void error(std::string message, const Token& at) {
    diags_.push_back({std::move(message), at.line, at.column, Severity::kError});
  }

  bool expect_identifier(const Line& line, std::size_t i, const char* what) {
    if (i < line.tokens.size() && line.tokens[i].kind == TokenKind::kIdentifier) {
      return true;
    }
    const Token& at = i < line.tokens.size() ? line.tokens[i] : line.tokens.back();
    error(std::string("expected ") + what, at);
    return false;
  }

  void parse_entity(const Line& line) {
    if (!expect_identifier(line, 0, "entity id") ||
        !expect_identifier(line, 1, "entity kind")) {
      return;
    }
    const Token& id = line.tokens[0];
    const Token& kind_token = line.tokens[1];
    Entity entity;
    if (auto kind = entity_kind_from_string(kind_token.text)) {
      entity.kind = *kind;
    } else {
      error("unknown entity kind '" + kind_token.text + "'", kind_token);
      return;
    }
    bool ok = true;
    for (std::size_t i = 2; i < line.tokens.size(); ++i) {
      const Token& t = line.tokens[i];
      if (t.kind == TokenKind::kIdentifier && t.text == "gen") {
        if (entity.is_generator) error("duplicate attribute 'gen'", t);
        entity.is_generator = true;
      } else if (t.kind == TokenKind::kIdentifier && t.text == "pmu") {
        if (entity.has_pmu) error("duplicate attribute 'pmu'", t);
        entity.has_pmu = true;
      } else if (t.kind == TokenKind::kIdentifier && t.text == "sub" &&
                 i + 2 < line.tokens.size() &&
                 line.tokens[i + 1].kind == TokenKind::kEquals &&
                 line.tokens[i + 2].kind == TokenKind::kInteger) {
        if (entity.substation) error("duplicate attribute 'sub'", t);
        const auto value = to_int(line.tokens[i + 2].text);
        if (!value) {
          error("substation number out of range", line.tokens[i + 2]);
          ok = false;
        }
        entity.substation = value;
        i += 2;
      } else {
        error("unknown entity attribute '" + t.text + "'", t);
        ok = false;
      }
    }
    if (!ok) return;
    if (decl_line_.contains(id.text)) {
      error("duplicate entity " + id.text, id);
      return;
    }
    decl_line_.emplace(id.text, line.number);
    net_.add_entity(id.text, entity);
  }

  void parse_edge(const Line& line) {
    if (!expect_identifier(line, 0, "edge class pp, pc or cc")) return;
    const auto cls = edge_class_from_string(line.tokens[0].text);
    if (!cls) {
      error("unknown edge class '" + line.tokens[0].text + "'", line.tokens[0]);
      return;
    }
    if (!expect_identifier(line, 1, "edge endpoint") ||
        !expect_identifier(line, 2, "edge endpoint")) {
      return;
    }
    Edge edge{*cls, line.tokens[1].text, line.tokens[2].text, std::nullopt};
    if (line.tokens.size() > 3) {
      const bool bound = line.tokens.size() == 6 &&
                         line.tokens[3].kind == TokenKind::kIdentifier &&
                         line.tokens[3].text == "entity" &&
                         line.tokens[4].kind == TokenKind::kEquals &&
                         line.tokens[5].kind == TokenKind::kIdentifier;
      if (!bound) {
        error("expected 'entity=<id>' after edge endpoints", line.tokens[3]);
        return;
      }
      edge.bound_entity = line.tokens[5].text;
    }
    edge_lines_.emplace_back(edge, line.number);
    net_.add_edge(std::move(edge));
  }

  void parse_idr(const Line& line) {
    if (!expect_identifier(line, 0, "relation target")) return;
    if (line.tokens.size() < 2 || line.tokens[1].kind != TokenKind::kArrow) {
      error("expected '<-' after relation target",
            line.tokens.size() < 2 ? line.tokens[0] : line.tokens[1]);
      return;
    }
    const Token& target = line.tokens[0];
    ExprParser parser(std::span<const Token>(line.tokens).subspan(2), line.number);
    std::optional<Expr> expr = parser.parse_all();
    if (!expr) {
      diags_.push_back(*parser.diagnostic());
      return;
    }
    if (idr_line_.contains(target.text)) {
      error("duplicate relation for " + target.text, target);
      return;
    }
    idr_line_.emplace(target.text, line.number);
    net_.set_idr(target.text, std::move(*expr));
  }

  int line_for(const ValidationIssue& issue) const {
    if (issue.edge_index && *issue.edge_index < net_.edges().size()) {
      const Edge& edge = net_.edges()[*issue.edge_index];
      for (const auto& [e, line] : edge_lines_) {
        if (e == edge) return line;
      }
    }
    if (issue.subjects.size() >= 2) {
      if (auto it = idr_line_.find(issue.subjects[1]); it != idr_line_.end()) {
        return it->second;
      }
    }
    if (!issue.subjects.empty()) {
      if (auto it = decl_line_.find(issue.subjects[0]); it != decl_line_.end()) {
        return it->second;
      }
      if (auto it = idr_line_.find(issue.subjects[0]); it != idr_line_.end()) {
        return it->second;
      }
    }
    return 0;
  }

  void cross_validate() {
    for (const ValidationIssue& issue : validate(net_)) {
      const int line = line_for(issue);
      diags_.push_back({issue.message, line, line > 0 ? 1 : 0,
                        issue.severity == ValidationIssue::Severity::kError
                            ? Severity::kError
                            : Severity::kWarning});
    }
  }

  JointNetwork net_;
  std::vector<ParseDiagnostic> diags_;
  std::map<std::string, int, std::less<>> decl_line_;
  std::map<std::string, int, std::less<>> idr_line_;
  std::vector<std::pair<Edge, int>> edge_lines_;
};

bool is_identifier(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) {
    return false;
  }
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  });
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    words.push_back(s.substr(start, end - start));
    pos = end;
  }
  return words;
}

class ScenarioParser {
 public:
  ParseResult<Scenario> run(std::string_view source) {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
      auto end = source.find('\n', pos);
      if (end == std::string_view::npos) end = source.size();
      ++number;
      std::string_view text = source.substr(pos, end - pos);
      if (auto c = text.find("//"); c != std::string_view::npos) text = text.substr(0, c);
      parse_line(trim(text), number);
      pos = end + 1;
    }
    if (!seen_.contains("query")) {
      sc_.query_begin = 0;
      sc_.query_end = sc_.events.empty() ? 0 : sc_.events.back().time_ms;
    }
    ParseResult<Scenario> result;
    if (!has_error(diags_)) result.value = std::move(sc_);
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  void error(std::string message, int line) {
    diags_.push_back({std::move(message), line, 1, Severity::kError});
  }

  bool once(std::string_view directive, int line) {
    if (!seen_.emplace(directive).second && directive != "at") {
      error("duplicate directive '" + std::string(directive) + "'", line);
      return false;
    }
    return true;
  }

  void parse_line(std::string_view text, int line) {
    if (text.empty()) return;
    const std::vector<std::string_view> words = split_words(text);
    const std::string_view directive = words.front();
    const auto expect_args = [&](std::size_t n) {
      if (words.size() != n + 1) {
        error("directive '" + std::string(directive) + "' takes " +
                  std::to_string(n) + " argument" + (n == 1 ? "" : "s"),
              line);
        return false;
      }
      return true;
    };

    if (directive == "network") {
      const std::string_view path = trim(text.substr(directive.size()));
      if (path.empty()) {
        error("directive 'network' needs a path", line);
      } else if (once(directive, line)) {
        sc_.network_path = std::string(path);
      }
    } else if (directive == "mode") {
      if (!expect_args(1) || !once(directive, line)) return;
      if (auto m = mode_from_string(words[1])) {
        sc_.mode = *m;
      } else {
        error("mode must be miim or iim", line);
      }
    } else if (directive == "k") {
      if (!expect_args(1) || !once(directive, line)) return;
      const auto k = to_int(words[1]);
      if (!k || *k < 1) {
        error("k must be a positive integer", line);
      } else {
        sc_.k = *k;
      }
    } else if (directive == "solver") {
      if (!expect_args(1) || !once(directive, line)) return;
      if (auto s = solver_from_string(words[1])) {
        sc_.solver = *s;
      } else {
        error("solver must be exact or heuristic", line);
      }
    } else if (directive == "objective") {
      if (!expect_args(1) || !once(directive, line)) return;
      if (auto o = objective_from_string(words[1])) {
        sc_.objective = *o;
      } else {
        error("objective must be failed or deficit", line);
      }
    } else if (directive == "at") {
      parse_event(words, line);
    } else if (directive == "query") {
      if (!expect_args(1) || !once(directive, line)) return;
      parse_query(words[1], line);
    } else {
      error("unknown directive '" + std::string(directive) + "'", line);
    }
  }

  void parse_event(const std::vector<std::string_view>& words, int line) {
    if (words.size() < 4 || words[2] != "fail") {
      error("expected 'at <t_ms> fail <id>[,<id>...]'", line);
      return;
    }
    const auto t = to_int64(words[1]);
    if (!t || *t < 0) {
      error("event time must be a non-negative integer", line);
      return;
    }
    std::string joined;
    for (std::size_t i = 3; i < words.size(); ++i) joined += words[i];
    FailureEvent ev{*t, {}};
    std::size_t pos = 0;
    while (pos <= joined.size()) {
      auto comma = joined.find(',', pos);
      if (comma == std::string::npos) comma = joined.size();
      const std::string id = joined.substr(pos, comma - pos);
      if (!is_identifier(id)) {
        error("invalid entity id '" + id + "'", line);
        return;
      }
      ev.entity_ids.insert(id);
      pos = comma + 1;
    }
    if (!sc_.events.empty() && sc_.events.back().time_ms > ev.time_ms) {
      error("event time " + std::to_string(ev.time_ms) + " precedes earlier event at " +
                std::to_string(sc_.events.back().time_ms) + " (times must not decrease)",
            line);
      return;
    }
    sc_.events.push_back(std::move(ev));
  }

  void parse_query(std::string_view range, int line) {
    const auto sep = range.find("..");
    const auto t0 = sep == std::string_view::npos ? std::nullopt
                                                  : to_int64(range.substr(0, sep));
    const auto t1 = sep == std::string_view::npos ? std::nullopt
                                                  : to_int64(range.substr(sep + 2));
    if (!t0 || !t1 || *t0 < 0) {
      error("expected 'query <t0>..<t1>' with non-negative integers", line);
      return;
    }
    if (*t0 > *t1) {
      error("query window start exceeds its end", line);
      return;
    }
    sc_.query_begin = *t0;
    sc_.query_end = *t1;
  }

  Scenario sc_;
  std::vector<ParseDiagnostic> diags_;
  std::set<std::string, std::less<>> seen_;
};

int precedence(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kNewXor: return 1;
    case Expr::Kind::kMaxOr: return 2;
    case Expr::Kind::kMinAnd: return 3;
    case Expr::Kind::kRef: break;
  }
  return 4;
}

const char* glyph(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kMinAnd: return " . ";
    case Expr::Kind::kMaxOr: return " + ";
    case Expr::Kind::kNewXor: return " ^ ";
    case Expr::Kind::kRef: break;
  }
  return " ";
}

void format_into(const Expr& expr, std::string& out) {
  if (expr.is_ref()) {
    out += expr.id;
    return;
  }
  for (std::size_t i = 0; i < expr.children.size(); ++i) {
    if (i > 0) out += glyph(expr.kind);
    const Expr& child = expr.children[i];
    // Same-connective children need parentheses too, or they would flatten.
    const bool wrap = !child.is_ref() && precedence(child.kind) <= precedence(expr.kind);
    if (wrap) out += '(';
    format_into(child, out);
    if (wrap) out += ')';
  }
}

}  // namespace

std::string_view to_string(SolverKind solver) noexcept {
  return solver == SolverKind::kExact ? "exact" : "heuristic";
}

std::optional<SolverKind> solver_from_string(std::string_view text) noexcept {
  if (text == "exact") return SolverKind::kExact;
  if (text == "heuristic") return SolverKind::kHeuristic;
  return std::nullopt;
}

ParseResult<Expr> parse_expr(std::string_view source) {
  TokenizeResult lexed = tokenize(source);
  ParseResult<Expr> result;
  result.diagnostics = std::move(lexed.diagnostics);
  if (has_error(result.diagnostics)) return result;
  std::vector<Token> tokens;
  for (Token& t : lexed.tokens) {
    if (t.kind != TokenKind::kComment && t.kind != TokenKind::kNewline) {
      tokens.push_back(std::move(t));
    }
  }
  ExprParser parser(tokens, 1);
  result.value = parser.parse_all();
  if (!result.value) result.diagnostics.push_back(*parser.diagnostic());
  return result;
}

ParseResult<JointNetwork> parse_network(std::string_view source) {
  return NetworkParser().run(source);
}

ParseResult<Scenario> parse_scenario(std::string_view source) {
  return ScenarioParser().run(source);
}

std::string format_expr(const Expr& expr) {
  std::string out;
  format_into(expr, out);
  return out;
}

std::string serialize_network(const JointNetwork& net) {
  std::string out = "[entities]\n";
  for (const auto& [id, e] : net.entities()) {
    out += id;
    out += ' ';
    out += to_string(e.kind);
    if (e.is_generator) out += " gen";
    if (e.has_pmu) out += " pmu";
    if (e.substation) out += " sub=" + std::to_string(*e.substation);
    out += '\n';
  }
  out += "[edges]\n";
  for (const Edge& edge : net.edges()) {
    out += to_string(edge.cls);
    out += ' ' + edge.a + ' ' + edge.b;
    if (edge.bound_entity) out += " entity=" + *edge.bound_entity;
    out += '\n';
  }
  out += "[idrs]\n";
  for (const auto& [id, expr] : net.idrs()) {
    out += id + " <- " + format_expr(expr) + '\n';
  }
  return out;
}

std::string serialize_scenario(const Scenario& sc) {
  std::string out;
  if (!sc.network_path.empty()) out += "network " + sc.network_path + '\n';
  out += "mode " + std::string(to_string(sc.mode)) + '\n';
  out += "k " + std::to_string(sc.k) + '\n';
  out += "solver " + std::string(to_string(sc.solver)) + '\n';
  out += "objective " + std::string(to_string(sc.objective)) + '\n';
  for (const FailureEvent& ev : sc.events) {
    out += "at " + std::to_string(ev.time_ms) + " fail ";
    bool first = true;
    for (const std::string& id : ev.entity_ids) {
      if (!first) out += ',';
      out += id;
      first = false;
    }
    out += '\n';
  }
  out += "query " + std::to_string(sc.query_begin) + ".." +
         std::to_string(sc.query_end) + '\n';
  return out;
}

}  // namespace kcl
