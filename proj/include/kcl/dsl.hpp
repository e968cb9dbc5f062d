#pragma once

/// @file dsl.hpp
/// Text formats: dependency expressions, `.grid` network files and `.scn`
/// scenario files.
///
/// Expression glyphs: `.` min-AND, `+` max-OR, `^` new_XOR, `<-` assigns a
/// relation. Precedence is `.` over `+` over `^`; all are left associative
/// and chains of one connective form a single n-ary node. Comments run from
/// `//` to end of line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcl/algebra.hpp"
#include "kcl/network.hpp"
#include "kcl/scenario.hpp"

namespace kcl {

enum class TokenKind : std::uint8_t {
  kIdentifier,
  kInteger,
  kArrow,          // <-
  kDot,            // .
  kPlus,           // +
  kCaret,          // ^
  kLParen,
  kRParen,
  kEquals,
  kComma,
  kRange,          // ..
  kSectionHeader,  // [name]; text holds the name
  kNewline,
  kComment,        // text holds the body after `//`
};

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;
  int column = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

struct ParseDiagnostic {
  enum class Severity : std::uint8_t { kError, kWarning };

  std::string message;
  int line = 0;  // 0 when the issue has no single source position
  int column = 0;
  Severity severity = Severity::kError;
};

std::string format_diagnostic(const ParseDiagnostic& d);

/// A value when no error diagnostics were produced; warnings may accompany it.
template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept { return value.has_value(); }
};

struct TokenizeResult {
  std::vector<Token> tokens;
  std::vector<ParseDiagnostic> diagnostics;
};

TokenizeResult tokenize(std::string_view source);

ParseResult<Expr> parse_expr(std::string_view source);
ParseResult<JointNetwork> parse_network(std::string_view source);
ParseResult<Scenario> parse_scenario(std::string_view source);

/// Expression text with the fewest parentheses that reparse to the same tree.
std::string format_expr(const Expr& expr);
/// Canonical network text; parse_network reproduces the network exactly.
std::string serialize_network(const JointNetwork& net);
std::string serialize_scenario(const Scenario& sc);

}  // namespace kcl
