#include <cctype>

#include "kcl/dsl.hpp"

namespace kcl {

std::string_view to_string(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kInteger: return "integer";
    case TokenKind::kArrow: return "'<-'";
    case TokenKind::kDot: return "'.'";
    case TokenKind::kPlus: return "'+'";
    case TokenKind::kCaret: return "'^'";
    case TokenKind::kLParen: return "'('";
    case TokenKind::kRParen: return "')'";
    case TokenKind::kEquals: return "'='";
    case TokenKind::kComma: return "','";
    case TokenKind::kRange: return "'..'";
    case TokenKind::kSectionHeader: return "section header";
    case TokenKind::kNewline: return "end of line";
    case TokenKind::kComment: return "comment";
  }
  return "token";
}

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::string out =
      d.severity == ParseDiagnostic::Severity::kError ? "error" : "warning";
  if (d.line > 0) {
    out += " at " + std::to_string(d.line) + ":" + std::to_string(d.column);
  }
  return out + ": " + d.message;
}

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  TokenizeResult run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '\n') {
        close_line();
        emit(TokenKind::kNewline, "\n", 1);
        ++line_;
        column_ = 1;
      } else if (c == '/' && peek(1) == '/') {
        lex_comment();
      } else if (is_alpha(c)) {
        lex_while(TokenKind::kIdentifier, is_ident_char);
      } else if (is_digit(c)) {
        lex_while(TokenKind::kInteger, is_digit);
      } else if (c == '<' && peek(1) == '-') {
        emit(TokenKind::kArrow, "<-", 2);
      } else if (c == '.') {
        if (peek(1) == '.') {
          emit(TokenKind::kRange, "..", 2);
        } else {
          emit(TokenKind::kDot, ".", 1);
        }
      } else if (c == '+') {
        emit(TokenKind::kPlus, "+", 1);
      } else if (c == '^') {
        emit(TokenKind::kCaret, "^", 1);
      } else if (c == '=') {
        emit(TokenKind::kEquals, "=", 1);
      } else if (c == ',') {
        emit(TokenKind::kComma, ",", 1);
      } else if (c == '(') {
        open_parens_.push_back({line_, column_});
        emit(TokenKind::kLParen, "(", 1);
      } else if (c == ')') {
        if (open_parens_.empty()) {
          error("unmatched ')'", line_, column_);
        } else {
          open_parens_.pop_back();
        }
        emit(TokenKind::kRParen, ")", 1);
      } else if (c == '[') {
        lex_section();
      } else {
        const auto byte = static_cast<unsigned char>(c);
        const std::string shown = byte >= 0x20 && byte < 0x7f
                                      ? std::string("'") + c + "'"
                                      : "byte 0x" + hex(byte);
        error("illegal character " + shown, line_, column_);
        advance();
      }
    }
    close_line();
    return std::move(result_);
  }

 private:
  struct Position {
    int line;
    int column;
  };

  static std::string hex(unsigned char byte) {
    static constexpr char kDigits[] = "0123456789abcdef";
    return {kDigits[byte >> 4], kDigits[byte & 0xf]};
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    ++pos_;
    ++column_;
  }

  void emit(TokenKind kind, std::string text, std::size_t width) {
    result_.tokens.push_back({kind, std::move(text), line_, column_});
    pos_ += width;
    column_ += static_cast<int>(width);
  }

  void error(std::string message, int line, int column) {
    result_.diagnostics.push_back(
        {std::move(message), line, column, ParseDiagnostic::Severity::kError});
  }

  // Parentheses never span lines.
  void close_line() {
    for (const Position& p : open_parens_) {
      error("unterminated parenthesis", p.line, p.column);
    }
    open_parens_.clear();
  }

  template <typename Pred>
  void lex_while(TokenKind kind, Pred pred) {
    std::size_t end = pos_;
    while (end < src_.size() && pred(src_[end])) ++end;
    emit(kind, std::string(src_.substr(pos_, end - pos_)), end - pos_);
  }

  void lex_comment() {
    std::size_t end = src_.find('\n', pos_);
    if (end == std::string_view::npos) end = src_.size();
    emit(TokenKind::kComment, std::string(src_.substr(pos_ + 2, end - pos_ - 2)),
         end - pos_);
  }

  void lex_section() {
    std::size_t end = pos_ + 1;
    while (end < src_.size() && is_ident_char(src_[end])) ++end;
    if (end >= src_.size() || src_[end] != ']' || end == pos_ + 1) {
      error("malformed section header", line_, column_);
      advance();
      return;
    }
    emit(TokenKind::kSectionHeader, std::string(src_.substr(pos_ + 1, end - pos_ - 1)),
         end - pos_ + 1);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  std::vector<Position> open_parens_;
  TokenizeResult result_;
};

}  // namespace

TokenizeResult tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace kcl
