// lexer.cpp - TeaDSL tokenizer
#include "tea/lexer.hpp"

#include <array>
#include <cctype>

namespace tea
{

const char * to_string(TokenKind kind)
{
  switch (kind) {
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Ident: return "Ident";
    case TokenKind::AtIdent: return "AtIdent";
    case TokenKind::StringLit: return "StringLit";
    case TokenKind::TemplateStringPart: return "TemplateStringPart";
    case TokenKind::NumberLit: return "NumberLit";
    case TokenKind::BoolLit: return "BoolLit";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Comment: return "Comment";
    case TokenKind::Eof: return "Eof";
  }
  return "?";
}

namespace
{

constexpr std::array kKeywords = {"model", "type", "api", "import", "returns", "var", "return",
  "if", "else", "true", "false", "null"};

bool is_keyword(std::string_view word)
{
  for (const char * kw : kKeywords) {
    if (word == kw) return true;
  }
  return false;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer
{
public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run()
  {
    while (pos_.byte_offset < src_.size()) {
      if (in_template_literal()) {
        lex_template_part();
      } else {
        lex_normal();
      }
    }
    if (!template_stack_.empty()) {
      throw LexError(template_open_, "unterminated template string");
    }
    emit(TokenKind::Eof, "", pos_, pos_);
    return std::move(tokens_);
  }

private:
  // Template lexing is a small mode stack: each entry tracks the brace depth
  // of the current ${...} hole; depth -1 means we are scanning literal text.
  struct TemplateFrame
  {
    int hole_brace_depth = -1;
  };

  bool in_template_literal() const
  {
    return !template_stack_.empty() && template_stack_.back().hole_brace_depth < 0;
  }

  char peek(std::size_t ahead = 0) const
  {
    std::size_t i = pos_.byte_offset + ahead;
    return i < src_.size() ? src_[i] : '\0';
  }

  char advance()
  {
    char c = src_[pos_.byte_offset];
    ++pos_.byte_offset;
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  void emit(TokenKind kind, std::string text, SourcePos begin, SourcePos end)
  {
    tokens_.push_back(Token{kind, std::move(text), Span{begin, end}});
  }

  void lex_normal()
  {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      return;
    }
    SourcePos start = pos_;
    if (c == '/' && peek(1) == '/') {
      std::string text;
      while (pos_.byte_offset < src_.size() && peek() != '\n') text += advance();
      emit(TokenKind::Comment, std::move(text), start, pos_);
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(c);
      return;
    }
    if (c == '`') {
      advance();
      template_open_ = start;
      template_stack_.push_back(TemplateFrame{});
      return;
    }
    if (is_ident_start(c)) {
      std::string word;
      while (is_ident_char(peek())) word += advance();
      if (word == "true" || word == "false") {
        emit(TokenKind::BoolLit, std::move(word), start, pos_);
      } else if (is_keyword(word)) {
        emit(TokenKind::Keyword, std::move(word), start, pos_);
      } else {
        emit(TokenKind::Ident, std::move(word), start, pos_);
      }
      return;
    }
    if (c == '@') {
      advance();
      if (!is_ident_start(peek())) throw LexError(start, "expected identifier after '@'");
      std::string word = "@";
      while (is_ident_char(peek())) word += advance();
      emit(TokenKind::AtIdent, std::move(word), start, pos_);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return;
    }
    lex_punct();
  }

  void lex_string(char quote)
  {
    SourcePos start = pos_;
    advance();
    std::string value;
    for (;;) {
      if (pos_.byte_offset >= src_.size() || peek() == '\n') {
        throw LexError(start, "unterminated string literal");
      }
      char c = advance();
      if (c == quote) break;
      if (c == '\\') {
        if (pos_.byte_offset >= src_.size()) throw LexError(start, "unterminated string literal");
        value += unescape(advance());
      } else {
        value += c;
      }
    }
    emit(TokenKind::StringLit, std::move(value), start, pos_);
  }

  std::string unescape(char c)
  {
    switch (c) {
      case 'n': return "\n";
      case 't': return "\t";
      case 'r': return "\r";
      case '0': return std::string(1, '\0');
      default: return std::string(1, c);  // \\ \' \" \` \d etc. keep the char
    }
  }

  void lex_template_part()
  {
    SourcePos start = pos_;
    std::string value;
    for (;;) {
      if (pos_.byte_offset >= src_.size()) {
        throw LexError(template_open_, "unterminated template string");
      }
      char c = peek();
      if (c == '`') {
        emit(TokenKind::TemplateStringPart, std::move(value), start, pos_);
        advance();
        template_stack_.pop_back();
        return;
      }
      if (c == '$' && peek(1) == '{') {
        emit(TokenKind::TemplateStringPart, std::move(value), start, pos_);
        SourcePos hole = pos_;
        advance();
        advance();
        emit(TokenKind::Punct, "${", hole, pos_);
        template_stack_.back().hole_brace_depth = 0;
        return;
      }
      if (c == '\\') {
        advance();
        if (pos_.byte_offset >= src_.size()) {
          throw LexError(template_open_, "unterminated template string");
        }
        value += unescape(advance());
        continue;
      }
      value += advance();
    }
  }

  void lex_number()
  {
    SourcePos start = pos_;
    std::string text;
    if (peek() == '-') text += advance();
    while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
    }
    emit(TokenKind::NumberLit, std::move(text), start, pos_);
  }

  void lex_punct()
  {
    SourcePos start = pos_;
    char c = advance();
    auto two = [&](char second, const char * text) {
      if (peek() == second) {
        advance();
        emit(TokenKind::Punct, text, start, pos_);
        return true;
      }
      return false;
    };
    switch (c) {
      case '{':
        if (!template_stack_.empty() && template_stack_.back().hole_brace_depth >= 0) {
          ++template_stack_.back().hole_brace_depth;
        }
        emit(TokenKind::Punct, "{", start, pos_);
        return;
      case '}':
        if (!template_stack_.empty() && template_stack_.back().hole_brace_depth >= 0) {
          if (template_stack_.back().hole_brace_depth == 0) {
            // closes the ${...} hole, back to literal scanning
            template_stack_.back().hole_brace_depth = -1;
          } else {
            --template_stack_.back().hole_brace_depth;
          }
        }
        emit(TokenKind::Punct, "}", start, pos_);
        return;
      case '(': case ')': case '[': case ']': case ',': case ';': case ':': case '.':
      case '?': case '+':
        emit(TokenKind::Punct, std::string(1, c), start, pos_);
        return;
      case '=':
        if (two('=', "==")) return;
        emit(TokenKind::Punct, "=", start, pos_);
        return;
      case '!':
        if (two('=', "!=")) return;
        throw LexError(start, "unexpected character '!'");
      case '&':
        if (two('&', "&&")) return;
        throw LexError(start, "unexpected character '&'");
      case '|':
        if (two('|', "||")) return;
        throw LexError(start, "unexpected character '|'");
      default:
        throw LexError(start, std::string("illegal character '") + c + "'");
    }
  }

  std::string_view src_;
  SourcePos pos_;
  std::vector<Token> tokens_;
  std::vector<TemplateFrame> template_stack_;
  SourcePos template_open_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::vector<Token> strip_trivia(const std::vector<Token> & tokens)
{
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const Token & t : tokens) {
    if (t.kind != TokenKind::Comment) out.push_back(t);
  }
  return out;
}

}  // namespace tea
