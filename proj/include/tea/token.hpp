// token.hpp - lexical tokens
#pragma once

#include <string>
#include <vector>

#include "tea/source.hpp"

namespace tea
{

enum class TokenKind
{
  Keyword,
  Ident,
  AtIdent,
  StringLit,
  TemplateStringPart,
  NumberLit,
  BoolLit,
  Punct,
  Comment,
  Eof,
};

struct Token
{
  TokenKind kind = TokenKind::Eof;
  // For StringLit/TemplateStringPart this is the decoded value, not the lexeme.
  std::string text;
  Span span;

  bool is(TokenKind k) const { return kind == k; }
  bool is_keyword(const char * kw) const { return kind == TokenKind::Keyword && text == kw; }
  bool is_punct(const char * p) const { return kind == TokenKind::Punct && text == p; }
};

const char * to_string(TokenKind kind);

}  // namespace tea
