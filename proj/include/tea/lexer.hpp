// lexer.hpp - TeaDSL tokenizer
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tea/token.hpp"

namespace tea
{

struct LexError : std::runtime_error
{
  SourcePos pos;
  LexError(SourcePos p, const std::string & message)
  : std::runtime_error(to_string(p) + ": " + message), pos(p)
  {
  }
};

// Tokenizes the whole source. Comments are retained as trivia tokens; the
// last token is always Eof. Throws LexError on unterminated strings/templates
// and illegal characters.
std::vector<Token> tokenize(std::string_view source);

// Tokens with Comment trivia stripped, as consumed by the parser.
std::vector<Token> strip_trivia(const std::vector<Token> & tokens);

}  // namespace tea
