// parser.hpp - recursive-descent parser for TeaDSL
#pragma once

#include <string_view>
#include <vector>

#include "tea/ast.hpp"
#include "tea/diagnostic.hpp"
#include "tea/token.hpp"

namespace tea
{

struct ParseResult
{
  SyntaxTree tree;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Parses a token stream (must end with Eof). On a syntax error the parser
// records a diagnostic and resynchronizes at the next top-level declaration,
// so several errors can be reported from one run.
ParseResult parse(const std::vector<Token> & tokens);

// Convenience: tokenize + parse. Lex errors become diagnostics.
ParseResult parse_source(std::string_view source);

}  // namespace tea
