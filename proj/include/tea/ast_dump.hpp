// ast_dump.hpp - stable textual renderings of the syntax tree
#pragma once

#include <string>

#include "tea/ast.hpp"

namespace tea
{

// Deterministic tree rendering used for golden tests. Spans are omitted, so
// equal trees produce byte-identical output. The empty module renders as
// "Module{}".
std::string dump_ast(const SyntaxTree & tree);

// Canonical source form. parse(format_source(tree)) yields a tree with the
// same dump_ast rendering, which gives the round-trip oracle its fixed point.
std::string format_source(const SyntaxTree & tree);

}  // namespace tea
