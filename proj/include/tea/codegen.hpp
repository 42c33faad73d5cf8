// codegen.hpp - pluggable multi-target SDK emission
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tea/semantics.hpp"

namespace tea
{

enum class IdentifierStyle
{
  CamelCase,
  SnakeCase,
  PascalCase,
};

// Idempotent: applying a style to its own output is a no-op.
std::string apply_style(const std::string & name, IdentifierStyle style);

struct EmitterTarget
{
  std::string target_id;
  std::string file_extension;
  IdentifierStyle identifier_style = IdentifierStyle::SnakeCase;
  bool executable = false;  // runnable in the test environment
  // Total over all TypeExpr variants.
  std::function<std::string(const TypeExpr &)> type_name;
  // Renders a string literal in the target language.
  std::function<std::string(const std::string &)> string_literal;
};

// Relative path -> file text, ordered by path. Reproducible by construction.
using FileSet = std::map<std::string, std::string>;

struct UnsupportedConstruct : std::runtime_error
{
  std::string target_id;
  Span span;
  UnsupportedConstruct(std::string target, Span s, const std::string & what)
  : std::runtime_error(target + ": unsupported construct: " + what),
    target_id(std::move(target)),
    span(s)
  {
  }
};

class Emitter
{
public:
  virtual ~Emitter() = default;
  virtual FileSet emit_module(const SemanticModule & module, const EmitterTarget & target) = 0;
  virtual std::string emit_sample(const SemanticModule & module, const std::string & api,
    const std::map<std::string, Json> & args, const EmitterTarget & target) = 0;
};

// Built-in targets: "python" (executable) and "typescript".
std::vector<EmitterTarget> list_targets();
const EmitterTarget * find_target(const std::string & target_id);

// Module must be free of Error diagnostics.
FileSet emit(const SemanticModule & module, const EmitterTarget & target);

// Self-contained snippet constructing the arguments and calling the client
// method; args must pass validate_value for model-typed parameters.
std::string emit_code_sample(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, const EmitterTarget & target);

// Writes a FileSet under out_dir along with a fileset.json manifest
// (path + content digest per file).
void write_fileset(const FileSet & files, const std::string & out_dir);

// Implementation factories (used by the registry; exposed for tests).
std::unique_ptr<Emitter> make_python_emitter();
std::unique_ptr<Emitter> make_typescript_emitter();

}  // namespace tea
