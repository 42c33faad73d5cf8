// semantics.hpp - name resolution, type checking, value validation
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tea/ast.hpp"
#include "tea/diagnostic.hpp"

namespace tea
{

using Json = nlohmann::json;

// Compile-time registry entry for an importable builtin module.
struct BuiltinFunction
{
  std::vector<TypeExpr> params;
  TypeExpr return_type;
};

struct BuiltinModuleDescriptor
{
  std::string name;
  std::map<std::string, BuiltinFunction> functions;
};

// The shipped registry: "Util" with readAsJSON(readable): any and
// toJSONString(any): string.
const std::map<std::string, BuiltinModuleDescriptor> & builtin_modules();

// Name-resolved, type-checked module. Owns the (annotated) syntax tree.
// Immutable after analyze returns.
struct SemanticModule
{
  SyntaxTree tree;
  std::map<std::string, const ModelDecl *> models;
  std::map<std::string, const BehaviorTypeDecl *> behaviors;
  std::map<std::string, const ApiDecl *> apis;
  std::map<std::string, const BuiltinModuleDescriptor *> imports;
  std::vector<Diagnostic> diagnostics;

  bool valid() const { return !has_errors(diagnostics); }
};

SemanticModule analyze(SyntaxTree tree);

// ----------------------------------------------------------------- validation

enum class ViolationRule
{
  MissingRequired,
  Pattern,
  Min,
  Max,
  TypeMismatch,
};

const char * to_string(ViolationRule rule);

struct Violation
{
  std::string field_path;
  ViolationRule rule;
  std::string detail;
};

struct ValidationReport
{
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

struct UnknownModel : std::runtime_error
{
  explicit UnknownModel(const std::string & name)
  : std::runtime_error("unknown model: " + name)
  {
  }
};

// Checks a JSON-like value against a declared model: required presence,
// primitive types, pattern (whole-value match over the allowed alphabet),
// inclusive min/max, minLength/maxLength; recurses into nested Named fields.
ValidationReport validate_value(const std::string & model_name, const Json & value,
  const SemanticModule & module);

}  // namespace tea
