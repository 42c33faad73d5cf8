// ast.hpp - typed syntax tree for TeaDSL modules
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tea/source.hpp"

namespace tea
{

// ============================================================================
// Types
// ============================================================================

struct TypeExpr
{
  enum class Kind
  {
    String,
    Number,
    Boolean,
    Any,
    Readable,
    Void,
    Map,
    Array,
    Named,
  };

  Kind kind = Kind::Any;
  std::string name;                        // Named
  std::shared_ptr<TypeExpr> key;           // Map
  std::shared_ptr<TypeExpr> value;         // Map value / Array element
  Span span;

  static TypeExpr primitive(Kind k)
  {
    TypeExpr t;
    t.kind = k;
    return t;
  }
  static TypeExpr named(std::string n)
  {
    TypeExpr t;
    t.kind = Kind::Named;
    t.name = std::move(n);
    return t;
  }
  static TypeExpr map_of(TypeExpr k, TypeExpr v)
  {
    TypeExpr t;
    t.kind = Kind::Map;
    t.key = std::make_shared<TypeExpr>(std::move(k));
    t.value = std::make_shared<TypeExpr>(std::move(v));
    return t;
  }
  static TypeExpr array_of(TypeExpr elem)
  {
    TypeExpr t;
    t.kind = Kind::Array;
    t.value = std::make_shared<TypeExpr>(std::move(elem));
    return t;
  }
};

bool same_type(const TypeExpr & a, const TypeExpr & b);
std::string to_string(const TypeExpr & t);

// ============================================================================
// Expressions
// ============================================================================

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct StringLitExpr
{
  std::string value;
};

// Interleaved literal chunks and ${...} holes, in source order.
struct TemplateStringExpr
{
  struct Part
  {
    bool is_hole = false;
    std::string literal;  // !is_hole
    ExprPtr hole;         // is_hole
  };
  std::vector<Part> parts;
};

struct NumberLitExpr
{
  double value = 0;
  bool is_integer = false;
  std::string lexeme;
};

struct BoolLitExpr
{
  bool value = false;
};

struct NullLitExpr
{
};

struct MapLitExpr
{
  std::vector<std::pair<std::string, ExprPtr>> entries;  // source order
};

struct PathAccessExpr
{
  std::vector<std::string> segments;  // first is an identifier or __request/__response
};

struct CallExpr
{
  std::string module;  // receiver module, e.g. "Util"
  std::string method;
  std::vector<ExprPtr> args;
};

struct BehaviorCallExpr
{
  std::string name;  // without "@"
  std::vector<ExprPtr> args;
};

struct BinaryExpr
{
  enum class Op
  {
    Eq,
    Ne,
    And,
    Or,
    Add,
  };
  Op op = Op::Add;
  ExprPtr lhs;
  ExprPtr rhs;
};

const char * to_string(BinaryExpr::Op op);

struct Expr
{
  Span span;
  // Filled in by semantic analysis.
  TypeExpr type = TypeExpr::primitive(TypeExpr::Kind::Any);
  std::variant<StringLitExpr, TemplateStringExpr, NumberLitExpr, BoolLitExpr, NullLitExpr,
    MapLitExpr, PathAccessExpr, CallExpr, BehaviorCallExpr, BinaryExpr>
    node;

  template <typename T>
  const T * as() const
  {
    return std::get_if<T>(&node);
  }
};

// ============================================================================
// Statements
// ============================================================================

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct VarDeclStmt
{
  std::string name;
  ExprPtr init;
};

struct AssignStmt
{
  std::vector<std::string> target;  // lvalue path
  Span target_span;
  ExprPtr value;
};

struct IfStmt
{
  struct Arm
  {
    ExprPtr cond;  // null for the trailing else
    Block body;
  };
  std::vector<Arm> arms;  // if, else-ifs, optional else (cond == nullptr)
};

struct ReturnStmt
{
  ExprPtr value;
};

struct ExprStmt
{
  ExprPtr expr;
};

struct Stmt
{
  Span span;
  std::variant<VarDeclStmt, AssignStmt, IfStmt, ReturnStmt, ExprStmt> node;
};

// ============================================================================
// Declarations
// ============================================================================

struct ImportDecl
{
  std::string name;
  Span span;
};

struct ModelField
{
  std::string name;
  bool optional = false;
  TypeExpr type;
  // Keys drawn from {pattern, min, max, maxLength, minLength}; values are literals.
  std::vector<std::pair<std::string, ExprPtr>> attributes;
  Span span;
};

struct ModelDecl
{
  std::string name;
  std::vector<ModelField> fields;
  Span span;
};

struct BehaviorTypeDecl
{
  std::string name;  // without "@"
  std::vector<TypeExpr> param_types;
  TypeExpr return_type;
  Span span;
};

struct ApiParam
{
  std::string name;
  TypeExpr type;
  Span span;
};

struct ApiDecl
{
  std::string name;
  std::vector<ApiParam> params;
  TypeExpr return_type;
  Block request_block;
  Block returns_block;
  Span span;
};

struct SyntaxTree
{
  std::vector<ImportDecl> imports;
  std::vector<ModelDecl> models;
  std::vector<BehaviorTypeDecl> behavior_types;
  std::vector<ApiDecl> apis;
};

}  // namespace tea
