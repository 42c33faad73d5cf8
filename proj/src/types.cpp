// types.cpp - TypeExpr helpers
#include "tea/ast.hpp"

namespace tea
{

bool same_type(const TypeExpr & a, const TypeExpr & b)
{
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeExpr::Kind::Named:
      return a.name == b.name;
    case TypeExpr::Kind::Map:
      return same_type(*a.key, *b.key) && same_type(*a.value, *b.value);
    case TypeExpr::Kind::Array:
      return same_type(*a.value, *b.value);
    default:
      return true;
  }
}

std::string to_string(const TypeExpr & t)
{
  switch (t.kind) {
    case TypeExpr::Kind::String: return "string";
    case TypeExpr::Kind::Number: return "number";
    case TypeExpr::Kind::Boolean: return "boolean";
    case TypeExpr::Kind::Any: return "any";
    case TypeExpr::Kind::Readable: return "readable";
    case TypeExpr::Kind::Void: return "void";
    case TypeExpr::Kind::Map:
      return "map[" + to_string(*t.key) + "]" + to_string(*t.value);
    case TypeExpr::Kind::Array: return "[" + to_string(*t.value) + "]";
    case TypeExpr::Kind::Named: return t.name;
  }
  return "?";
}

const char * to_string(BinaryExpr::Op op)
{
  switch (op) {
    case BinaryExpr::Op::Eq: return "==";
    case BinaryExpr::Op::Ne: return "!=";
    case BinaryExpr::Op::And: return "&&";
    case BinaryExpr::Op::Or: return "||";
    case BinaryExpr::Op::Add: return "+";
  }
  return "?";
}

}  // namespace tea
