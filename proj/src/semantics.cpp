// semantics.cpp - semantic analysis and model-constraint validation
#include "tea/semantics.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

namespace tea
{

namespace
{

using Kind = TypeExpr::Kind;

TypeExpr t_string() { return TypeExpr::primitive(Kind::String); }
TypeExpr t_number() { return TypeExpr::primitive(Kind::Number); }
TypeExpr t_bool() { return TypeExpr::primitive(Kind::Boolean); }
TypeExpr t_any() { return TypeExpr::primitive(Kind::Any); }
TypeExpr t_readable() { return TypeExpr::primitive(Kind::Readable); }
TypeExpr t_map_ss() { return TypeExpr::map_of(t_string(), t_string()); }

// Field types of the builtin __request record.
std::optional<TypeExpr> request_field_type(const std::string & field)
{
  if (field == "method" || field == "pathname" || field == "protocol" || field == "host") {
    return t_string();
  }
  if (field == "port") return t_number();
  if (field == "query" || field == "headers") return t_map_ss();
  if (field == "body") return t_readable();
  return std::nullopt;
}

std::optional<TypeExpr> response_field_type(const std::string & field)
{
  if (field == "statusCode") return t_number();
  if (field == "statusMessage") return t_string();
  if (field == "headers") return t_map_ss();
  if (field == "body") return t_readable();
  return std::nullopt;
}

}  // namespace

const std::map<std::string, BuiltinModuleDescriptor> & builtin_modules()
{
  static const std::map<std::string, BuiltinModuleDescriptor> registry = [] {
    std::map<std::string, BuiltinModuleDescriptor> m;
    BuiltinModuleDescriptor util;
    util.name = "Util";
    util.functions["readAsJSON"] = BuiltinFunction{{t_readable()}, t_any()};
    util.functions["toJSONString"] = BuiltinFunction{{t_any()}, t_string()};
    util.functions["toString"] = BuiltinFunction{{t_any()}, t_string()};
    m["Util"] = std::move(util);
    return m;
  }();
  return registry;
}

namespace
{

class Analyzer
{
public:
  explicit Analyzer(SemanticModule & module) : mod_(module) {}

  void run()
  {
    collect_declarations();
    resolve_imports();
    for (auto & model : mod_.tree.models) check_model(model);
    for (auto & bt : mod_.tree.behavior_types) {
      for (auto & p : bt.param_types) check_type(p);
      check_type(bt.return_type);
    }
    for (auto & api : mod_.tree.apis) check_api(api);
    std::stable_sort(mod_.diagnostics.begin(), mod_.diagnostics.end(),
      [](const Diagnostic & a, const Diagnostic & b) {
        if (a.span.begin.line != b.span.begin.line) return a.span.begin.line < b.span.begin.line;
        return a.span.begin.column < b.span.begin.column;
      });
  }

private:
  void diag(Severity sev, const char * code, std::string message, Span span)
  {
    mod_.diagnostics.push_back({sev, code, std::move(message), span});
  }

  void collect_declarations()
  {
    std::set<std::string> seen;
    auto declare = [&](const std::string & name, Span span) {
      if (!seen.insert(name).second) {
        diag(Severity::Error, "duplicate-decl", "duplicate declaration of '" + name + "'", span);
        return false;
      }
      return true;
    };
    for (const auto & model : mod_.tree.models) {
      if (declare(model.name, model.span)) mod_.models[model.name] = &model;
    }
    for (const auto & bt : mod_.tree.behavior_types) {
      if (declare(bt.name, bt.span)) mod_.behaviors[bt.name] = &bt;
    }
    for (const auto & api : mod_.tree.apis) {
      if (declare(api.name, api.span)) mod_.apis[api.name] = &api;
    }
  }

  void resolve_imports()
  {
    for (const auto & imp : mod_.tree.imports) {
      auto it = builtin_modules().find(imp.name);
      if (it == builtin_modules().end()) {
        diag(Severity::Error, "unknown-import", "unknown module '" + imp.name + "'", imp.span);
      } else {
        mod_.imports[imp.name] = &it->second;
      }
    }
  }

  void check_type(const TypeExpr & t)
  {
    switch (t.kind) {
      case Kind::Named:
        if (!mod_.models.count(t.name)) {
          diag(Severity::Error, "unknown-type", "unknown type '" + t.name + "'", t.span);
        }
        break;
      case Kind::Map:
        if (t.key->kind != Kind::String) {
          diag(Severity::Error, "map-key-type", "map keys must be string", t.span);
        }
        check_type(*t.value);
        break;
      case Kind::Array:
        check_type(*t.value);
        break;
      default:
        break;
    }
  }

  void check_model(const ModelDecl & model)
  {
    static const std::set<std::string> kAttrKeys = {"pattern", "min", "max", "maxLength",
      "minLength"};
    std::set<std::string> fields;
    for (const auto & f : model.fields) {
      if (!fields.insert(f.name).second) {
        diag(Severity::Error, "duplicate-field",
          "duplicate field '" + f.name + "' in model '" + model.name + "'", f.span);
      }
      check_type(f.type);
      for (const auto & [key, value] : f.attributes) {
        if (!kAttrKeys.count(key)) {
          diag(Severity::Error, "unknown-attribute", "unknown field attribute '" + key + "'",
            value->span);
        }
      }
    }
  }

  // ---------------------------------------------------------------- api body

  struct Scope
  {
    std::map<std::string, TypeExpr> vars;
    bool in_request = false;
    const ApiDecl * api = nullptr;
  };

  void check_api(const ApiDecl & api)
  {
    for (const auto & p : api.params) check_type(p.type);
    check_type(api.return_type);

    Scope scope;
    scope.api = &api;
    for (const auto & p : api.params) scope.vars[p.name] = p.type;

    scope.in_request = true;
    check_block(api.request_block, scope);
    scope.in_request = false;
    check_block(api.returns_block, scope);
  }

  void check_block(const Block & block, Scope scope)
  {
    for (const auto & stmt : block) check_stmt(*stmt, scope);
  }

  void check_stmt(const Stmt & stmt, Scope & scope)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          scope.vars[node.name] = type_of(*node.init, scope);
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          check_assign(node, stmt.span, scope);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          check_return(node, stmt.span, scope);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          type_of(*node.expr, scope);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (const auto & arm : node.arms) {
            if (arm.cond) {
              TypeExpr t = type_of(*arm.cond, scope);
              if (t.kind != Kind::Boolean && t.kind != Kind::Any) {
                diag(Severity::Error, "type-mismatch",
                  "if condition must be boolean, got " + to_string(t), arm.cond->span);
              }
            }
            check_block(arm.body, scope);
          }
        }
      },
      stmt.node);
  }

  void check_assign(const AssignStmt & node, Span span, Scope & scope)
  {
    const std::string & head = node.target.front();
    TypeExpr value_type = type_of(*node.value, scope);
    if (head == "__response" && scope.in_request) {
      diag(Severity::Error, "assign-response",
        "cannot assign to __response inside the request block", span);
      return;
    }
    if (head == "__request" && !scope.in_request) {
      diag(Severity::Error, "assign-request",
        "cannot mutate __request inside the returns block", span);
      return;
    }
    std::optional<TypeExpr> target = lvalue_type(node.target, node.target_span, scope);
    if (!target) return;
    require_assignable(*target, value_type, node.value->span);
  }

  std::optional<TypeExpr> lvalue_type(const std::vector<std::string> & path, Span span,
    Scope & scope)
  {
    TypeExpr current;
    std::size_t i = 1;
    const std::string & head = path.front();
    if (head == "__request" || head == "__response") {
      if (path.size() < 2) {
        diag(Severity::Error, "bad-lvalue", "cannot assign to " + head + " as a whole", span);
        return std::nullopt;
      }
      auto field =
        head == "__request" ? request_field_type(path[1]) : response_field_type(path[1]);
      if (!field) {
        diag(Severity::Error, "unknown-field", head + " has no field '" + path[1] + "'", span);
        return std::nullopt;
      }
      current = *field;
      i = 2;
    } else {
      auto it = scope.vars.find(head);
      if (it == scope.vars.end()) {
        diag(Severity::Error, "unknown-name", "unknown name '" + head + "'", span);
        return std::nullopt;
      }
      current = it->second;
    }
    for (; i < path.size(); ++i) {
      auto next = member_type(current, path[i], span);
      if (!next) return std::nullopt;
      current = *next;
    }
    return current;
  }

  void check_return(const ReturnStmt & node, Span span, Scope & scope)
  {
    if (scope.in_request) {
      diag(Severity::Error, "return-in-request",
        "return is not allowed in the request block", span);
      return;
    }
    const TypeExpr & declared = scope.api->return_type;
    if (!node.value) {
      if (declared.kind != Kind::Void) {
        diag(Severity::Error, "type-mismatch",
          "api returns " + to_string(declared) + " but return has no value", span);
      }
      return;
    }
    TypeExpr actual = type_of(*node.value, scope);
    if (actual.kind == Kind::Any && declared.kind != Kind::Any) {
      diag(Severity::Warning, "any-cast",
        "implicit any-to-" + to_string(declared) + " cast at return", node.value->span);
      return;
    }
    require_assignable(declared, actual, node.value->span);
  }

  void require_assignable(const TypeExpr & target, const TypeExpr & value, Span span)
  {
    if (!assignable(target, value)) {
      diag(Severity::Error, "type-mismatch",
        "cannot assign " + to_string(value) + " to " + to_string(target), span);
    } else if (value.kind == Kind::Any && target.kind == Kind::Named) {
      diag(Severity::Warning, "any-cast",
        "implicit any-to-" + target.name + " cast", span);
    }
  }

  static bool assignable(const TypeExpr & target, const TypeExpr & value)
  {
    if (target.kind == Kind::Any || value.kind == Kind::Any) return true;
    // string payloads may flow into readable request/response bodies
    if (target.kind == Kind::Readable && value.kind == Kind::String) return true;
    if (target.kind != value.kind) return false;
    switch (target.kind) {
      case Kind::Named:
        return target.name == value.name;
      case Kind::Map:
        return assignable(*target.value, *value.value);
      case Kind::Array:
        return assignable(*target.value, *value.value);
      default:
        return true;
    }
  }

  std::optional<TypeExpr> member_type(const TypeExpr & base, const std::string & member,
    Span span)
  {
    switch (base.kind) {
      case Kind::Any:
        return t_any();
      case Kind::Map:
        return *base.value;
      case Kind::Named: {
        auto it = mod_.models.find(base.name);
        if (it != mod_.models.end()) {
          for (const auto & f : it->second->fields) {
            if (f.name == member) return f.type;
          }
        }
        diag(Severity::Error, "unknown-field",
          "model '" + base.name + "' has no field '" + member + "'", span);
        return std::nullopt;
      }
      default:
        diag(Severity::Error, "bad-member-access",
          to_string(base) + " has no members", span);
        return std::nullopt;
    }
  }

  TypeExpr type_of(Expr & expr, Scope & scope)
  {
    TypeExpr t = compute_type(expr, scope);
    expr.type = t;
    return t;
  }

  // const contexts (attributes) never reach here; bodies are mutated in place
  TypeExpr type_of(const Expr & expr, Scope & scope)
  {
    return type_of(const_cast<Expr &>(expr), scope);
  }

  TypeExpr compute_type(Expr & expr, Scope & scope)
  {
    return std::visit(
      [&](auto & node) -> TypeExpr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, StringLitExpr>) {
          return t_string();
        } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
          for (auto & part : node.parts) {
            if (part.is_hole) {
              TypeExpr ht = type_of(*part.hole, scope);
              if (ht.kind == Kind::Void || ht.kind == Kind::Map || ht.kind == Kind::Array ||
                  ht.kind == Kind::Named) {
                diag(Severity::Error, "type-mismatch",
                  "template hole must be a scalar, got " + to_string(ht), part.hole->span);
              }
            }
          }
          return t_string();
        } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
          return t_number();
        } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
          return t_bool();
        } else if constexpr (std::is_same_v<T, NullLitExpr>) {
          return t_any();
        } else if constexpr (std::is_same_v<T, MapLitExpr>) {
          std::optional<TypeExpr> unified;
          for (auto & [key, value] : node.entries) {
            TypeExpr vt = type_of(*value, scope);
            if (!unified) {
              unified = vt;
            } else if (!same_type(*unified, vt)) {
              unified = t_any();
            }
          }
          return TypeExpr::map_of(t_string(), unified.value_or(t_any()));
        } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
          return path_type(node, expr.span, scope);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          return call_type(node, expr.span, scope);
        } else if constexpr (std::is_same_v<T, BehaviorCallExpr>) {
          return behavior_type(node, expr.span, scope);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return binary_type(node, expr.span, scope);
        }
      },
      expr.node);
  }

  TypeExpr path_type(PathAccessExpr & node, Span span, Scope & scope)
  {
    const std::string & head = node.segments.front();
    TypeExpr current;
    std::size_t i = 1;
    if (head == "__request" || head == "__response") {
      if (head == "__request" && !scope.in_request) {
        diag(Severity::Warning, "request-read-in-returns",
          "reading __request inside the returns block", span);
      }
      if (head == "__response" && scope.in_request) {
        diag(Severity::Error, "response-read-in-request",
          "__response is not available inside the request block", span);
      }
      if (node.segments.size() < 2) return t_any();
      auto field =
        head == "__request" ? request_field_type(node.segments[1])
                            : response_field_type(node.segments[1]);
      if (!field) {
        diag(Severity::Error, "unknown-field",
          head + " has no field '" + node.segments[1] + "'", span);
        return t_any();
      }
      current = *field;
      i = 2;
    } else {
      auto it = scope.vars.find(head);
      if (it == scope.vars.end()) {
        diag(Severity::Error, "unknown-name", "unknown name '" + head + "'", span);
        return t_any();
      }
      current = it->second;
    }
    for (; i < node.segments.size(); ++i) {
      auto next = member_type(current, node.segments[i], span);
      if (!next) return t_any();
      current = *next;
    }
    return current;
  }

  TypeExpr call_type(CallExpr & node, Span span, Scope & scope)
  {
    auto it = mod_.imports.find(node.module);
    if (it == mod_.imports.end()) {
      diag(Severity::Error, "unknown-import",
        "module '" + node.module + "' is not imported", span);
      for (auto & arg : node.args) type_of(*arg, scope);
      return t_any();
    }
    auto fn = it->second->functions.find(node.method);
    if (fn == it->second->functions.end()) {
      diag(Severity::Error, "unknown-function",
        "module '" + node.module + "' has no function '" + node.method + "'", span);
      for (auto & arg : node.args) type_of(*arg, scope);
      return t_any();
    }
    check_call_args(fn->second.params, node.args, node.module + "." + node.method, span, scope);
    return fn->second.return_type;
  }

  TypeExpr behavior_type(BehaviorCallExpr & node, Span span, Scope & scope)
  {
    auto it = mod_.behaviors.find(node.name);
    if (it == mod_.behaviors.end()) {
      diag(Severity::Error, "unknown-behavior",
        "behavior '@" + node.name + "' is not declared", span);
      for (auto & arg : node.args) type_of(*arg, scope);
      return t_any();
    }
    check_call_args(it->second->param_types, node.args, "@" + node.name, span, scope);
    return it->second->return_type;
  }

  void check_call_args(const std::vector<TypeExpr> & params, std::vector<ExprPtr> & args,
    const std::string & callee, Span span, Scope & scope)
  {
    if (params.size() != args.size()) {
      diag(Severity::Error, "arity-mismatch",
        callee + " expects " + std::to_string(params.size()) + " argument(s), got " +
          std::to_string(args.size()),
        span);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      TypeExpr at = type_of(*args[i], scope);
      if (i < params.size() && !assignable(params[i], at)) {
        diag(Severity::Error, "type-mismatch",
          "argument " + std::to_string(i + 1) + " of " + callee + ": cannot pass " +
            to_string(at) + " as " + to_string(params[i]),
          args[i]->span);
      }
    }
  }

  TypeExpr binary_type(BinaryExpr & node, Span span, Scope & scope)
  {
    TypeExpr lt = type_of(*node.lhs, scope);
    TypeExpr rt = type_of(*node.rhs, scope);
    switch (node.op) {
      case BinaryExpr::Op::Eq:
      case BinaryExpr::Op::Ne:
        return t_bool();
      case BinaryExpr::Op::And:
      case BinaryExpr::Op::Or:
        for (const TypeExpr * t : {&lt, &rt}) {
          if (t->kind != Kind::Boolean && t->kind != Kind::Any) {
            diag(Severity::Error, "type-mismatch",
              std::string(to_string(node.op)) + " operands must be boolean, got " + to_string(*t),
              span);
          }
        }
        return t_bool();
      case BinaryExpr::Op::Add:
        if (lt.kind == Kind::Any || rt.kind == Kind::Any) return t_any();
        if (lt.kind == Kind::Number && rt.kind == Kind::Number) return t_number();
        if (lt.kind == Kind::String && rt.kind == Kind::String) return t_string();
        diag(Severity::Error, "type-mismatch",
          "cannot apply + to " + to_string(lt) + " and " + to_string(rt), span);
        return t_any();
    }
    return t_any();
  }

  SemanticModule & mod_;
};

}  // namespace

SemanticModule analyze(SyntaxTree tree)
{
  SemanticModule module;
  module.tree = std::move(tree);
  Analyzer(module).run();
  return module;
}

std::string render(const Diagnostic & d, const std::string & filename)
{
  const char * sev = d.severity == Severity::Error ? "error" : "warning";
  return filename + ":" + std::to_string(d.span.begin.line) + ":" +
         std::to_string(d.span.begin.column) + ": " + sev + "[" + d.code + "]: " + d.message;
}

// ------------------------------------------------------------------ validate

const char * to_string(ViolationRule rule)
{
  switch (rule) {
    case ViolationRule::MissingRequired: return "missing-required";
    case ViolationRule::Pattern: return "pattern";
    case ViolationRule::Min: return "min";
    case ViolationRule::Max: return "max";
    case ViolationRule::TypeMismatch: return "type-mismatch";
  }
  return "?";
}

namespace
{

std::string type_name_of(const Json & v)
{
  if (v.is_string()) return "string";
  if (v.is_number()) return "number";
  if (v.is_boolean()) return "boolean";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  if (v.is_null()) return "null";
  return "value";
}

// Decimal rendering for numbers (integers without a fraction part).
std::string scalar_text(const Json & v)
{
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

class Validator
{
public:
  Validator(const SemanticModule & module, ValidationReport & report)
  : mod_(module), report_(report)
  {
  }

  void check_model(const std::string & model_name, const Json & value,
    const std::string & prefix)
  {
    auto it = mod_.models.find(model_name);
    if (it == mod_.models.end()) throw UnknownModel(model_name);
    const ModelDecl & model = *it->second;
    if (!value.is_object()) {
      add(prefix.empty() ? model_name : prefix, ViolationRule::TypeMismatch,
        "expected object, got " + type_name_of(value));
      return;
    }
    for (const auto & field : model.fields) {
      std::string path = prefix.empty() ? field.name : prefix + "." + field.name;
      auto fit = value.find(field.name);
      if (fit == value.end() || fit->is_null()) {
        if (!field.optional) {
          add(path, ViolationRule::MissingRequired, "field '" + field.name + "' is required");
        }
        continue;
      }
      check_field(field, *fit, path);
    }
  }

private:
  void add(std::string path, ViolationRule rule, std::string detail)
  {
    report_.violations.push_back({std::move(path), rule, std::move(detail)});
  }

  void check_field(const ModelField & field, const Json & v, const std::string & path)
  {
    switch (field.type.kind) {
      case Kind::String:
        if (!v.is_string()) {
          add(path, ViolationRule::TypeMismatch, "expected string, got " + type_name_of(v));
          return;
        }
        break;
      case Kind::Number:
        if (!v.is_number()) {
          add(path, ViolationRule::TypeMismatch, "expected number, got " + type_name_of(v));
          return;
        }
        break;
      case Kind::Boolean:
        if (!v.is_boolean()) {
          add(path, ViolationRule::TypeMismatch, "expected boolean, got " + type_name_of(v));
          return;
        }
        break;
      case Kind::Array: {
        if (!v.is_array()) {
          add(path, ViolationRule::TypeMismatch, "expected array, got " + type_name_of(v));
          return;
        }
        if (field.type.value->kind == Kind::Named) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            check_model(field.type.value->name, v[i], path + "." + std::to_string(i));
          }
        }
        return;
      }
      case Kind::Map:
        if (!v.is_object()) {
          add(path, ViolationRule::TypeMismatch, "expected map, got " + type_name_of(v));
        }
        return;
      case Kind::Named:
        check_model(field.type.name, v, path);
        return;
      case Kind::Readable:
        if (!v.is_string()) {
          add(path, ViolationRule::TypeMismatch, "expected readable, got " + type_name_of(v));
        }
        return;
      case Kind::Any:
      case Kind::Void:
        return;
    }
    check_constraints(field, v, path);
  }

  void check_constraints(const ModelField & field, const Json & v, const std::string & path)
  {
    for (const auto & [key, attr] : field.attributes) {
      if (key == "pattern") {
        const auto * lit = attr->as<StringLitExpr>();
        if (lit == nullptr) continue;
        // Whole-value match over the pattern's alphabet: the value must be one
        // or more runs of the pattern, so '[a-zA-Z1-9]' admits "jack" while
        // '\d+' still rejects "1x8".
        std::regex re("(?:" + lit->value + ")+");
        std::string text = scalar_text(v);
        if (!std::regex_match(text, re)) {
          add(path, ViolationRule::Pattern, "'" + text + "' !~ /" + lit->value + "/");
        }
      } else if (key == "min" || key == "max") {
        const auto * lit = attr->as<NumberLitExpr>();
        if (lit == nullptr || !v.is_number()) continue;
        double x = v.get<double>();
        if (key == "min" && x < lit->value) {
          add(path, ViolationRule::Min, scalar_text(v) + " < " + lit->lexeme);
        } else if (key == "max" && x > lit->value) {
          add(path, ViolationRule::Max, scalar_text(v) + " > " + lit->lexeme);
        }
      } else if (key == "minLength" || key == "maxLength") {
        const auto * lit = attr->as<NumberLitExpr>();
        if (lit == nullptr || !v.is_string()) continue;
        auto len = static_cast<double>(v.get<std::string>().size());
        if (key == "minLength" && len < lit->value) {
          add(path, ViolationRule::Min,
            "length " + std::to_string(static_cast<long long>(len)) + " < " + lit->lexeme);
        } else if (key == "maxLength" && len > lit->value) {
          add(path, ViolationRule::Max,
            "length " + std::to_string(static_cast<long long>(len)) + " > " + lit->lexeme);
        }
      }
    }
  }

  const SemanticModule & mod_;
  ValidationReport & report_;
};

}  // namespace

ValidationReport validate_value(const std::string & model_name, const Json & value,
  const SemanticModule & module)
{
  ValidationReport report;
  Validator(module, report).check_model(model_name, value, "");
  return report;
}

}  // namespace tea
