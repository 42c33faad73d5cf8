// runtime.cpp - tree-walking interpreter for api blocks
#include "tea/runtime.hpp"

#include <chrono>
#include <thread>

namespace tea
{

std::string ValidationFailed::summarize(const ValidationReport & r)
{
  std::string out;
  for (const auto & v : r.violations) {
    if (!out.empty()) out += "; ";
    out += v.field_path + " (" + to_string(v.rule) + ": " + v.detail + ")";
  }
  return out.empty() ? "ok" : out;
}

BehaviorRegistry BehaviorRegistry::with_defaults()
{
  BehaviorRegistry registry;
  registry.bind("toJSONString", [](const std::vector<Json> & args) -> Json {
    if (args.size() != 1) throw EvalError("@toJSONString expects 1 argument");
    return args[0].dump();
  });
  registry.bind("parseJSON", [](const std::vector<Json> & args) -> Json {
    if (args.size() != 1 || !args[0].is_string()) {
      throw EvalError("@parseJSON expects 1 string argument");
    }
    return Json::parse(args[0].get<std::string>());
  });
  return registry;
}

const BehaviorFn * BehaviorRegistry::find(const std::string & name) const
{
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

namespace
{

std::string to_display(const Json & v)
{
  if (v.is_string()) return v.get<std::string>();
  return v.dump();  // numbers keep integer rendering, true/false, etc.
}

Json map_to_json(const std::map<std::string, std::string> & m)
{
  Json out = Json::object();
  for (const auto & [k, v] : m) out[k] = v;
  return out;
}

std::map<std::string, std::string> json_to_map(const Json & v, Span span)
{
  if (!v.is_object()) throw EvalError("expected a map value", span);
  std::map<std::string, std::string> out;
  for (const auto & [k, item] : v.items()) {
    if (item.is_null()) throw EvalError("null map entry '" + k + "'", span);
    out[k] = to_display(item);
  }
  return out;
}

Json builtin_call(const std::string & module, const std::string & method,
  const std::vector<Json> & args, Span span)
{
  if (module == "Util") {
    if (method == "readAsJSON") {
      if (args.size() != 1 || !args[0].is_string()) {
        throw EvalError("Util.readAsJSON expects a readable", span);
      }
      try {
        return Json::parse(args[0].get<std::string>());
      } catch (const Json::parse_error & e) {
        throw EvalError(std::string("Util.readAsJSON: ") + e.what(), span);
      }
    }
    if (method == "toJSONString") {
      if (args.size() != 1) throw EvalError("Util.toJSONString expects 1 argument", span);
      return args[0].dump();
    }
    if (method == "toString") {
      if (args.size() != 1) throw EvalError("Util.toString expects 1 argument", span);
      return to_display(args[0]);
    }
  }
  throw EvalError("unknown builtin " + module + "." + method, span);
}

Json path_root(const std::string & head, const EvalEnv & env, Span span)
{
  if (head == "__request") {
    if (env.exchange == nullptr) throw EvalError("__request is not bound here", span);
    const HttpExchange & ex = *env.exchange;
    return Json{{"method", ex.request.method}, {"pathname", ex.request.pathname},
      {"query", map_to_json(ex.request.query)}, {"headers", map_to_json(ex.request.headers)},
      {"body", ex.request.body}, {"protocol", ex.protocol}, {"host", ex.host},
      {"port", ex.port}};
  }
  if (head == "__response") {
    if (env.response == nullptr) throw EvalError("__response is not bound here", span);
    const HttpResponse & resp = *env.response;
    return Json{{"statusCode", resp.status_code}, {"statusMessage", resp.status_message},
      {"headers", map_to_json(resp.headers)}, {"body", resp.body}};
  }
  auto it = env.vars.find(head);
  if (it == env.vars.end()) throw EvalError("unknown name '" + head + "'", span);
  return it->second;
}

}  // namespace

Json eval_expr(const Expr & expr, EvalEnv & env)
{
  return std::visit(
    [&](const auto & node) -> Json {
      using T = std::decay_t<decltype(node)>;
      if constexpr (std::is_same_v<T, StringLitExpr>) {
        return node.value;
      } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
        std::string out;
        for (const auto & part : node.parts) {
          if (!part.is_hole) {
            out += part.literal;
            continue;
          }
          Json v = eval_expr(*part.hole, env);
          if (v.is_null()) throw EvalError("null value in template hole", part.hole->span);
          out += to_display(v);
        }
        return out;
      } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
        if (node.is_integer) return static_cast<long long>(node.value);
        return node.value;
      } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
        return node.value;
      } else if constexpr (std::is_same_v<T, NullLitExpr>) {
        return nullptr;
      } else if constexpr (std::is_same_v<T, MapLitExpr>) {
        Json out = Json::object();
        for (const auto & [key, value] : node.entries) out[key] = eval_expr(*value, env);
        return out;
      } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
        Json current = path_root(node.segments.front(), env, expr.span);
        for (std::size_t i = 1; i < node.segments.size(); ++i) {
          if (current.is_null()) {
            throw EvalError("null dereference at '" + node.segments[i - 1] + "'", expr.span);
          }
          if (!current.is_object() || !current.contains(node.segments[i])) {
            throw EvalError("no member '" + node.segments[i] + "'", expr.span);
          }
          current = current[node.segments[i]];
        }
        return current;
      } else if constexpr (std::is_same_v<T, CallExpr>) {
        std::vector<Json> args;
        for (const auto & arg : node.args) args.push_back(eval_expr(*arg, env));
        return builtin_call(node.module, node.method, args, expr.span);
      } else if constexpr (std::is_same_v<T, BehaviorCallExpr>) {
        if (env.behaviors == nullptr) throw EvalError("no behavior registry bound", expr.span);
        const BehaviorFn * fn = env.behaviors->find(node.name);
        if (fn == nullptr) throw EvalError("behavior '@" + node.name + "' is unbound", expr.span);
        std::vector<Json> args;
        for (const auto & arg : node.args) args.push_back(eval_expr(*arg, env));
        return (*fn)(args);
      } else if constexpr (std::is_same_v<T, BinaryExpr>) {
        switch (node.op) {
          case BinaryExpr::Op::And: {
            Json l = eval_expr(*node.lhs, env);
            if (!l.is_boolean()) throw EvalError("&& expects boolean", node.lhs->span);
            if (!l.get<bool>()) return false;  // short-circuit
            Json r = eval_expr(*node.rhs, env);
            if (!r.is_boolean()) throw EvalError("&& expects boolean", node.rhs->span);
            return r.get<bool>();
          }
          case BinaryExpr::Op::Or: {
            Json l = eval_expr(*node.lhs, env);
            if (!l.is_boolean()) throw EvalError("|| expects boolean", node.lhs->span);
            if (l.get<bool>()) return true;
            Json r = eval_expr(*node.rhs, env);
            if (!r.is_boolean()) throw EvalError("|| expects boolean", node.rhs->span);
            return r.get<bool>();
          }
          case BinaryExpr::Op::Eq:
            return eval_expr(*node.lhs, env) == eval_expr(*node.rhs, env);
          case BinaryExpr::Op::Ne:
            return eval_expr(*node.lhs, env) != eval_expr(*node.rhs, env);
          case BinaryExpr::Op::Add: {
            Json l = eval_expr(*node.lhs, env);
            Json r = eval_expr(*node.rhs, env);
            if (l.is_number() && r.is_number()) {
              if (l.is_number_integer() && r.is_number_integer()) {
                return l.get<long long>() + r.get<long long>();
              }
              return l.get<double>() + r.get<double>();
            }
            if (l.is_string() && r.is_string()) {
              return l.get<std::string>() + r.get<std::string>();
            }
            throw EvalError("+ expects two numbers or two strings", expr.span);
          }
        }
        throw EvalError("bad binary op", expr.span);
      }
    },
    expr.node);
}

namespace
{

struct ReturnSignal
{
  Json value;
};

class BlockRunner
{
public:
  BlockRunner(EvalEnv & env, HttpExchange * mutable_exchange)
  : env_(env), exchange_(mutable_exchange)
  {
  }

  // Throws ReturnSignal when a return statement fires.
  void run(const Block & block)
  {
    for (const auto & stmt : block) exec(*stmt);
  }

private:
  void exec(const Stmt & stmt)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          env_.vars[node.name] = eval_expr(*node.init, env_);
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          assign(node, stmt.span);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          throw ReturnSignal{node.value ? eval_expr(*node.value, env_) : Json(nullptr)};
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          eval_expr(*node.expr, env_);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (const auto & arm : node.arms) {
            if (!arm.cond) {
              run(arm.body);
              return;
            }
            Json cond = eval_expr(*arm.cond, env_);
            if (!cond.is_boolean()) throw EvalError("if condition must be boolean",
              arm.cond->span);
            if (cond.get<bool>()) {
              run(arm.body);
              return;
            }
          }
        }
      },
      stmt.node);
  }

  void assign(const AssignStmt & node, Span span)
  {
    const std::string & head = node.target.front();
    Json value = eval_expr(*node.value, env_);
    if (head == "__request") {
      if (exchange_ == nullptr) {
        // asserted at runtime as well as rejected by semantics
        throw EvalError("the returns block cannot mutate the outgoing request", span);
      }
      assign_request(node, value, span);
      return;
    }
    if (head == "__response") throw EvalError("__response is read-only", span);
    if (node.target.size() == 1) {
      env_.vars[head] = std::move(value);
      return;
    }
    auto it = env_.vars.find(head);
    if (it == env_.vars.end()) throw EvalError("unknown name '" + head + "'", span);
    Json * slot = &it->second;
    for (std::size_t i = 1; i + 1 < node.target.size(); ++i) {
      if (slot->is_null()) throw EvalError("null dereference in assignment", span);
      slot = &(*slot)[node.target[i]];
    }
    (*slot)[node.target.back()] = std::move(value);
  }

  void assign_request(const AssignStmt & node, Json & value, Span span)
  {
    if (node.target.size() < 2) throw EvalError("cannot assign to __request itself", span);
    HttpExchange & ex = *exchange_;
    const std::string & field = node.target[1];
    if (node.target.size() == 2) {
      if (field == "method") ex.request.method = expect_string(value, span);
      else if (field == "pathname") ex.request.pathname = expect_string(value, span);
      else if (field == "protocol") ex.protocol = expect_string(value, span);
      else if (field == "host") ex.host = expect_string(value, span);
      else if (field == "body") ex.request.body = expect_string(value, span);
      else if (field == "port") ex.port = expect_port(value, span);
      else if (field == "query") ex.request.query = json_to_map(value, span);
      else if (field == "headers") ex.request.headers = json_to_map(value, span);
      else throw EvalError("__request has no field '" + field + "'", span);
      return;
    }
    // __request.headers.x / __request.query.x
    if (node.target.size() == 3 && (field == "headers" || field == "query")) {
      auto & map = field == "headers" ? ex.request.headers : ex.request.query;
      if (value.is_null()) throw EvalError("null map entry", span);
      map[node.target[2]] = to_display(value);
      return;
    }
    throw EvalError("bad __request assignment target", span);
  }

  static std::string expect_string(const Json & v, Span span)
  {
    if (!v.is_string()) throw EvalError("expected a string value", span);
    return v.get<std::string>();
  }

  static int expect_port(const Json & v, Span span)
  {
    if (!v.is_number()) throw EvalError("port must be a number", span);
    int port = v.get<int>();
    if (port < 1 || port > 65535) throw EvalError("port out of range", span);
    return port;
  }

  EvalEnv & env_;
  HttpExchange * exchange_;
};

const ApiDecl & find_api(const SemanticModule & module, const std::string & api)
{
  auto it = module.apis.find(api);
  if (it == module.apis.end()) throw EvalError("unknown api '" + api + "'");
  return *it->second;
}

// Model-typed arguments go through validate_value; primitives get a shape check.
void check_args(const SemanticModule & module, const ApiDecl & api,
  const std::map<std::string, Json> & args)
{
  for (const auto & param : api.params) {
    auto it = args.find(param.name);
    if (it == args.end()) {
      ValidationReport report;
      report.violations.push_back({param.name, ViolationRule::MissingRequired,
        "argument '" + param.name + "' is required"});
      throw ValidationFailed("argument " + param.name, std::move(report));
    }
    const Json & v = it->second;
    auto fail = [&](const std::string & expected) {
      ValidationReport report;
      report.violations.push_back({param.name, ViolationRule::TypeMismatch,
        "expected " + expected});
      throw ValidationFailed("argument " + param.name, std::move(report));
    };
    switch (param.type.kind) {
      case TypeExpr::Kind::String:
        if (!v.is_string()) fail("string");
        break;
      case TypeExpr::Kind::Number:
        if (!v.is_number()) fail("number");
        break;
      case TypeExpr::Kind::Boolean:
        if (!v.is_boolean()) fail("boolean");
        break;
      case TypeExpr::Kind::Map:
        if (!v.is_object()) fail("map");
        break;
      case TypeExpr::Kind::Array:
        if (!v.is_array()) fail("array");
        break;
      case TypeExpr::Kind::Named: {
        ValidationReport report = validate_value(param.type.name, v, module);
        if (!report.ok()) throw ValidationFailed("argument " + param.name, std::move(report));
        break;
      }
      default:
        break;
    }
  }
}

}  // namespace

HttpExchange build_request(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, const RuntimeConfig & config,
  const BehaviorRegistry & registry)
{
  const ApiDecl & decl = find_api(module, api);
  check_args(module, decl, args);

  HttpExchange exchange;
  exchange.protocol = config.default_protocol;
  exchange.port = config.default_port;

  EvalEnv env;
  env.vars = args;
  env.exchange = &exchange;
  env.behaviors = &registry;
  BlockRunner runner(env, &exchange);
  try {
    runner.run(decl.request_block);
  } catch (const ReturnSignal &) {
    throw EvalError("return is not allowed in the request block");
  }
  return exchange;
}

Json invoke(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, Transport & transport,
  const BehaviorRegistry & registry, const RuntimeConfig & config)
{
  const ApiDecl & decl = find_api(module, api);
  HttpExchange exchange = build_request(module, api, args, config, registry);

  int attempts = 0;
  for (;;) {
    ++attempts;
    try {
      exchange.response = transport.send(exchange, config.timeout_ms);
      break;
    } catch (const TransportError & e) {
      if (attempts > config.retry_times) {
        throw TransportError(std::string(e.what()) + " (after " + std::to_string(attempts) +
                               " attempt(s))",
          attempts);
      }
      if (config.backoff_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(config.backoff_ms));
      }
    }
  }

  EvalEnv env;
  env.vars = args;
  env.exchange = &exchange;
  env.response = &exchange.response;
  env.behaviors = &registry;
  BlockRunner runner(env, nullptr);
  Json result = nullptr;
  try {
    runner.run(decl.returns_block);
  } catch (ReturnSignal & signal) {
    result = std::move(signal.value);
  }
  if (decl.return_type.kind == TypeExpr::Kind::Named) {
    ValidationReport report = validate_value(decl.return_type.name, result, module);
    if (!report.ok()) throw ValidationFailed("response " + decl.return_type.name,
      std::move(report));
  }
  return result;
}

}  // namespace tea
