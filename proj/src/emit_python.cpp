// emit_python.cpp - Python SDK emitter (the executable built-in target)
#include <sstream>

#include <nlohmann/json.hpp>

#include "tea/codegen.hpp"

namespace tea
{

namespace
{

const char * kPythonCore = R"PY("""Minimal runtime core for generated clients."""
import json
import re
import time


class RuntimeConfig:
    def __init__(self, retry_times=0, backoff_ms=100, timeout_ms=30000,
                 default_protocol='https', default_port=443):
        self.retry_times = retry_times
        self.backoff_ms = backoff_ms
        self.timeout_ms = timeout_ms
        self.default_protocol = default_protocol
        self.default_port = default_port


class TeaRequest:
    def __init__(self, config):
        self.method = 'GET'
        self.pathname = ''
        self.query = {}
        self.headers = {}
        self.body = ''
        self.protocol = config.default_protocol
        self.port = config.default_port
        self.host = ''


class TeaResponse:
    def __init__(self):
        self.statusCode = 0
        self.statusMessage = ''
        self.headers = {}
        self.body = ''


class TransportError(Exception):
    def __init__(self, message, attempts=1):
        super().__init__(message)
        self.attempts = attempts


class TeaEvalError(Exception):
    pass


class TeaValidationError(Exception):
    def __init__(self, violations):
        super().__init__('; '.join('%s (%s: %s)' % v for v in violations))
        self.violations = violations


class Transport:
    def send(self, request, timeout_ms):
        raise NotImplementedError


class MockTransport(Transport):
    """First-match-wins rule list; same fixture format as the toolchain CLI."""

    def __init__(self, rules):
        self.rules = rules
        self.requests = []
        self.call_count = 0

    @classmethod
    def from_file(cls, path):
        with open(path, 'r', encoding='utf-8') as f:
            return cls(json.load(f))

    def send(self, request, timeout_ms):
        self.call_count += 1
        self.requests.append({'method': request.method,
                              'pathname': request.pathname,
                              'headers': dict(request.headers)})
        for rule in self.rules:
            match = rule.get('match', {})
            if match.get('method') and match['method'] != request.method:
                continue
            if match.get('pathname') and match['pathname'] != request.pathname:
                continue
            respond = rule['respond']
            resp = TeaResponse()
            resp.statusCode = respond.get('statusCode', 200)
            resp.statusMessage = respond.get('statusMessage', '')
            resp.headers = dict(respond.get('headers', {}))
            body = respond.get('body', '')
            resp.body = body if isinstance(body, str) else json.dumps(body)
            return resp
        raise TransportError('no mock rule matches %s %s'
                             % (request.method, request.pathname))


class TeaCore:
    @staticmethod
    def to_str(value):
        if value is None:
            raise TeaEvalError('null value rendered to string')
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, (dict, list)):
            return json.dumps(value, separators=(',', ':'))
        return str(value)

    @staticmethod
    def to_str_map(value):
        return {k: TeaCore.to_str(v) for k, v in value.items()}

    @staticmethod
    def read_as_json(body):
        try:
            return json.loads(body)
        except ValueError as e:
            raise TeaEvalError('readAsJSON: %s' % e)

    @staticmethod
    def to_json_string(value):
        return json.dumps(value, separators=(',', ':'))

    @staticmethod
    def send(transport, request, config):
        attempts = 0
        while True:
            attempts += 1
            try:
                return transport.send(request, config.timeout_ms)
            except TransportError as e:
                if attempts > config.retry_times:
                    raise TransportError('%s (after %d attempt(s))' % (e, attempts),
                                         attempts)
                if config.backoff_ms > 0:
                    time.sleep(config.backoff_ms / 1000.0)

    # ------------------------------------------------------------ validation

    @staticmethod
    def _scalar_text(value):
        if isinstance(value, str):
            return value
        if isinstance(value, bool):
            return 'true' if value else 'false'
        return json.dumps(value)

    @staticmethod
    def validate(model_name, value, models, prefix=''):
        model = models.get(model_name)
        if model is None:
            raise TeaEvalError('unknown model: %s' % model_name)
        if not isinstance(value, dict):
            return [(prefix or model_name, 'type-mismatch', 'expected object')]
        violations = []
        for field in model['fields']:
            path = field['name'] if not prefix else prefix + '.' + field['name']
            v = value.get(field['name'])
            if v is None:
                if field['required']:
                    violations.append((path, 'missing-required',
                                       "field '%s' is required" % field['name']))
                continue
            violations.extend(TeaCore._check_field(field, v, path, models))
        return violations

    @staticmethod
    def _check_field(field, v, path, models):
        kind = field['type']['kind']
        checks = {'string': str, 'number': (int, float), 'boolean': bool,
                  'readable': str, 'map': dict, 'array': list}
        if kind == 'model':
            return TeaCore.validate(field['type']['name'], v, models, path)
        if kind == 'array':
            if not isinstance(v, list):
                return [(path, 'type-mismatch', 'expected array')]
            elem = field['type'].get('elem', {})
            if elem.get('kind') == 'model':
                out = []
                for i, item in enumerate(v):
                    out.extend(TeaCore.validate(elem['name'], item, models,
                                                '%s.%d' % (path, i)))
                return out
            return []
        if kind in checks:
            expected = checks[kind]
            if isinstance(v, bool) and kind != 'boolean':
                return [(path, 'type-mismatch', 'expected %s, got boolean' % kind)]
            if not isinstance(v, expected):
                return [(path, 'type-mismatch', 'expected %s' % kind)]
        if kind in ('string', 'number'):
            return TeaCore._check_constraints(field.get('constraints', {}), v, path)
        return []

    @staticmethod
    def _check_constraints(constraints, v, path):
        violations = []
        pattern = constraints.get('pattern')
        if pattern is not None:
            text = TeaCore._scalar_text(v)
            if re.fullmatch('(?:%s)+' % pattern, text) is None:
                violations.append((path, 'pattern', "'%s' !~ /%s/" % (text, pattern)))
        if 'min' in constraints and isinstance(v, (int, float)) and v < constraints['min']:
            violations.append((path, 'min', '%s < %s'
                               % (TeaCore._scalar_text(v), constraints['min'])))
        if 'max' in constraints and isinstance(v, (int, float)) and v > constraints['max']:
            violations.append((path, 'max', '%s > %s'
                               % (TeaCore._scalar_text(v), constraints['max'])))
        if isinstance(v, str):
            if 'minLength' in constraints and len(v) < constraints['minLength']:
                violations.append((path, 'min', 'length %d < %s'
                                   % (len(v), constraints['minLength'])))
            if 'maxLength' in constraints and len(v) > constraints['maxLength']:
                violations.append((path, 'max', 'length %d > %s'
                                   % (len(v), constraints['maxLength'])))
        return violations

    @staticmethod
    def check_arg(name, value, type_desc, models):
        violations = TeaCore.validate_type(name, value, type_desc, models)
        if violations:
            raise TeaValidationError(violations)

    @staticmethod
    def validate_type(path, value, type_desc, models):
        if value is None:
            return [(path, 'missing-required', "argument '%s' is required" % path)]
        field = {'name': path, 'required': True, 'type': type_desc}
        return TeaCore._check_field(field, value, path, models)

    @staticmethod
    def check_result(value, type_desc, models):
        if type_desc.get('kind') == 'model':
            violations = TeaCore.validate(type_desc['name'], value, models)
            if violations:
                raise TeaValidationError(violations)
        return value
)PY";

using Kind = TypeExpr::Kind;

Json type_desc(const TypeExpr & t)
{
  switch (t.kind) {
    case Kind::String: return Json{{"kind", "string"}};
    case Kind::Number: return Json{{"kind", "number"}};
    case Kind::Boolean: return Json{{"kind", "boolean"}};
    case Kind::Any: return Json{{"kind", "any"}};
    case Kind::Readable: return Json{{"kind", "readable"}};
    case Kind::Void: return Json{{"kind", "void"}};
    case Kind::Map: return Json{{"kind", "map"}};
    case Kind::Array: return Json{{"kind", "array"}, {"elem", type_desc(*t.value)}};
    case Kind::Named: return Json{{"kind", "model"}, {"name", t.name}};
  }
  return Json{{"kind", "any"}};
}

// JSON value rendered as a Python literal.
std::string py_literal(const Json & v)
{
  if (v.is_null()) return "None";
  if (v.is_boolean()) return v.get<bool>() ? "True" : "False";
  if (v.is_string()) {
    std::string out = "'";
    for (char c : v.get<std::string>()) {
      if (c == '\\') out += "\\\\";
      else if (c == '\'') out += "\\'";
      else if (c == '\n') out += "\\n";
      else out += c;
    }
    return out + "'";
  }
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ", ";
      out += py_literal(v[i]);
    }
    return out + "]";
  }
  if (v.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto & [k, item] : v.items()) {
      if (!first) out += ", ";
      first = false;
      out += py_literal(Json(k)) + ": " + py_literal(item);
    }
    return out + "}";
  }
  return v.dump();
}

Json models_metadata(const SemanticModule & module)
{
  Json models = Json::object();
  for (const auto & decl : module.tree.models) {
    Json fields = Json::array();
    for (const auto & f : decl.fields) {
      Json field{{"name", f.name}, {"required", !f.optional}, {"type", type_desc(f.type)}};
      if (!f.attributes.empty()) {
        Json constraints = Json::object();
        for (const auto & [key, attr] : f.attributes) {
          if (const auto * s = attr->as<StringLitExpr>()) {
            constraints[key] = s->value;
          } else if (const auto * n = attr->as<NumberLitExpr>()) {
            if (n->is_integer) constraints[key] = static_cast<long long>(n->value);
            else constraints[key] = n->value;
          } else if (const auto * b = attr->as<BoolLitExpr>()) {
            constraints[key] = b->value;
          }
        }
        field["constraints"] = std::move(constraints);
      }
      fields.push_back(std::move(field));
    }
    models[decl.name] = Json{{"fields", std::move(fields)}};
  }
  return models;
}

class PythonEmitter : public Emitter
{
public:
  FileSet emit_module(const SemanticModule & module, const EmitterTarget & target) override
  {
    mod_ = &module;
    target_ = &target;
    FileSet files;
    files["tea_core.py"] = kPythonCore;
    files["client.py"] = emit_client();
    return files;
  }

  std::string emit_sample(const SemanticModule & module, const std::string & api,
    const std::map<std::string, Json> & args, const EmitterTarget & target) override
  {
    mod_ = &module;
    target_ = &target;
    const ApiDecl & decl = *module.apis.at(api);
    std::ostringstream out;
    out << "\"\"\"Example: calling " << style(api) << " against a mock gateway.\"\"\"\n";
    out << "import json\nimport sys\n\n";
    out << "from client import Client\n";
    out << "from tea_core import MockTransport\n\n\n";
    out << "def main():\n";
    out << "    transport = MockTransport.from_file(sys.argv[1])\n";
    out << "    client = Client(transport)\n";
    std::vector<std::string> arg_names;
    for (const auto & param : decl.params) {
      std::string var = style(param.name);
      arg_names.push_back(var);
      auto it = args.find(param.name);
      out << "    " << var << " = " << py_literal(it != args.end() ? it->second : Json())
          << "\n";
    }
    out << "    result = client." << style(api) << "(";
    for (std::size_t i = 0; i < arg_names.size(); ++i) {
      if (i > 0) out << ", ";
      out << arg_names[i];
    }
    out << ")\n";
    out << "    print(json.dumps(result))\n\n\n";
    out << "if __name__ == '__main__':\n    main()\n";
    return out.str();
  }

private:
  std::string style(const std::string & name) const
  {
    return apply_style(name, target_->identifier_style);
  }

  std::string quote(const std::string & s) const { return target_->string_literal(s); }

  std::string emit_client()
  {
    std::ostringstream out;
    out << "\"\"\"Generated client. Do not edit by hand.\"\"\"\n";
    out << "import json\n\n";
    out << "from tea_core import RuntimeConfig, TeaCore, TeaRequest\n\n";
    Json models = models_metadata(*mod_);
    out << "_MODELS = json.loads(r\"\"\"\n" << models.dump(2) << "\n\"\"\")\n\n\n";
    emit_behaviors(out);
    out << "class Client:\n";
    out << "    def __init__(self, transport, config=None, behaviors=None):\n";
    out << "        self._transport = transport\n";
    out << "        self._config = config or RuntimeConfig()\n";
    out << "        self._behaviors = behaviors or Behaviors()\n";
    for (const auto & api : mod_->tree.apis) emit_api(out, api);
    if (mod_->tree.apis.empty()) out << "\n";
    return out.str();
  }

  void emit_behaviors(std::ostringstream & out)
  {
    out << "class Behaviors:\n";
    out << "    \"\"\"Declared behaviors; override to supply implementations.\"\"\"\n\n";
    bool declared_to_json = false;
    bool declared_parse = false;
    for (const auto & bt : mod_->tree.behavior_types) {
      if (bt.name == "toJSONString") declared_to_json = true;
      if (bt.name == "parseJSON") declared_parse = true;
    }
    out << "    def to_json_string(self, value):\n";
    out << "        return json.dumps(value, separators=(',', ':'))\n\n";
    out << "    def parse_json(self, text):\n";
    out << "        return json.loads(text)\n";
    for (const auto & bt : mod_->tree.behavior_types) {
      if (bt.name == "toJSONString" || bt.name == "parseJSON") continue;
      out << "\n    def " << style(bt.name) << "(self";
      for (std::size_t i = 0; i < bt.param_types.size(); ++i) out << ", arg" << i;
      out << "):\n";
      out << "        raise NotImplementedError(" << quote("@" + bt.name) << ")\n";
    }
    (void)declared_to_json;
    (void)declared_parse;
    out << "\n\n";
  }

  void emit_api(std::ostringstream & out, const ApiDecl & api)
  {
    out << "\n    def " << style(api.name) << "(self";
    for (const auto & param : api.params) out << ", " << style(param.name);
    out << "):\n";
    indent_ = 2;
    for (const auto & param : api.params) {
      line(out, "TeaCore.check_arg(" + quote(param.name) + ", " + style(param.name) + ", " +
                  py_literal(type_desc(param.type)) + ", _MODELS)");
    }
    line(out, "_req = TeaRequest(self._config)");
    in_request_ = true;
    for (const auto & stmt : api.request_block) emit_stmt(out, *stmt, api);
    in_request_ = false;
    line(out, "_resp = TeaCore.send(self._transport, _req, self._config)");
    for (const auto & stmt : api.returns_block) emit_stmt(out, *stmt, api);
    line(out, "return None");
  }

  void line(std::ostringstream & out, const std::string & text)
  {
    for (int i = 0; i < indent_; ++i) out << "    ";
    out << text << "\n";
  }

  void emit_stmt(std::ostringstream & out, const Stmt & stmt, const ApiDecl & api)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          line(out, style(node.name) + " = " + emit_expr(*node.init));
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          emit_assign(out, node);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          if (!node.value) {
            line(out, "return None");
          } else if (api.return_type.kind == Kind::Named) {
            line(out, "return TeaCore.check_result(" + emit_expr(*node.value) + ", " +
                        py_literal(type_desc(api.return_type)) + ", _MODELS)");
          } else {
            line(out, "return " + emit_expr(*node.value));
          }
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          line(out, emit_expr(*node.expr));
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            const auto & arm = node.arms[i];
            if (!arm.cond) {
              line(out, "else:");
            } else {
              line(out, (i == 0 ? "if " : "elif ") + emit_expr(*arm.cond) + ":");
            }
            ++indent_;
            if (arm.body.empty()) line(out, "pass");
            for (const auto & inner : arm.body) emit_stmt(out, *inner, api);
            --indent_;
          }
        }
      },
      stmt.node);
  }

  void emit_assign(std::ostringstream & out, const AssignStmt & node)
  {
    const auto & path = node.target;
    if (path.front() == "__request") {
      const std::string & field = path[1];
      if (path.size() == 2) {
        std::string value = emit_expr(*node.value);
        if (field == "headers" || field == "query") {
          value = "TeaCore.to_str_map(" + value + ")";
        }
        line(out, "_req." + field + " = " + value);
      } else if (path.size() == 3 && (field == "headers" || field == "query")) {
        line(out, "_req." + field + "[" + quote(path[2]) + "] = TeaCore.to_str(" +
                    emit_expr(*node.value) + ")");
      } else {
        throw UnsupportedConstruct(target_->target_id, node.target_span,
          "deep __request assignment");
      }
      return;
    }
    std::string target = style(path.front());
    for (std::size_t i = 1; i < path.size(); ++i) target += "[" + quote(path[i]) + "]";
    line(out, target + " = " + emit_expr(*node.value));
  }

  std::string emit_expr(const Expr & expr)
  {
    return std::visit(
      [&](const auto & node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, StringLitExpr>) {
          return quote(node.value);
        } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
          std::vector<std::string> pieces;
          for (const auto & part : node.parts) {
            if (part.is_hole) {
              pieces.push_back("TeaCore.to_str(" + emit_expr(*part.hole) + ")");
            } else if (!part.literal.empty()) {
              pieces.push_back(quote(part.literal));
            }
          }
          if (pieces.empty()) return "''";
          std::string out = pieces[0];
          for (std::size_t i = 1; i < pieces.size(); ++i) out += " + " + pieces[i];
          return pieces.size() > 1 ? "(" + out + ")" : out;
        } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
          return node.lexeme;
        } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
          return node.value ? "True" : "False";
        } else if constexpr (std::is_same_v<T, NullLitExpr>) {
          return "None";
        } else if constexpr (std::is_same_v<T, MapLitExpr>) {
          std::string out = "{";
          bool first = true;
          for (const auto & [key, value] : node.entries) {
            if (!first) out += ", ";
            first = false;
            out += quote(key) + ": " + emit_expr(*value);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
          return emit_path(node);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string fn;
          if (node.module == "Util" && node.method == "readAsJSON") fn = "TeaCore.read_as_json";
          else if (node.module == "Util" && node.method == "toJSONString")
            fn = "TeaCore.to_json_string";
          else if (node.module == "Util" && node.method == "toString") fn = "TeaCore.to_str";
          else
            throw UnsupportedConstruct(target_->target_id, expr.span,
              node.module + "." + node.method);
          std::string out = fn + "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += emit_expr(*node.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, BehaviorCallExpr>) {
          std::string out = "self._behaviors." + style(node.name) + "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += emit_expr(*node.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          const char * op = nullptr;
          switch (node.op) {
            case BinaryExpr::Op::Eq: op = "=="; break;
            case BinaryExpr::Op::Ne: op = "!="; break;
            case BinaryExpr::Op::And: op = "and"; break;
            case BinaryExpr::Op::Or: op = "or"; break;
            case BinaryExpr::Op::Add: op = "+"; break;
          }
          return "(" + emit_expr(*node.lhs) + " " + op + " " + emit_expr(*node.rhs) + ")";
        }
      },
      expr.node);
  }

  std::string emit_path(const PathAccessExpr & node)
  {
    const std::string & head = node.segments.front();
    std::string out;
    std::size_t i = 1;
    if (head == "__request") {
      out = "_req";
      if (node.segments.size() >= 2) {
        out += "." + node.segments[1];
        i = 2;
      }
    } else if (head == "__response") {
      out = "_resp";
      if (node.segments.size() >= 2) {
        out += "." + node.segments[1];
        i = 2;
      }
    } else {
      out = style(head);
    }
    for (; i < node.segments.size(); ++i) out += "[" + quote(node.segments[i]) + "]";
    return out;
  }

  const SemanticModule * mod_ = nullptr;
  const EmitterTarget * target_ = nullptr;
  int indent_ = 0;
  bool in_request_ = false;
};

}  // namespace

std::unique_ptr<Emitter> make_python_emitter() { return std::make_unique<PythonEmitter>(); }

}  // namespace tea
