// emit_typescript.cpp - TypeScript SDK emitter
#include <sstream>

#include <nlohmann/json.hpp>

#include "tea/codegen.hpp"

namespace tea
{

namespace
{

const char * kTsCore = R"TS(// Minimal runtime core for generated clients.

export class RuntimeConfig {
  retryTimes = 0;
  backoffMs = 100;
  timeoutMs = 30000;
  defaultProtocol = "https";
  defaultPort = 443;
}

export class TeaRequest {
  method = "GET";
  pathname = "";
  query: Record<string, string> = {};
  headers: Record<string, string> = {};
  body = "";
  protocol: string;
  port: number;
  host = "";

  constructor(config: RuntimeConfig) {
    this.protocol = config.defaultProtocol;
    this.port = config.defaultPort;
  }
}

export class TeaResponse {
  statusCode = 0;
  statusMessage = "";
  headers: Record<string, string> = {};
  body = "";
}

export class TransportError extends Error {
  constructor(message: string, readonly attempts = 1) {
    super(message);
  }
}

export class TeaValidationError extends Error {
  constructor(readonly violations: [string, string, string][]) {
    super(violations.map((v) => `${v[0]} (${v[1]}: ${v[2]})`).join("; "));
  }
}

export interface Transport {
  send(request: TeaRequest, timeoutMs: number): Promise<TeaResponse>;
}

type FieldDesc = {
  name: string;
  required: boolean;
  type: { kind: string; name?: string; elem?: { kind: string; name?: string } };
  constraints?: Record<string, string | number>;
};

export type ModelTable = Record<string, { fields: FieldDesc[] }>;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class TeaCore {
  static toStr(value: unknown): string {
    if (value === null || value === undefined) {
      throw new Error("null value rendered to string");
    }
    if (typeof value === "boolean") return value ? "true" : "false";
    if (typeof value === "object") return JSON.stringify(value);
    return String(value);
  }

  static toStrMap(value: Record<string, unknown>): Record<string, string> {
    const out: Record<string, string> = {};
    for (const [k, v] of Object.entries(value)) out[k] = TeaCore.toStr(v);
    return out;
  }

  static readAsJson(body: string): any {
    return JSON.parse(body);
  }

  static toJsonString(value: unknown): string {
    return JSON.stringify(value);
  }

  static async send(
    transport: Transport,
    request: TeaRequest,
    config: RuntimeConfig
  ): Promise<TeaResponse> {
    let attempts = 0;
    for (;;) {
      attempts += 1;
      try {
        return await transport.send(request, config.timeoutMs);
      } catch (e) {
        if (!(e instanceof TransportError) || attempts > config.retryTimes) throw e;
        if (config.backoffMs > 0) await sleep(config.backoffMs);
      }
    }
  }

  static validate(
    modelName: string,
    value: any,
    models: ModelTable,
    prefix = ""
  ): [string, string, string][] {
    const model = models[modelName];
    if (model === undefined) throw new Error(`unknown model: ${modelName}`);
    if (typeof value !== "object" || value === null || Array.isArray(value)) {
      return [[prefix || modelName, "type-mismatch", "expected object"]];
    }
    const violations: [string, string, string][] = [];
    for (const field of model.fields) {
      const path = prefix ? `${prefix}.${field.name}` : field.name;
      const v = value[field.name];
      if (v === undefined || v === null) {
        if (field.required) {
          violations.push([path, "missing-required", `field '${field.name}' is required`]);
        }
        continue;
      }
      violations.push(...TeaCore.checkField(field, v, path, models));
    }
    return violations;
  }

  private static checkField(
    field: FieldDesc,
    v: any,
    path: string,
    models: ModelTable
  ): [string, string, string][] {
    const kind = field.type.kind;
    if (kind === "model") return TeaCore.validate(field.type.name!, v, models, path);
    if (kind === "array") {
      if (!Array.isArray(v)) return [[path, "type-mismatch", "expected array"]];
      const elem = field.type.elem;
      if (elem && elem.kind === "model") {
        const out: [string, string, string][] = [];
        v.forEach((item, i) => {
          out.push(...TeaCore.validate(elem.name!, item, models, `${path}.${i}`));
        });
        return out;
      }
      return [];
    }
    const primitive: Record<string, string> = {
      string: "string",
      number: "number",
      boolean: "boolean",
      readable: "string",
    };
    if (kind in primitive && typeof v !== primitive[kind]) {
      return [[path, "type-mismatch", `expected ${kind}`]];
    }
    if (kind === "map" && (typeof v !== "object" || Array.isArray(v))) {
      return [[path, "type-mismatch", "expected map"]];
    }
    if (kind === "string" || kind === "number") {
      return TeaCore.checkConstraints(field.constraints ?? {}, v, path);
    }
    return [];
  }

  private static checkConstraints(
    constraints: Record<string, string | number>,
    v: any,
    path: string
  ): [string, string, string][] {
    const violations: [string, string, string][] = [];
    const text = TeaCore.toStr(v);
    if (typeof constraints.pattern === "string") {
      const re = new RegExp(`^(?:${constraints.pattern})+$`);
      if (!re.test(text)) {
        violations.push([path, "pattern", `'${text}' !~ /${constraints.pattern}/`]);
      }
    }
    if (typeof v === "number") {
      if (typeof constraints.min === "number" && v < constraints.min) {
        violations.push([path, "min", `${text} < ${constraints.min}`]);
      }
      if (typeof constraints.max === "number" && v > constraints.max) {
        violations.push([path, "max", `${text} > ${constraints.max}`]);
      }
    }
    if (typeof v === "string") {
      if (typeof constraints.minLength === "number" && v.length < constraints.minLength) {
        violations.push([path, "min", `length ${v.length} < ${constraints.minLength}`]);
      }
      if (typeof constraints.maxLength === "number" && v.length > constraints.maxLength) {
        violations.push([path, "max", `length ${v.length} > ${constraints.maxLength}`]);
      }
    }
    return violations;
  }

  static checkArg(name: string, value: any, typeDesc: any, models: ModelTable): void {
    if (value === undefined || value === null) {
      throw new TeaValidationError([[name, "missing-required", `argument '${name}' is required`]]);
    }
    const violations = TeaCore.checkField(
      { name, required: true, type: typeDesc },
      value,
      name,
      models
    );
    if (violations.length > 0) throw new TeaValidationError(violations);
  }

  static checkResult(value: any, typeDesc: any, models: ModelTable): any {
    if (typeDesc.kind === "model") {
      const violations = TeaCore.validate(typeDesc.name, value, models);
      if (violations.length > 0) throw new TeaValidationError(violations);
    }
    return value;
  }
}
)TS";

using Kind = TypeExpr::Kind;

Json ts_type_desc(const TypeExpr & t)
{
  switch (t.kind) {
    case Kind::Array: return Json{{"kind", "array"}, {"elem", ts_type_desc(*t.value)}};
    case Kind::Named: return Json{{"kind", "model"}, {"name", t.name}};
    case Kind::Map: return Json{{"kind", "map"}};
    case Kind::String: return Json{{"kind", "string"}};
    case Kind::Number: return Json{{"kind", "number"}};
    case Kind::Boolean: return Json{{"kind", "boolean"}};
    case Kind::Readable: return Json{{"kind", "readable"}};
    case Kind::Void: return Json{{"kind", "void"}};
    case Kind::Any: return Json{{"kind", "any"}};
  }
  return Json{{"kind", "any"}};
}

class TypescriptEmitter : public Emitter
{
public:
  FileSet emit_module(const SemanticModule & module, const EmitterTarget & target) override
  {
    mod_ = &module;
    target_ = &target;
    FileSet files;
    files["tea_core.ts"] = kTsCore;
    files["client.ts"] = emit_client();
    return files;
  }

  std::string emit_sample(const SemanticModule & module, const std::string & api,
    const std::map<std::string, Json> & args, const EmitterTarget & target) override
  {
    mod_ = &module;
    target_ = &target;
    const ApiDecl & decl = *module.apis.at(api);
    std::ostringstream out;
    out << "// Example: calling " << style(api) << ".\n";
    out << "import { Client } from \"./client\";\n";
    out << "import { Transport } from \"./tea_core\";\n\n";
    out << "export async function example(transport: Transport): Promise<void> {\n";
    out << "  const client = new Client(transport);\n";
    std::vector<std::string> names;
    for (const auto & param : decl.params) {
      std::string var = style(param.name);
      names.push_back(var);
      auto it = args.find(param.name);
      out << "  const " << var << " = " << (it != args.end() ? it->second.dump() : "null")
          << ";\n";
    }
    out << "  const result = await client." << style(api) << "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i > 0) out << ", ";
      out << names[i];
    }
    out << ");\n";
    out << "  console.log(JSON.stringify(result));\n";
    out << "}\n";
    return out.str();
  }

private:
  std::string style(const std::string & name) const
  {
    return apply_style(name, target_->identifier_style);
  }

  std::string quote(const std::string & s) const { return target_->string_literal(s); }

  std::string type_of(const TypeExpr & t) const { return target_->type_name(t); }

  std::string emit_client()
  {
    std::ostringstream out;
    out << "// Generated client. Do not edit by hand.\n";
    out << "import {\n  ModelTable,\n  RuntimeConfig,\n  TeaCore,\n  TeaRequest,\n"
        << "  Transport,\n} from \"./tea_core\";\n\n";
    for (const auto & model : mod_->tree.models) {
      out << "export interface " << apply_style(model.name, IdentifierStyle::PascalCase)
          << " {\n";
      for (const auto & f : model.fields) {
        out << "  " << f.name << (f.optional ? "?" : "") << ": " << type_of(f.type) << ";\n";
      }
      out << "}\n\n";
    }
    Json models = Json::object();
    for (const auto & decl : mod_->tree.models) {
      Json fields = Json::array();
      for (const auto & f : decl.fields) {
        Json field{{"name", f.name}, {"required", !f.optional}, {"type", ts_type_desc(f.type)}};
        Json constraints = Json::object();
        for (const auto & [key, attr] : f.attributes) {
          if (const auto * s = attr->as<StringLitExpr>()) constraints[key] = s->value;
          else if (const auto * n = attr->as<NumberLitExpr>()) {
            if (n->is_integer) constraints[key] = static_cast<long long>(n->value);
            else constraints[key] = n->value;
          }
        }
        if (!constraints.empty()) field["constraints"] = std::move(constraints);
        fields.push_back(std::move(field));
      }
      models[decl.name] = Json{{"fields", std::move(fields)}};
    }
    out << "const MODELS: ModelTable = " << models.dump(2) << ";\n\n";
    emit_behaviors(out);
    out << "export class Client {\n";
    out << "  private config: RuntimeConfig;\n";
    out << "  private behaviors: Behaviors;\n\n";
    out << "  constructor(\n    private transport: Transport,\n"
        << "    config?: RuntimeConfig,\n    behaviors?: Behaviors\n  ) {\n";
    out << "    this.config = config ?? new RuntimeConfig();\n";
    out << "    this.behaviors = behaviors ?? new Behaviors();\n";
    out << "  }\n";
    for (const auto & api : mod_->tree.apis) emit_api(out, api);
    out << "}\n";
    return out.str();
  }

  void emit_behaviors(std::ostringstream & out)
  {
    out << "export class Behaviors {\n";
    out << "  toJsonString(value: unknown): string {\n"
        << "    return JSON.stringify(value);\n  }\n\n";
    out << "  parseJson(text: string): any {\n    return JSON.parse(text);\n  }\n";
    for (const auto & bt : mod_->tree.behavior_types) {
      if (bt.name == "toJSONString" || bt.name == "parseJSON") continue;
      out << "\n  " << style(bt.name) << "(";
      for (std::size_t i = 0; i < bt.param_types.size(); ++i) {
        if (i > 0) out << ", ";
        out << "arg" << i << ": " << type_of(bt.param_types[i]);
      }
      out << "): " << type_of(bt.return_type) << " {\n";
      out << "    throw new Error(" << quote("@" + bt.name + " is not implemented") << ");\n";
      out << "  }\n";
    }
    out << "}\n\n";
  }

  std::string return_type_of(const ApiDecl & api) const
  {
    if (api.return_type.kind == Kind::Void) return "Promise<void>";
    return "Promise<" + type_of(api.return_type) + ">";
  }

  void emit_api(std::ostringstream & out, const ApiDecl & api)
  {
    out << "\n  async " << style(api.name) << "(";
    for (std::size_t i = 0; i < api.params.size(); ++i) {
      if (i > 0) out << ", ";
      out << style(api.params[i].name) << ": " << type_of(api.params[i].type);
    }
    out << "): " << return_type_of(api) << " {\n";
    indent_ = 2;
    for (const auto & param : api.params) {
      line(out, "TeaCore.checkArg(" + quote(param.name) + ", " + style(param.name) + ", " +
                  ts_type_desc(param.type).dump() + ", MODELS);");
    }
    line(out, "const _req = new TeaRequest(this.config);");
    for (const auto & stmt : api.request_block) emit_stmt(out, *stmt, api);
    line(out, "const _resp = await TeaCore.send(this.transport, _req, this.config);");
    for (const auto & stmt : api.returns_block) emit_stmt(out, *stmt, api);
    if (api.return_type.kind == Kind::Void) line(out, "return;");
    else line(out, "return undefined as any;");
    out << "  }\n";
  }

  void line(std::ostringstream & out, const std::string & text)
  {
    for (int i = 0; i < indent_; ++i) out << "  ";
    out << text << "\n";
  }

  void emit_stmt(std::ostringstream & out, const Stmt & stmt, const ApiDecl & api)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          line(out, "let " + style(node.name) + " = " + emit_expr(*node.init) + ";");
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          emit_assign(out, node);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          if (!node.value) {
            line(out, "return;");
          } else if (api.return_type.kind == Kind::Named) {
            line(out, "return TeaCore.checkResult(" + emit_expr(*node.value) + ", " +
                        ts_type_desc(api.return_type).dump() + ", MODELS) as " +
                        type_of(api.return_type) + ";");
          } else {
            line(out, "return " + emit_expr(*node.value) + ";");
          }
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          line(out, emit_expr(*node.expr) + ";");
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            const auto & arm = node.arms[i];
            if (!arm.cond) {
              line(out, "} else {");
            } else if (i == 0) {
              line(out, "if (" + emit_expr(*arm.cond) + ") {");
            } else {
              line(out, "} else if (" + emit_expr(*arm.cond) + ") {");
            }
            ++indent_;
            for (const auto & inner : arm.body) emit_stmt(out, *inner, api);
            --indent_;
          }
          line(out, "}");
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
        if (field == "headers" || field == "query") value = "TeaCore.toStrMap(" + value + ")";
        line(out, "_req." + field + " = " + value + ";");
      } else if (path.size() == 3 && (field == "headers" || field == "query")) {
        line(out, "_req." + field + "[" + quote(path[2]) + "] = TeaCore.toStr(" +
                    emit_expr(*node.value) + ");");
      } else {
        throw UnsupportedConstruct(target_->target_id, node.target_span,
          "deep __request assignment");
      }
      return;
    }
    std::string target = style(path.front());
    for (std::size_t i = 1; i < path.size(); ++i) target += "[" + quote(path[i]) + "]";
    line(out, target + " = " + emit_expr(*node.value) + ";");
  }

  std::string emit_expr(const Expr & expr)
  {
    return std::visit(
      [&](const auto & node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, StringLitExpr>) {
          return quote(node.value);
        } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
          std::string out = "`";
          for (const auto & part : node.parts) {
            if (part.is_hole) {
              out += "${TeaCore.toStr(" + emit_expr(*part.hole) + ")}";
            } else {
              for (char c : part.literal) {
                if (c == '`' || c == '\\' || c == '$') out += '\\';
                out += c;
              }
            }
          }
          return out + "`";
        } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
          return node.lexeme;
        } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
          return node.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, NullLitExpr>) {
          return "null";
        } else if constexpr (std::is_same_v<T, MapLitExpr>) {
          std::string out = "{ ";
          bool first = true;
          for (const auto & [key, value] : node.entries) {
            if (!first) out += ", ";
            first = false;
            out += quote(key) + ": " + emit_expr(*value);
          }
          return out + " }";
        } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
          return emit_ts_path(node);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string fn;
          if (node.module == "Util" && node.method == "readAsJSON") fn = "TeaCore.readAsJson";
          else if (node.module == "Util" && node.method == "toJSONString")
            fn = "TeaCore.toJsonString";
          else if (node.module == "Util" && node.method == "toString") fn = "TeaCore.toStr";
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
          std::string out = "this.behaviors." + style(node.name) + "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += emit_expr(*node.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          const char * op = nullptr;
          switch (node.op) {
            case BinaryExpr::Op::Eq: op = "==="; break;
            case BinaryExpr::Op::Ne: op = "!=="; break;
            case BinaryExpr::Op::And: op = "&&"; break;
            case BinaryExpr::Op::Or: op = "||"; break;
            case BinaryExpr::Op::Add: op = "+"; break;
          }
          return "(" + emit_expr(*node.lhs) + " " + op + " " + emit_expr(*node.rhs) + ")";
        }
      },
      expr.node);
  }

  std::string emit_ts_path(const PathAccessExpr & node)
  {
    const std::string & head = node.segments.front();
    std::string out;
    std::size_t i = 1;
    if (head == "__request" || head == "__response") {
      out = head == "__request" ? "_req" : "_resp";
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
};

}  // namespace

std::unique_ptr<Emitter> make_typescript_emitter()
{
  return std::make_unique<TypescriptEmitter>();
}

}  // namespace tea
