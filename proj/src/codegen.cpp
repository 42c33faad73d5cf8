// codegen.cpp - target registry, identifier styling, fileset output
#include "tea/codegen.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace tea
{

namespace
{

// Split a name into lowercase words. Handles camelCase, PascalCase,
// snake_case and acronym runs (e.g. "readAsJSONString").
std::vector<std::string> split_words(const std::string & name)
{
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      words.push_back(current);
      current.clear();
    }
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (c == '_' || c == '-') {
      flush();
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      bool prev_lower = i > 0 && std::islower(static_cast<unsigned char>(name[i - 1]));
      bool next_lower = i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]));
      if (prev_lower || (next_lower && !current.empty())) flush();
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      current += c;
    }
  }
  flush();
  return words;
}

}  // namespace

std::string apply_style(const std::string & name, IdentifierStyle style)
{
  std::vector<std::string> words = split_words(name);
  if (words.empty()) return name;
  std::string out;
  switch (style) {
    case IdentifierStyle::SnakeCase:
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out += "_";
        out += words[i];
      }
      break;
    case IdentifierStyle::CamelCase:
    case IdentifierStyle::PascalCase:
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::string w = words[i];
        if (i > 0 || style == IdentifierStyle::PascalCase) {
          w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        }
        out += w;
      }
      break;
  }
  return out;
}

namespace
{

std::string python_type_name(const TypeExpr & t)
{
  switch (t.kind) {
    case TypeExpr::Kind::String: return "str";
    case TypeExpr::Kind::Number: return "float";
    case TypeExpr::Kind::Boolean: return "bool";
    case TypeExpr::Kind::Any: return "Any";
    case TypeExpr::Kind::Readable: return "bytes";
    case TypeExpr::Kind::Void: return "None";
    case TypeExpr::Kind::Map:
      return "dict[" + python_type_name(*t.key) + ", " + python_type_name(*t.value) + "]";
    case TypeExpr::Kind::Array: return "list[" + python_type_name(*t.value) + "]";
    case TypeExpr::Kind::Named: return apply_style(t.name, IdentifierStyle::PascalCase);
  }
  return "Any";
}

std::string ts_type_name(const TypeExpr & t)
{
  switch (t.kind) {
    case TypeExpr::Kind::String: return "string";
    case TypeExpr::Kind::Number: return "number";
    case TypeExpr::Kind::Boolean: return "boolean";
    case TypeExpr::Kind::Any: return "any";
    case TypeExpr::Kind::Readable: return "Uint8Array";
    case TypeExpr::Kind::Void: return "void";
    case TypeExpr::Kind::Map:
      return "Record<" + ts_type_name(*t.key) + ", " + ts_type_name(*t.value) + ">";
    case TypeExpr::Kind::Array: return ts_type_name(*t.value) + "[]";
    case TypeExpr::Kind::Named: return apply_style(t.name, IdentifierStyle::PascalCase);
  }
  return "any";
}

std::string quote_common(const std::string & s, char q)
{
  std::string out(1, q);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == q) out += '\\';
        out += c;
    }
  }
  out += q;
  return out;
}

}  // namespace

std::vector<EmitterTarget> list_targets()
{
  std::vector<EmitterTarget> targets;
  EmitterTarget python;
  python.target_id = "python";
  python.file_extension = ".py";
  python.identifier_style = IdentifierStyle::SnakeCase;
  python.executable = true;
  python.type_name = python_type_name;
  python.string_literal = [](const std::string & s) { return quote_common(s, '\''); };
  targets.push_back(std::move(python));

  EmitterTarget ts;
  ts.target_id = "typescript";
  ts.file_extension = ".ts";
  ts.identifier_style = IdentifierStyle::CamelCase;
  ts.executable = false;
  ts.type_name = ts_type_name;
  ts.string_literal = [](const std::string & s) { return quote_common(s, '"'); };
  targets.push_back(std::move(ts));
  return targets;
}

const EmitterTarget * find_target(const std::string & target_id)
{
  static const std::vector<EmitterTarget> targets = list_targets();
  for (const auto & t : targets) {
    if (t.target_id == target_id) return &t;
  }
  return nullptr;
}

namespace
{

std::unique_ptr<Emitter> make_emitter(const EmitterTarget & target)
{
  if (target.target_id == "python") return make_python_emitter();
  if (target.target_id == "typescript") return make_typescript_emitter();
  throw std::runtime_error("no emitter for target '" + target.target_id + "'");
}

}  // namespace

FileSet emit(const SemanticModule & module, const EmitterTarget & target)
{
  if (!module.valid()) {
    throw std::runtime_error("cannot emit a module with error diagnostics");
  }
  return make_emitter(target)->emit_module(module, target);
}

std::string emit_code_sample(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, const EmitterTarget & target)
{
  auto it = module.apis.find(api);
  if (it == module.apis.end()) throw std::runtime_error("unknown api '" + api + "'");
  for (const auto & param : it->second->params) {
    if (param.type.kind == TypeExpr::Kind::Named && args.count(param.name)) {
      ValidationReport report = validate_value(param.type.name, args.at(param.name), module);
      if (!report.ok()) {
        throw std::runtime_error("sample argument '" + param.name + "' fails validation");
      }
    }
  }
  return make_emitter(target)->emit_sample(module, api, args, target);
}

namespace
{

// FNV-1a 64, rendered as 16 hex digits.
std::string digest(const std::string & text)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void write_fileset(const FileSet & files, const std::string & out_dir)
{
  namespace fs = std::filesystem;
  Json manifest = Json::array();
  for (const auto & [path, text] : files) {
    if (path.find("..") != std::string::npos || (!path.empty() && path[0] == '/')) {
      throw std::runtime_error("refusing non-relative path in fileset: " + path);
    }
    fs::path full = fs::path(out_dir) / path;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + full.string());
    out << text;
    manifest.push_back({{"path", path}, {"digest", "fnv1a64:" + digest(text)}});
  }
  std::ofstream mf(fs::path(out_dir) / "fileset.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write fileset.json");
  mf << manifest.dump(2) << "\n";
}

}  // namespace tea
