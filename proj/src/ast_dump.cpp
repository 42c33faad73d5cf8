// ast_dump.cpp - stable tree rendering and canonical source printing
#include "tea/ast_dump.hpp"

#include <sstream>

namespace tea
{

namespace
{

std::string escape(const std::string & s, char quote)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == quote) {
          out += '\\';
          out += c;
        } else if (c == '`' && quote == '`') {
          out += "\\`";
        } else {
          out += c;
        }
    }
  }
  return out;
}

// ------------------------------------------------------------------ dump

class Dumper
{
public:
  std::string run(const SyntaxTree & tree)
  {
    if (tree.imports.empty() && tree.models.empty() && tree.behavior_types.empty() &&
        tree.apis.empty()) {
      return "Module{}";
    }
    out_ << "Module{\n";
    for (const auto & imp : tree.imports) line("Import(" + imp.name + ")");
    for (const auto & model : tree.models) dump_model(model);
    for (const auto & bt : tree.behavior_types) dump_behavior(bt);
    for (const auto & api : tree.apis) dump_api(api);
    out_ << "}\n";
    return out_.str();
  }

private:
  void line(const std::string & text)
  {
    for (int i = 0; i < indent_; ++i) out_ << "  ";
    out_ << "  " << text << "\n";
  }

  void dump_model(const ModelDecl & model)
  {
    line("Model(" + model.name + "){");
    ++indent_;
    for (const auto & f : model.fields) {
      std::string text = "Field(" + f.name + (f.optional ? "?" : "") + ", " + to_string(f.type);
      if (!f.attributes.empty()) {
        text += ", attrs{";
        bool first = true;
        for (const auto & [key, value] : f.attributes) {
          if (!first) text += ", ";
          first = false;
          text += key + "=" + dump_expr(*value);
        }
        text += "}";
      }
      text += ")";
      line(text);
    }
    --indent_;
    line("}");
  }

  void dump_behavior(const BehaviorTypeDecl & bt)
  {
    std::string text = "BehaviorType(@" + bt.name + ", params[";
    for (std::size_t i = 0; i < bt.param_types.size(); ++i) {
      if (i > 0) text += ", ";
      text += to_string(bt.param_types[i]);
    }
    text += "], returns " + to_string(bt.return_type) + ")";
    line(text);
  }

  void dump_api(const ApiDecl & api)
  {
    std::string text = "Api(" + api.name + ", params[";
    for (std::size_t i = 0; i < api.params.size(); ++i) {
      if (i > 0) text += ", ";
      text += api.params[i].name + ": " + to_string(api.params[i].type);
    }
    text += "], returns " + to_string(api.return_type) + "){";
    line(text);
    ++indent_;
    line("request{");
    dump_block(api.request_block);
    line("}");
    line("returns{");
    dump_block(api.returns_block);
    line("}");
    --indent_;
    line("}");
  }

  void dump_block(const Block & block)
  {
    ++indent_;
    for (const auto & stmt : block) dump_stmt(*stmt);
    --indent_;
  }

  void dump_stmt(const Stmt & stmt)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          line("Var(" + node.name + ", " + dump_expr(*node.init) + ")");
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          line("Assign(" + join(node.target) + ", " + dump_expr(*node.value) + ")");
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          line(node.value ? "Return(" + dump_expr(*node.value) + ")" : "Return()");
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          line("ExprStmt(" + dump_expr(*node.expr) + ")");
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            const auto & arm = node.arms[i];
            if (arm.cond) {
              line((i == 0 ? std::string("If(") : std::string("ElseIf(")) +
                   dump_expr(*arm.cond) + "){");
            } else {
              line("Else{");
            }
            dump_block(arm.body);
            line("}");
          }
        }
      },
      stmt.node);
  }

  static std::string join(const std::vector<std::string> & segments)
  {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (i > 0) out += ".";
      out += segments[i];
    }
    return out;
  }

  std::string dump_expr(const Expr & expr)
  {
    return std::visit(
      [&](const auto & node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, StringLitExpr>) {
          return "StringLit(\"" + escape(node.value, '"') + "\")";
        } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
          std::string out = "Template(";
          bool first = true;
          for (const auto & part : node.parts) {
            if (!first) out += ", ";
            first = false;
            out += part.is_hole ? "Hole(" + dump_expr(*part.hole) + ")"
                                : "\"" + escape(part.literal, '"') + "\"";
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
          return "Number(" + node.lexeme + ")";
        } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
          return node.value ? "Bool(true)" : "Bool(false)";
        } else if constexpr (std::is_same_v<T, NullLitExpr>) {
          return "Null";
        } else if constexpr (std::is_same_v<T, MapLitExpr>) {
          std::string out = "Map{";
          bool first = true;
          for (const auto & [key, value] : node.entries) {
            if (!first) out += ", ";
            first = false;
            out += key + "=" + dump_expr(*value);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
          return join(node.segments);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string out = "Call(" + node.module + "." + node.method;
          for (const auto & arg : node.args) out += ", " + dump_expr(*arg);
          return out + ")";
        } else if constexpr (std::is_same_v<T, BehaviorCallExpr>) {
          std::string out = "Behavior(@" + node.name;
          for (const auto & arg : node.args) out += ", " + dump_expr(*arg);
          return out + ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return std::string("Bin(") + to_string(node.op) + ", " + dump_expr(*node.lhs) + ", " +
                 dump_expr(*node.rhs) + ")";
        }
      },
      expr.node);
  }

  std::ostringstream out_;
  int indent_ = 0;
};

// ------------------------------------------------------------------ format

class Formatter
{
public:
  std::string run(const SyntaxTree & tree)
  {
    for (const auto & imp : tree.imports) out_ << "import " << imp.name << ";\n";
    if (!tree.imports.empty()) out_ << "\n";
    for (const auto & model : tree.models) format_model(model);
    for (const auto & bt : tree.behavior_types) {
      out_ << "type @" << bt.name << " = (";
      for (std::size_t i = 0; i < bt.param_types.size(); ++i) {
        if (i > 0) out_ << ", ";
        out_ << to_string(bt.param_types[i]);
      }
      out_ << "): " << to_string(bt.return_type) << "\n\n";
    }
    for (const auto & api : tree.apis) format_api(api);
    return out_.str();
  }

private:
  void indent()
  {
    for (int i = 0; i < indent_; ++i) out_ << "  ";
  }

  void format_model(const ModelDecl & model)
  {
    out_ << "model " << model.name << " {\n";
    for (std::size_t i = 0; i < model.fields.size(); ++i) {
      const auto & f = model.fields[i];
      out_ << "  " << f.name << (f.optional ? "?" : "") << ": " << to_string(f.type);
      if (!f.attributes.empty()) {
        out_ << "(";
        for (std::size_t j = 0; j < f.attributes.size(); ++j) {
          if (j > 0) out_ << ", ";
          out_ << f.attributes[j].first << "=" << format_expr(*f.attributes[j].second);
        }
        out_ << ")";
      }
      out_ << (i + 1 < model.fields.size() ? "," : "") << "\n";
    }
    out_ << "}\n\n";
  }

  void format_api(const ApiDecl & api)
  {
    out_ << "api " << api.name << "(";
    for (std::size_t i = 0; i < api.params.size(); ++i) {
      if (i > 0) out_ << ", ";
      out_ << api.params[i].name << ": " << to_string(api.params[i].type);
    }
    out_ << "): " << to_string(api.return_type) << " {\n";
    format_block(api.request_block);
    out_ << "} returns {\n";
    format_block(api.returns_block);
    out_ << "}\n\n";
  }

  void format_block(const Block & block)
  {
    ++indent_;
    for (const auto & stmt : block) format_stmt(*stmt);
    --indent_;
  }

  void format_stmt(const Stmt & stmt)
  {
    std::visit(
      [&](const auto & node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          indent();
          out_ << "var " << node.name << " = " << format_expr(*node.init) << ";\n";
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          indent();
          for (std::size_t i = 0; i < node.target.size(); ++i) {
            if (i > 0) out_ << ".";
            out_ << node.target[i];
          }
          out_ << " = " << format_expr(*node.value) << ";\n";
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          indent();
          out_ << "return";
          if (node.value) out_ << " " << format_expr(*node.value);
          out_ << ";\n";
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          indent();
          out_ << format_expr(*node.expr) << ";\n";
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            const auto & arm = node.arms[i];
            if (i == 0) {
              indent();
              out_ << "if (" << format_expr(*arm.cond) << ") {\n";
            } else if (arm.cond) {
              indent();
              out_ << "} else if (" << format_expr(*arm.cond) << ") {\n";
            } else {
              indent();
              out_ << "} else {\n";
            }
            format_block(arm.body);
          }
          indent();
          out_ << "}\n";
        }
      },
      stmt.node);
  }

  std::string format_expr(const Expr & expr)
  {
    return std::visit(
      [&](const auto & node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, StringLitExpr>) {
          return "'" + escape(node.value, '\'') + "'";
        } else if constexpr (std::is_same_v<T, TemplateStringExpr>) {
          std::string out = "`";
          for (const auto & part : node.parts) {
            out += part.is_hole ? "${" + format_expr(*part.hole) + "}"
                                : escape(part.literal, '`');
          }
          return out + "`";
        } else if constexpr (std::is_same_v<T, NumberLitExpr>) {
          return node.lexeme;
        } else if constexpr (std::is_same_v<T, BoolLitExpr>) {
          return node.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, NullLitExpr>) {
          return "null";
        } else if constexpr (std::is_same_v<T, MapLitExpr>) {
          std::string out = "{\n";
          for (const auto & [key, value] : node.entries) {
            for (int i = 0; i <= indent_; ++i) out += "  ";
            out += key + " = " + format_expr(*value) + ",\n";
          }
          for (int i = 0; i < indent_; ++i) out += "  ";
          return out + "}";
        } else if constexpr (std::is_same_v<T, PathAccessExpr>) {
          std::string out;
          for (std::size_t i = 0; i < node.segments.size(); ++i) {
            if (i > 0) out += ".";
            out += node.segments[i];
          }
          return out;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string out = node.module + "." + node.method + "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_expr(*node.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, BehaviorCallExpr>) {
          std::string out = "@" + node.name + "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_expr(*node.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return "(" + format_expr(*node.lhs) + " " + to_string(node.op) + " " +
                 format_expr(*node.rhs) + ")";
        }
      },
      expr.node);
  }

  std::ostringstream out_;
  int indent_ = 0;
};

}  // namespace

std::string dump_ast(const SyntaxTree & tree) { return Dumper().run(tree); }

std::string format_source(const SyntaxTree & tree) { return Formatter().run(tree); }

}  // namespace tea
