// parser.cpp - recursive-descent parser for TeaDSL
#include "tea/parser.hpp"

#include <charconv>
#include <cstdlib>

#include "tea/lexer.hpp"

namespace tea
{

namespace
{

struct ParseAbort
{
};

class Parser
{
public:
  explicit Parser(const std::vector<Token> & tokens) : tokens_(tokens) {}

  ParseResult run()
  {
    ParseResult result;
    while (!at(TokenKind::Eof)) {
      try {
        if (peek().is_keyword("import")) {
          result.tree.imports.push_back(parse_import());
        } else if (peek().is_keyword("model")) {
          result.tree.models.push_back(parse_model());
        } else if (peek().is_keyword("type")) {
          result.tree.behavior_types.push_back(parse_behavior_type());
        } else if (peek().is_keyword("api")) {
          result.tree.apis.push_back(parse_api());
        } else {
          error("expected top-level declaration (import/model/type/api), found " +
                describe(peek()));
        }
      } catch (const ParseAbort &) {
        synchronize();
      }
    }
    result.diagnostics = std::move(diags_);
    return result;
  }

private:
  const Token & peek(std::size_t ahead = 0) const
  {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  const Token & advance()
  {
    const Token & t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool at(TokenKind k) const { return peek().kind == k; }

  bool accept_punct(const char * p)
  {
    if (peek().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }

  const Token & expect_punct(const char * p)
  {
    if (!peek().is_punct(p)) error(std::string("expected '") + p + "', found " + describe(peek()));
    return advance();
  }

  const Token & expect(TokenKind k, const char * what)
  {
    if (!at(k)) error(std::string("expected ") + what + ", found " + describe(peek()));
    return advance();
  }

  void expect_keyword(const char * kw)
  {
    if (!peek().is_keyword(kw)) {
      error(std::string("expected '") + kw + "', found " + describe(peek()));
    }
    advance();
  }

  static std::string describe(const Token & t)
  {
    if (t.kind == TokenKind::Eof) return "end of input";
    return std::string(to_string(t.kind)) + " '" + t.text + "'";
  }

  [[noreturn]] void error(const std::string & message)
  {
    diags_.push_back({Severity::Error, "parse", message, peek().span});
    throw ParseAbort{};
  }

  // Skip to the next top-level declaration keyword.
  void synchronize()
  {
    while (!at(TokenKind::Eof)) {
      const Token & t = peek();
      if (t.is_keyword("import") || t.is_keyword("model") || t.is_keyword("type") ||
          t.is_keyword("api")) {
        return;
      }
      advance();
    }
  }

  // ------------------------------------------------------------------ decls

  ImportDecl parse_import()
  {
    Span span = peek().span;
    expect_keyword("import");
    std::string name = expect(TokenKind::Ident, "module name").text;
    span.end = expect_punct(";").span.end;
    return ImportDecl{std::move(name), span};
  }

  ModelDecl parse_model()
  {
    ModelDecl decl;
    decl.span = peek().span;
    expect_keyword("model");
    decl.name = expect(TokenKind::Ident, "model name").text;
    expect_punct("{");
    while (!peek().is_punct("}")) {
      decl.fields.push_back(parse_field());
      if (!accept_punct(",")) break;
    }
    decl.span.end = expect_punct("}").span.end;
    return decl;
  }

  ModelField parse_field()
  {
    ModelField field;
    field.span = peek().span;
    field.name = expect(TokenKind::Ident, "field name").text;
    field.optional = accept_punct("?");
    expect_punct(":");
    field.type = parse_type();
    if (accept_punct("(")) {
      while (!peek().is_punct(")")) {
        std::string key = expect(TokenKind::Ident, "attribute name").text;
        expect_punct("=");
        field.attributes.emplace_back(std::move(key), parse_literal());
        if (!accept_punct(",")) break;
      }
      expect_punct(")");
    }
    field.span.end = peek(0).span.begin;
    return field;
  }

  BehaviorTypeDecl parse_behavior_type()
  {
    BehaviorTypeDecl decl;
    decl.span = peek().span;
    expect_keyword("type");
    decl.name = expect(TokenKind::AtIdent, "behavior name").text.substr(1);
    expect_punct("=");
    expect_punct("(");
    while (!peek().is_punct(")")) {
      decl.param_types.push_back(parse_type());
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    expect_punct(":");
    decl.return_type = parse_type();
    accept_punct(";");
    decl.span.end = peek(0).span.begin;
    return decl;
  }

  ApiDecl parse_api()
  {
    ApiDecl decl;
    decl.span = peek().span;
    expect_keyword("api");
    decl.name = expect(TokenKind::Ident, "api name").text;
    expect_punct("(");
    while (!peek().is_punct(")")) {
      ApiParam param;
      param.span = peek().span;
      param.name = expect(TokenKind::Ident, "parameter name").text;
      expect_punct(":");
      param.type = parse_type();
      decl.params.push_back(std::move(param));
      if (!accept_punct(",")) break;
    }
    expect_punct(")");
    expect_punct(":");
    decl.return_type = parse_type();
    decl.request_block = parse_block();
    expect_keyword("returns");
    decl.returns_block = parse_block();
    decl.span.end = peek(0).span.begin;
    return decl;
  }

  TypeExpr parse_type()
  {
    Span span = peek().span;
    // [elem] array syntax
    if (accept_punct("[")) {
      TypeExpr elem = parse_type();
      span.end = expect_punct("]").span.end;
      TypeExpr t = TypeExpr::array_of(std::move(elem));
      t.span = span;
      return t;
    }
    const Token & name = expect(TokenKind::Ident, "type name");
    TypeExpr t;
    if (name.text == "map" && peek().is_punct("[")) {
      expect_punct("[");
      TypeExpr key = parse_type();
      expect_punct("]");
      TypeExpr value = parse_type();
      t = TypeExpr::map_of(std::move(key), std::move(value));
    } else if (name.text == "string") {
      t = TypeExpr::primitive(TypeExpr::Kind::String);
    } else if (name.text == "number") {
      t = TypeExpr::primitive(TypeExpr::Kind::Number);
    } else if (name.text == "boolean") {
      t = TypeExpr::primitive(TypeExpr::Kind::Boolean);
    } else if (name.text == "any") {
      t = TypeExpr::primitive(TypeExpr::Kind::Any);
    } else if (name.text == "readable") {
      t = TypeExpr::primitive(TypeExpr::Kind::Readable);
    } else if (name.text == "void") {
      t = TypeExpr::primitive(TypeExpr::Kind::Void);
    } else {
      t = TypeExpr::named(name.text);
    }
    span.end = peek(0).span.begin;
    t.span = span;
    return t;
  }

  // ------------------------------------------------------------------ stmts

  Block parse_block()
  {
    expect_punct("{");
    Block block;
    while (!peek().is_punct("}") && !at(TokenKind::Eof)) {
      block.push_back(parse_stmt());
    }
    expect_punct("}");
    return block;
  }

  StmtPtr parse_stmt()
  {
    auto stmt = std::make_unique<Stmt>();
    stmt->span = peek().span;
    if (peek().is_keyword("var")) {
      advance();
      VarDeclStmt var;
      var.name = expect(TokenKind::Ident, "variable name").text;
      expect_punct("=");
      var.init = parse_expr();
      stmt->span.end = expect_punct(";").span.end;
      stmt->node = std::move(var);
      return stmt;
    }
    if (peek().is_keyword("return")) {
      advance();
      ReturnStmt ret;
      if (!peek().is_punct(";")) ret.value = parse_expr();
      stmt->span.end = expect_punct(";").span.end;
      stmt->node = std::move(ret);
      return stmt;
    }
    if (peek().is_keyword("if")) {
      stmt->node = parse_if();
      stmt->span.end = peek(0).span.begin;
      return stmt;
    }
    ExprPtr expr = parse_expr();
    if (peek().is_punct("=")) {
      const auto * path = expr->as<PathAccessExpr>();
      if (path == nullptr) error("left-hand side of assignment must be a path");
      advance();
      AssignStmt assign;
      assign.target = path->segments;
      assign.target_span = expr->span;
      assign.value = parse_expr();
      stmt->span.end = expect_punct(";").span.end;
      stmt->node = std::move(assign);
      return stmt;
    }
    ExprStmt es;
    es.expr = std::move(expr);
    stmt->span.end = expect_punct(";").span.end;
    stmt->node = std::move(es);
    return stmt;
  }

  IfStmt parse_if()
  {
    IfStmt node;
    expect_keyword("if");
    for (;;) {
      IfStmt::Arm arm;
      expect_punct("(");
      arm.cond = parse_expr();
      expect_punct(")");
      arm.body = parse_block();
      node.arms.push_back(std::move(arm));
      if (!peek().is_keyword("else")) break;
      advance();
      if (peek().is_keyword("if")) {
        advance();
        continue;
      }
      IfStmt::Arm tail;
      tail.body = parse_block();
      node.arms.push_back(std::move(tail));
      break;
    }
    return node;
  }

  // ------------------------------------------------------------------ exprs

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or()
  {
    ExprPtr lhs = parse_and();
    while (peek().is_punct("||")) {
      advance();
      lhs = make_binary(BinaryExpr::Op::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and()
  {
    ExprPtr lhs = parse_equality();
    while (peek().is_punct("&&")) {
      advance();
      lhs = make_binary(BinaryExpr::Op::And, std::move(lhs), parse_equality());
    }
    return lhs;
  }

  ExprPtr parse_equality()
  {
    ExprPtr lhs = parse_additive();
    while (peek().is_punct("==") || peek().is_punct("!=")) {
      BinaryExpr::Op op = peek().is_punct("==") ? BinaryExpr::Op::Eq : BinaryExpr::Op::Ne;
      advance();
      lhs = make_binary(op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive()
  {
    ExprPtr lhs = parse_primary();
    while (peek().is_punct("+")) {
      advance();
      lhs = make_binary(BinaryExpr::Op::Add, std::move(lhs), parse_primary());
    }
    return lhs;
  }

  ExprPtr make_binary(BinaryExpr::Op op, ExprPtr lhs, ExprPtr rhs)
  {
    auto expr = std::make_unique<Expr>();
    expr->span = Span{lhs->span.begin, rhs->span.end};
    BinaryExpr bin;
    bin.op = op;
    bin.lhs = std::move(lhs);
    bin.rhs = std::move(rhs);
    expr->node = std::move(bin);
    return expr;
  }

  ExprPtr parse_literal()
  {
    const Token & t = peek();
    if (t.kind == TokenKind::StringLit || t.kind == TokenKind::NumberLit ||
        t.kind == TokenKind::BoolLit || t.is_keyword("null")) {
      return parse_primary();
    }
    error("expected literal, found " + describe(t));
  }

  ExprPtr parse_primary()
  {
    auto expr = std::make_unique<Expr>();
    expr->span = peek().span;
    const Token & t = peek();
    switch (t.kind) {
      case TokenKind::StringLit:
        expr->node = StringLitExpr{advance().text};
        return expr;
      case TokenKind::NumberLit: {
        NumberLitExpr num;
        num.lexeme = advance().text;
        num.value = std::strtod(num.lexeme.c_str(), nullptr);
        num.is_integer = num.lexeme.find('.') == std::string::npos;
        expr->node = std::move(num);
        return expr;
      }
      case TokenKind::BoolLit:
        expr->node = BoolLitExpr{advance().text == "true"};
        return expr;
      case TokenKind::TemplateStringPart:
        return parse_template();
      case TokenKind::AtIdent: {
        BehaviorCallExpr call;
        call.name = advance().text.substr(1);
        expect_punct("(");
        while (!peek().is_punct(")")) {
          call.args.push_back(parse_expr());
          if (!accept_punct(",")) break;
        }
        expr->span.end = expect_punct(")").span.end;
        expr->node = std::move(call);
        return expr;
      }
      case TokenKind::Keyword:
        if (t.text == "null") {
          advance();
          expr->node = NullLitExpr{};
          return expr;
        }
        break;
      case TokenKind::Punct:
        if (t.text == "(") {
          advance();
          ExprPtr inner = parse_expr();
          expect_punct(")");
          return inner;
        }
        if (t.text == "{") return parse_map_lit();
        break;
      case TokenKind::Ident:
        return parse_path_or_call();
      default:
        break;
    }
    error("expected expression, found " + describe(t));
  }

  ExprPtr parse_template()
  {
    auto expr = std::make_unique<Expr>();
    expr->span = peek().span;
    TemplateStringExpr tpl;
    for (;;) {
      const Token & part = expect(TokenKind::TemplateStringPart, "template string part");
      TemplateStringExpr::Part lit;
      lit.literal = part.text;
      tpl.parts.push_back(std::move(lit));
      expr->span.end = part.span.end;
      if (!peek().is_punct("${")) break;
      advance();
      TemplateStringExpr::Part hole;
      hole.is_hole = true;
      hole.hole = parse_expr();
      tpl.parts.push_back(std::move(hole));
      expect_punct("}");
    }
    expr->node = std::move(tpl);
    return expr;
  }

  // Map literal per the api listing: { key = expr, } with '=' separators.
  ExprPtr parse_map_lit()
  {
    auto expr = std::make_unique<Expr>();
    expr->span = peek().span;
    expect_punct("{");
    MapLitExpr map;
    while (!peek().is_punct("}")) {
      std::string key = at(TokenKind::StringLit) ? advance().text
                                                 : expect(TokenKind::Ident, "map key").text;
      expect_punct("=");
      map.entries.emplace_back(std::move(key), parse_expr());
      if (!accept_punct(",")) break;
    }
    expr->span.end = expect_punct("}").span.end;
    expr->node = std::move(map);
    return expr;
  }

  ExprPtr parse_path_or_call()
  {
    auto expr = std::make_unique<Expr>();
    expr->span = peek().span;
    std::vector<std::string> segments;
    segments.push_back(expect(TokenKind::Ident, "identifier").text);
    while (peek().is_punct(".") && peek(1).kind == TokenKind::Ident) {
      advance();
      segments.push_back(advance().text);
      expr->span.end = peek(0).span.begin;
    }
    if (peek().is_punct("(") && segments.size() == 2) {
      advance();
      CallExpr call;
      call.module = segments[0];
      call.method = segments[1];
      while (!peek().is_punct(")")) {
        call.args.push_back(parse_expr());
        if (!accept_punct(",")) break;
      }
      expr->span.end = expect_punct(")").span.end;
      expr->node = std::move(call);
      return expr;
    }
    PathAccessExpr path;
    path.segments = std::move(segments);
    expr->node = std::move(path);
    return expr;
  }

  const std::vector<Token> & tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse(const std::vector<Token> & tokens) { return Parser(tokens).run(); }

ParseResult parse_source(std::string_view source)
{
  std::vector<Token> tokens;
  try {
    tokens = strip_trivia(tokenize(source));
  } catch (const LexError & e) {
    ParseResult result;
    result.diagnostics.push_back(
      {Severity::Error, "lex", e.what(), Span{e.pos, e.pos}});
    return result;
  }
  return parse(tokens);
}

}  // namespace tea
