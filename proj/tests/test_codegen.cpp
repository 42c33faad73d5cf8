// test_codegen.cpp - target registry, identifier styling, emission
#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "tea/codegen.hpp"
#include "tea/parser.hpp"
#include "test_support.hpp"

using namespace tea;
using tea::test::read_file;
using tea::test::read_fixture;

namespace
{

SemanticModule load(const std::string & name)
{
  auto parsed = parse_source(read_fixture(name));
  REQUIRE(parsed.ok());
  auto mod = analyze(std::move(parsed.tree));
  REQUIRE(mod.valid());
  return mod;
}

}  // namespace

TEST_CASE("targets: at least two, unique ids, one executable")
{
  auto targets = list_targets();
  REQUIRE(targets.size() >= 2);
  std::set<std::string> ids;
  bool executable = false;
  for (const auto & t : targets) {
    CHECK(ids.insert(t.target_id).second);
    CHECK(!t.file_extension.empty());
    executable = executable || t.executable;
  }
  CHECK(executable);
  CHECK(find_target("python") != nullptr);
  CHECK(find_target("typescript") != nullptr);
  CHECK(find_target("cobol") == nullptr);
}

TEST_CASE("apply_style: known conversions and idempotence")
{
  CHECK(apply_style("getUser", IdentifierStyle::SnakeCase) == "get_user");
  CHECK(apply_style("readAsJSON", IdentifierStyle::SnakeCase) == "read_as_json");
  CHECK(apply_style("get_user", IdentifierStyle::CamelCase) == "getUser");
  CHECK(apply_style("templateCode", IdentifierStyle::PascalCase) == "TemplateCode");
  for (auto style : {IdentifierStyle::SnakeCase, IdentifierStyle::CamelCase,
         IdentifierStyle::PascalCase}) {
    for (const char * name : {"getUser", "read_as_json", "HTTPStatus", "a", "X9y"}) {
      std::string once = apply_style(name, style);
      CHECK(apply_style(once, style) == once);
    }
  }
}

TEST_CASE("targets: type mapping is total over every type shape")
{
  using Kind = TypeExpr::Kind;
  std::vector<TypeExpr> shapes = {
    TypeExpr::primitive(Kind::String), TypeExpr::primitive(Kind::Number),
    TypeExpr::primitive(Kind::Boolean), TypeExpr::primitive(Kind::Any),
    TypeExpr::primitive(Kind::Readable), TypeExpr::primitive(Kind::Void),
    TypeExpr::map_of(TypeExpr::primitive(Kind::String), TypeExpr::primitive(Kind::String)),
    TypeExpr::array_of(TypeExpr::named("User")), TypeExpr::named("User")};
  for (const auto & target : list_targets()) {
    for (const auto & t : shapes) {
      CAPTURE(target.target_id);
      CAPTURE(to_string(t));
      CHECK(!target.type_name(t).empty());
    }
  }
}

TEST_CASE("emit: both targets cover every fixture module deterministically")
{
  for (const char * name : {"getuser.tea", "echo.tea", "status.tea", "concat.tea",
         "defaults.tea", "behavior.tea", "maps.tea", "nested.tea", "logic.tea",
         "arrays.tea", "port.tea"}) {
    CAPTURE(name);
    auto mod = load(name);
    for (const auto & target : list_targets()) {
      CAPTURE(target.target_id);
      FileSet first = emit(mod, target);
      CHECK(!first.empty());
      CHECK(emit(mod, target) == first);
    }
  }
}

TEST_CASE("emit: python client text follows the target's identifier style")
{
  auto mod = load("getuser.tea");
  FileSet files = emit(mod, *find_target("python"));
  REQUIRE(files.count("client.py") == 1);
  REQUIRE(files.count("tea_core.py") == 1);
  const std::string & client = files.at("client.py");
  CHECK(client.find("def get_user(self, username):") != std::string::npos);
  CHECK(client.find("_req.method = 'GET'") != std::string::npos);
  CHECK(client.find("getUser") == std::string::npos);  // style applied everywhere
}

TEST_CASE("emit: typescript client keeps camelCase and declares the model")
{
  auto mod = load("getuser.tea");
  FileSet files = emit(mod, *find_target("typescript"));
  REQUIRE(files.count("client.ts") == 1);
  const std::string & client = files.at("client.ts");
  CHECK(client.find("getUser(") != std::string::npos);
  CHECK(client.find("interface User") != std::string::npos);
  CHECK(client.find("get_user") == std::string::npos);
}

TEST_CASE("emit: constraint metadata survives into the generated python verbatim")
{
  // Parse the _MODELS table back out of client.py and compare against the
  // declaration attributes.
  auto mod = load("getuser.tea");
  FileSet files = emit(mod, *find_target("python"));
  const std::string & client = files.at("client.py");
  auto begin = client.find("json.loads(r\"\"\"");
  REQUIRE(begin != std::string::npos);
  begin += std::string("json.loads(r\"\"\"").size();
  auto end = client.find("\"\"\")", begin);
  REQUIRE(end != std::string::npos);
  Json models = Json::parse(client.substr(begin, end - begin));
  REQUIRE(models.contains("User"));
  std::map<std::string, Json> constraints;
  for (const auto & field : models["User"]["fields"]) {
    constraints[field["name"].get<std::string>()] = field.value("constraints", Json::object());
  }
  const ModelDecl & decl = *mod.models.at("User");
  for (const auto & field : decl.fields) {
    for (const auto & [key, expr] : field.attributes) {
      CAPTURE(field.name);
      CAPTURE(key);
      REQUIRE(constraints.at(field.name).contains(key));
      const Json & got = constraints.at(field.name)[key];
      if (const auto * s = expr->as<StringLitExpr>()) {
        CHECK(got == Json(s->value));
      } else if (const auto * n = expr->as<NumberLitExpr>()) {
        CHECK(got.get<double>() == n->value);
      }
    }
  }
}

TEST_CASE("emit: a module with error diagnostics is refused")
{
  auto parsed = parse_source(read_fixture("broken.tea"));
  REQUIRE(parsed.ok());
  auto mod = analyze(std::move(parsed.tree));
  REQUIRE(!mod.valid());
  CHECK_THROWS(emit(mod, *find_target("python")));
}

TEST_CASE("emit_code_sample: runnable python snippet with the given arguments")
{
  auto mod = load("getuser.tea");
  std::string sample =
    emit_code_sample(mod, "getUser", {{"username", Json("jack")}}, *find_target("python"));
  CHECK(sample.find("username = 'jack'") != std::string::npos);
  CHECK(sample.find("client.get_user(username)") != std::string::npos);
  CHECK(sample.find("MockTransport") != std::string::npos);
}

TEST_CASE("emit_code_sample: model-typed sample arguments are validated")
{
  auto mod = load("behavior.tea");
  CHECK_THROWS(emit_code_sample(mod, "send",
    {{"payload", Json{{"name", "x"}, {"count", "not a number"}}}, },
    *find_target("python")));
  CHECK_NOTHROW(emit_code_sample(mod, "send",
    {{"payload", Json{{"name", "x"}, {"count", 2}}}, },
    *find_target("python")));
}

TEST_CASE("write_fileset: manifest lists every file with its digest")
{
  auto mod = load("defaults.tea");
  FileSet files = emit(mod, *find_target("python"));
  auto dir = std::filesystem::temp_directory_path() / "teaforge_fileset_test";
  std::filesystem::remove_all(dir);
  write_fileset(files, dir.string());
  Json manifest = Json::parse(read_file((dir / "fileset.json").string()));
  REQUIRE(manifest.is_array());
  REQUIRE(manifest.size() == files.size());
  for (const auto & entry : manifest) {
    std::string path = entry["path"].get<std::string>();
    CHECK(files.count(path) == 1);
    CHECK(entry["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(std::filesystem::exists(dir / path));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("write_fileset: escaping paths are rejected")
{
  auto dir = std::filesystem::temp_directory_path() / "teaforge_fileset_escape";
  std::filesystem::remove_all(dir);
  CHECK_THROWS(write_fileset({{"../evil.py", "boo"}}, dir.string()));
  CHECK_THROWS(write_fileset({{"/abs.py", "boo"}}, dir.string()));
  std::filesystem::remove_all(dir);
}
