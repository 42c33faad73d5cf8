// test_semantics.cpp - analysis diagnostics and model value validation
#include <doctest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "tea/parser.hpp"
#include "tea/semantics.hpp"
#include "test_support.hpp"

using namespace tea;
using tea::test::read_fixture;

namespace
{

SemanticModule analyze_source(const std::string & source)
{
  auto parsed = parse_source(source);
  REQUIRE(parsed.ok());
  return analyze(std::move(parsed.tree));
}

bool has_code(const SemanticModule & m, const std::string & code, Severity sev)
{
  return std::any_of(m.diagnostics.begin(), m.diagnostics.end(),
    [&](const Diagnostic & d) { return d.code == code && d.severity == sev; });
}

}  // namespace

TEST_CASE("analyze: the getUser module is clean apart from the any-cast warning")
{
  auto mod = analyze_source(read_fixture("getuser.tea"));
  CHECK(mod.valid());
  // readAsJSON returns any; returning it as User is the flagged implicit cast
  CHECK(has_code(mod, "any-cast", Severity::Warning));
  CHECK(mod.models.count("User") == 1);
  CHECK(mod.apis.count("getUser") == 1);
  CHECK(mod.behaviors.count("toJSONString") == 1);
}

TEST_CASE("analyze: every fixture module is valid")
{
  for (const char * name : {"echo.tea", "status.tea", "concat.tea", "defaults.tea",
         "behavior.tea", "maps.tea", "nested.tea", "logic.tea", "arrays.tea", "port.tea"}) {
    CAPTURE(name);
    auto mod = analyze_source(read_fixture(name));
    for (const auto & d : mod.diagnostics) CAPTURE(render(d, name));
    CHECK(mod.valid());
  }
}

TEST_CASE("analyze: broken fixture reports unknown type, bad import use, port type")
{
  auto parsed = parse_source(read_fixture("broken.tea"));
  REQUIRE(parsed.ok());
  auto mod = analyze(std::move(parsed.tree));
  CHECK(!mod.valid());
  CHECK(has_code(mod, "unknown-type", Severity::Error));     // Accont
  CHECK(has_code(mod, "type-mismatch", Severity::Error));    // port = 'eighty'
  CHECK(has_code(mod, "unknown-import", Severity::Error));   // Util never imported
}

TEST_CASE("analyze: duplicate declarations and fields are rejected")
{
  auto mod = analyze_source(
    "model A { id: string, id: number }\n"
    "model A { x: string }\n");
  CHECK(has_code(mod, "duplicate-decl", Severity::Error));
  CHECK(has_code(mod, "duplicate-field", Severity::Error));
}

TEST_CASE("analyze: writing __response or reading it in the request block")
{
  auto mod = analyze_source(
    "api f(): any {\n"
    "  __response.statusCode = 200;\n"
    "  __request.pathname = __response.statusMessage;\n"
    "} returns {\n"
    "  __request.method = 'POST';\n"
    "  return null;\n"
    "}\n");
  CHECK(has_code(mod, "assign-response", Severity::Error));
  CHECK(has_code(mod, "response-read-in-request", Severity::Error));
  CHECK(has_code(mod, "assign-request", Severity::Error));
}

TEST_CASE("analyze: operand types of + and && are checked")
{
  auto mod = analyze_source(
    "api f(n: number): any {\n"
    "  __request.pathname = 'x' + n;\n"
    "  var bad = true && 'yes';\n"
    "} returns {\n"
    "  return null;\n"
    "}\n");
  CHECK(!mod.valid());
  CHECK(has_code(mod, "type-mismatch", Severity::Error));
}

TEST_CASE("analyze: diagnostics come out sorted by position")
{
  auto mod = analyze_source(read_fixture("broken.tea"));
  for (std::size_t i = 1; i < mod.diagnostics.size(); ++i) {
    const auto & a = mod.diagnostics[i - 1].span.begin;
    const auto & b = mod.diagnostics[i].span.begin;
    CHECK(a.byte_offset <= b.byte_offset);
  }
}

TEST_CASE("validate_value: getUser's User model, field by field")
{
  auto mod = analyze_source(read_fixture("getuser.tea"));

  SUBCASE("valid value")
  {
    auto report = validate_value("User", Json{{"username", "jack"}, {"age", 30}}, mod);
    CHECK(report.ok());
  }
  SUBCASE("age below min")
  {
    auto report = validate_value("User", Json{{"username", "jack"}, {"age", 17}}, mod);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].field_path == "age");
    CHECK(report.violations[0].rule == ViolationRule::Min);
    CHECK(report.violations[0].detail == "17 < 18");
  }
  SUBCASE("age bounds are inclusive")
  {
    CHECK(validate_value("User", Json{{"username", "a"}, {"age", 18}}, mod).ok());
    CHECK(validate_value("User", Json{{"username", "a"}, {"age", 99}}, mod).ok());
    CHECK(!validate_value("User", Json{{"username", "a"}, {"age", 100}}, mod).ok());
  }
  SUBCASE("username pattern spans the whole value")
  {
    // '0' is outside [a-zA-Z1-9]
    auto report = validate_value("User", Json{{"username", "t0m"}, {"age", 30}}, mod);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].rule == ViolationRule::Pattern);
  }
  SUBCASE("missing required field")
  {
    auto report = validate_value("User", Json{{"age", 30}}, mod);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].rule == ViolationRule::MissingRequired);
    CHECK(report.violations[0].field_path == "username");
  }
  SUBCASE("wrong primitive type")
  {
    auto report = validate_value("User", Json{{"username", "jack"}, {"age", "30"}}, mod);
    bool saw_type = false;
    for (const auto & v : report.violations) {
      if (v.rule == ViolationRule::TypeMismatch) saw_type = true;
    }
    CHECK(saw_type);
  }
  SUBCASE("unknown model throws")
  {
    CHECK_THROWS_AS(validate_value("Nobody", Json::object(), mod), UnknownModel);
  }
}

TEST_CASE("validate_value: nested models and optional fields")
{
  auto mod = analyze_source(read_fixture("nested.tea"));
  CHECK(validate_value(
    "Person", Json{{"name", "Ana"}, {"address", {{"city", "Oslo"}}}}, mod)
      .ok());
  auto missing = validate_value("Person", Json{{"name", "Ana"}}, mod);
  REQUIRE(missing.violations.size() == 1);
  CHECK(missing.violations[0].field_path == "address");
  auto deep = validate_value("Person", Json{{"name", "Ana"}, {"address", Json::object()}}, mod);
  REQUIRE(deep.violations.size() == 1);
  CHECK(deep.violations[0].field_path == "address.city");
}

TEST_CASE("validate_value: brute-force agreement on a small value universe")
{
  // Independent oracle: re-derive the verdict for User from first principles
  // and compare over every (username, age) combination below.
  auto mod = analyze_source(read_fixture("getuser.tea"));
  const std::vector<Json> usernames = {
    Json("jack"), Json("a"), Json("t0m"), Json(""), Json("Zz9"), Json(42), Json(nullptr)};
  const std::vector<Json> ages = {
    Json(17), Json(18), Json(50), Json(99), Json(100), Json("30"), Json(nullptr)};
  auto username_ok = [](const Json & u) {
    if (!u.is_string()) return false;
    const std::string & s = u.get<std::string>();
    if (s.empty()) return false;
    for (char c : s) {
      bool in_class = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '1' && c <= '9');
      if (!in_class) return false;
    }
    return true;
  };
  auto age_ok = [](const Json & a) {
    if (!a.is_number()) return false;
    double v = a.get<double>();
    return v >= 18 && v <= 99;
  };
  for (const auto & u : usernames) {
    for (const auto & a : ages) {
      Json value = Json::object();
      if (!u.is_null()) value["username"] = u;
      if (!a.is_null()) value["age"] = a;
      bool expect = username_ok(u) && age_ok(a);
      CAPTURE(value.dump());
      CHECK(validate_value("User", value, mod).ok() == expect);
    }
  }
}
