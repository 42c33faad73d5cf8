// test_analyzer.cpp - flattening, diffing, pairing, quadrants
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "tea/analyzer.hpp"
#include "test_support.hpp"

using namespace tea::analytics;
using tea::Json;
using tea::test::fixture_path;
using tea::test::read_fixture;

namespace
{

Json random_value(std::mt19937 & rng, int depth)
{
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 2);
  std::uniform_int_distribution<int> small(0, 3);
  switch (pick(rng)) {
    case 0: return Json(small(rng));
    case 1: return Json(std::string(1, static_cast<char>('a' + small(rng))));
    case 2: return Json(small(rng) % 2 == 0);
    case 3: {  // nested object
      Json obj = Json::object();
      int n = small(rng);
      for (int i = 0; i < n; ++i) {
        obj["k" + std::to_string(i)] = random_value(rng, depth - 1);
      }
      return obj;
    }
    case 4: {  // array
      Json arr = Json::array();
      int n = small(rng);
      for (int i = 0; i < n; ++i) arr.push_back(random_value(rng, depth - 1));
      return arr;
    }
    default: {  // JSON-in-string
      Json obj = Json::object();
      obj["code"] = small(rng);
      return Json(obj.dump());
    }
  }
}

Json random_params(std::mt19937 & rng)
{
  Json params = Json::object();
  std::uniform_int_distribution<int> n(0, 4);
  int count = n(rng);
  for (int i = 0; i < count; ++i) {
    params["p" + std::to_string(i)] = random_value(rng, 2);
  }
  return params;
}

}  // namespace

TEST_CASE("flatten: running example splits the embedded JSON string")
{
  Json params = Json::parse(read_fixture("correct.json"));
  FlatParamMap flat = flatten(params);
  CHECK(flat.at("PhoneNumbers") == "177xxxx9887");
  CHECK(flat.at("TemplateParam.code") == "123123");
  // the parent keeps its original string rendering
  CHECK(flat.count("TemplateParam") == 1);
  CHECK(flat.at("TemplateParam") == "{\"code\":\"123123\"}");
}

TEST_CASE("flatten: arrays get zero-based numeric segments, parent retained")
{
  FlatParamMap flat = flatten(Json{{"InstanceIds", Json::array({"i-a", "i-b"})}});
  CHECK(flat.at("InstanceIds.0") == "i-a");
  CHECK(flat.at("InstanceIds.1") == "i-b");
  CHECK(flat.count("InstanceIds") == 1);
}

TEST_CASE("flatten: plain strings that are not JSON containers stay scalar")
{
  FlatParamMap flat = flatten(Json{{"a", "hello"}, {"b", "123"}, {"c", "{not json"}});
  CHECK(flat == FlatParamMap{{"a", "hello"}, {"b", "123"}, {"c", "{not json"}});
}

TEST_CASE("diff: reproduces the running example annotation list exactly")
{
  Json correct = Json::parse(read_fixture("correct.json"));
  Json wrong = Json::parse(read_fixture("wrong.json"));
  DiffReport report = diff(flatten(correct), flatten(wrong));
  DiffReport want = {"-TemplateParam", "-TemplateParam.code", "PhoneNumbers", "SignName",
    "TemplateCode"};
  CHECK(report == want);
}

TEST_CASE("diff: groups come out as minus, plus, changed - each sorted")
{
  FlatParamMap correct = {{"z", "1"}, {"b", "2"}, {"m", "3"}};
  FlatParamMap wrong = {{"a", "9"}, {"m", "4"}, {"y", "8"}};
  DiffReport want = {"-b", "-z", "+a", "+y", "m"};
  CHECK(diff(correct, wrong) == want);
}

TEST_CASE("diff: reflexivity and antisymmetry over random nested values")
{
  std::mt19937 rng(4242);
  for (int i = 0; i < 1000; ++i) {
    Json a = random_params(rng);
    Json b = random_params(rng);
    FlatParamMap fa = flatten(a);
    FlatParamMap fb = flatten(b);
    CHECK(diff(fa, fa).empty());
    DiffReport forward = diff(fa, fb);
    DiffReport backward = diff(fb, fa);
    auto flip = [](DiffReport r) {
      for (auto & s : r) {
        if (s[0] == '-') s[0] = '+';
        else if (s[0] == '+') s[0] = '-';
      }
      std::sort(r.begin(), r.end());
      return r;
    };
    DiffReport lhs = flip(forward);
    DiffReport rhs = backward;
    std::sort(rhs.begin(), rhs.end());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("pair_and_aggregate: a failure pairs with the nearest success")
{
  std::vector<CallRecord> records;
  // success at t=0 and t=100; failure at t=60 pairs forward to t=100
  records.push_back({0, "u", "Api", Json{{"a", "1"}}, true, std::nullopt});
  records.push_back({100, "u", "Api", Json{{"a", "2"}}, true, std::nullopt});
  records.push_back({60, "u", "Api", Json{{"a", "3"}}, false, "Bad"});
  auto tables = pair_and_aggregate(records);
  REQUIRE(tables.count("Api") == 1);
  const ParamErrorTable & table = tables.at("Api");
  CHECK(table.paired_failed_calls == 1);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].error_code == "Bad");
  CHECK(table.rows[0].annotation == "a");
  CHECK(table.rows[0].rate == doctest::Approx(1.0));
}

TEST_CASE("pair_and_aggregate: different users and apis never pair")
{
  std::vector<CallRecord> records;
  records.push_back({0, "u1", "Api", Json{{"a", "1"}}, true, std::nullopt});
  records.push_back({10, "u2", "Api", Json{{"a", "2"}}, false, "Bad"});
  records.push_back({20, "u1", "Other", Json{{"a", "3"}}, false, "Bad"});
  auto tables = pair_and_aggregate(records);
  CHECK(tables.at("Api").unpaired_failed_calls == 1);
  CHECK(tables.at("Other").unpaired_failed_calls == 1);
}

TEST_CASE("pair_and_aggregate: successes outside the window do not pair")
{
  PairingOptions options;
  options.window_ms = 1000;
  std::vector<CallRecord> records;
  records.push_back({0, "u", "Api", Json{{"a", "1"}}, true, std::nullopt});
  records.push_back({5000, "u", "Api", Json{{"a", "2"}}, false, "Bad"});
  auto tables = pair_and_aggregate(records, options);
  CHECK(tables.at("Api").paired_failed_calls == 0);
  CHECK(tables.at("Api").unpaired_failed_calls == 1);
}

TEST_CASE("pair_and_aggregate: agrees with a quadratic oracle on random logs")
{
  // Oracle: for each failure scan every success of the same (user, api) and
  // keep the closest in time, ties to the later one.
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> time(0, 5000);
  std::uniform_int_distribution<int> user(0, 2);
  std::uniform_int_distribution<int> api(0, 1);
  std::uniform_int_distribution<int> good(0, 1);
  PairingOptions options;
  options.window_ms = 800;
  for (int round = 0; round < 20; ++round) {
    std::vector<CallRecord> records;
    std::set<std::int64_t> used;  // distinct timestamps keep the pairing unambiguous
    for (int i = 0; i < 200; ++i) {
      CallRecord r;
      do {
        r.timestamp_ms = time(rng);
      } while (!used.insert(r.timestamp_ms).second);
      r.user_id = "u" + std::to_string(user(rng));
      r.api = api(rng) ? "Alpha" : "Beta";
      r.params = random_params(rng);
      r.success = good(rng) == 1;
      if (!r.success) r.error_code = "E" + std::to_string(good(rng));
      records.push_back(std::move(r));
    }
    int expect_paired = 0;
    std::map<std::string, int> expect_paired_by_api;
    std::map<std::tuple<std::string, std::string, std::string>, int> expect_counts;
    for (const auto & f : records) {
      if (f.success) continue;
      const CallRecord * best = nullptr;
      for (const auto & s : records) {
        if (!s.success || s.user_id != f.user_id || s.api != f.api) continue;
        auto dist = [&](const CallRecord & c) {
          return c.timestamp_ms >= f.timestamp_ms ? c.timestamp_ms - f.timestamp_ms
                                                  : f.timestamp_ms - c.timestamp_ms;
        };
        if (dist(s) > options.window_ms) continue;
        if (!best || dist(s) < dist(*best)) {
          best = &s;
        } else if (dist(s) == dist(*best) && s.timestamp_ms > best->timestamp_ms) {
          best = &s;  // forward-first on exact ties
        }
      }
      if (!best) continue;
      ++expect_paired;
      ++expect_paired_by_api[f.api];
      for (const auto & note : diff(flatten(best->params), flatten(f.params))) {
        ++expect_counts[{f.api, *f.error_code, note}];
      }
    }
    auto tables = pair_and_aggregate(records, options);
    int got_paired = 0;
    for (const auto & [name, table] : tables) {
      got_paired += table.paired_failed_calls;
      for (const auto & row : table.rows) {
        CAPTURE(name);
        CAPTURE(row.error_code);
        CAPTURE(row.annotation);
        CHECK(row.count == expect_counts[{name, row.error_code, row.annotation}]);
        CHECK(row.rate ==
              doctest::Approx(double(row.count) / expect_paired_by_api[name]));
      }
    }
    CHECK(got_paired == expect_paired);
  }
}

TEST_CASE("read_call_log: malformed lines are counted, records sorted by time")
{
  int malformed = 0;
  std::vector<int> bad_lines;
  auto records = read_call_log(fixture_path("calls.jsonl"), &malformed,
    [&](int line, const std::string &) { bad_lines.push_back(line); });
  CHECK(malformed == 2);
  CHECK(bad_lines == std::vector<int>{3, 4});
  REQUIRE(records.size() == 5);
  CHECK(std::is_sorted(records.begin(), records.end(),
    [](const CallRecord & a, const CallRecord & b) { return a.timestamp_ms < b.timestamp_ms; }));
  CHECK(records[0].api == "SendSms");
  CHECK(records[1].error_code == "InvalidParameter");
}

TEST_CASE("read_call_log: gzip input decodes to the same records")
{
  auto plain = read_call_log(fixture_path("calls.jsonl"));
  auto gz = read_call_log(fixture_path("calls.jsonl.gz"));
  REQUIRE(gz.size() == plain.size());
  for (std::size_t i = 0; i < gz.size(); ++i) {
    CHECK(gz[i].timestamp_ms == plain[i].timestamp_ms);
    CHECK(gz[i].params == plain[i].params);
  }
}

TEST_CASE("read_call_log: fixture log reproduces the running-example table")
{
  auto records = read_call_log(fixture_path("calls.jsonl"));
  auto tables = pair_and_aggregate(records);
  const ParamErrorTable & sms = tables.at("SendSms");
  CHECK(sms.paired_failed_calls == 1);
  CHECK(sms.unpaired_failed_calls == 1);
  std::vector<std::string> notes;
  for (const auto & row : sms.rows) notes.push_back(row.annotation);
  std::sort(notes.begin(), notes.end());
  CHECK(notes == std::vector<std::string>{"-TemplateParam", "-TemplateParam.code",
          "PhoneNumbers", "SignName", "TemplateCode"});
}

TEST_CASE("quadrant: boundaries are closed on the high side")
{
  auto points = quadrant({{"a", 0.5, 0.5}, {"b", 0.4, 0.6}, {"c", 0.6, 0.4}, {"d", 0.2, 0.1}});
  std::map<std::string, Quadrant> got;
  for (const auto & p : points) got[p.api] = p.quadrant;
  CHECK(got.at("a") == Quadrant::Q1);  // >= on both axes
  CHECK(got.at("b") == Quadrant::Q2);
  CHECK(got.at("c") == Quadrant::Q4);
  CHECK(got.at("d") == Quadrant::Q3);
}

TEST_CASE("quadrant: out-of-range input is rejected")
{
  CHECK_THROWS_AS(quadrant({{"a", 1.5, 0.5}}), RangeError);
  CHECK_THROWS_AS(quadrant({{"a", 0.5, -0.1}}), RangeError);
}

TEST_CASE("quadrant: Q3 ranks before Q4 before the healthy half")
{
  auto points = quadrant({{"healthy", 0.9, 0.9}, {"risky", 0.1, 0.1}, {"leaky", 0.9, 0.1},
    {"quiet", 0.1, 0.9}});
  REQUIRE(points.size() == 4);
  CHECK(points[0].api == "risky");
  CHECK(points[0].rank == 1);
  CHECK(points[1].api == "leaky");
  CHECK(points[2].rank == 3);
  CHECK(points[3].rank == 4);
}

TEST_CASE("coverage_rate: fraction of parameters with description and example")
{
  ApiDocSpec sms = parse_doc_spec(Json::parse(read_fixture("docs/send_sms.json")));
  CHECK(sms.api == "SendSms");
  // 3 of 5 rows carry both a description and an example
  CHECK(coverage_rate(sms) == doctest::Approx(0.6));
  ApiDocSpec empty;
  empty.api = "Nothing";
  CHECK_THROWS_AS(coverage_rate(empty), EmptySpec);
}
