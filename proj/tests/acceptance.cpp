// acceptance.cpp - end-to-end acceptance gate. Each criterion prints exactly
// one PASS/FAIL line; the process exits nonzero if any criterion fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "tea/analyzer.hpp"
#include "tea/ast_dump.hpp"
#include "tea/codegen.hpp"
#include "tea/lexer.hpp"
#include "tea/mock_transport.hpp"
#include "tea/parser.hpp"
#include "tea/runtime.hpp"
#include "tea/semantics.hpp"

namespace fs = std::filesystem;
using namespace tea;
namespace an = tea::analytics;

namespace
{

struct Check
{
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string & what)
  {
    if (!cond) {
      if (!ok) why << "; ";
      ok = false;
      why << what;
    }
  }
};

std::string fixture(const std::string & name)
{
  return std::string(TEA_FIXTURES_DIR) + "/" + name;
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

SemanticModule load(const std::string & name, Check & check)
{
  auto parsed = parse_source(read_file(fixture(name)));
  check.expect(parsed.ok(), name + " does not parse");
  auto mod = analyze(std::move(parsed.tree));
  check.expect(mod.valid(), name + " does not analyze");
  return mod;
}

// --------------------------------------------------------------- criterion 1

bool criterion_diff_reproduction(Check & check)
{
  Json correct = Json::parse(read_file(fixture("correct.json")));
  Json wrong = Json::parse(read_file(fixture("wrong.json")));
  an::DiffReport want = {"-TemplateParam", "-TemplateParam.code", "PhoneNumbers", "SignName",
    "TemplateCode"};
  an::DiffReport got;
  // best of three runs, so a cold cache does not decide the timing bound
  double best_us = 1e9;
  for (int i = 0; i < 3; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    got = an::diff(an::flatten(correct), an::flatten(wrong));
    auto t1 = std::chrono::steady_clock::now();
    double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
    if (us < best_us) best_us = us;
  }
  check.expect(got == want, "annotation list differs");
  check.expect(best_us < 1000.0, "flatten+diff took " + std::to_string(best_us) + "us");
  return check.ok;
}

// --------------------------------------------------------------- criterion 2

bool criterion_listings_compile(Check & check)
{
  std::string source = read_file(fixture("getuser.tea"));
  try {
    auto tokens = tokenize(source);
    check.expect(!tokens.empty(), "no tokens");
  } catch (const LexError & e) {
    check.expect(false, std::string("lex error: ") + e.what());
    return check.ok;
  }
  auto parsed = parse_source(source);
  check.expect(parsed.ok(), "parse errors");
  if (!parsed.ok()) return check.ok;
  std::string dump = dump_ast(parsed.tree);
  std::string golden = read_file(std::string(TEA_GOLDEN_DIR) + "/getuser.tea.ast");
  check.expect(dump == golden, "AST dump differs from the checked-in golden");
  auto mod = analyze(std::move(parsed.tree));
  check.expect(mod.valid(), "analysis reports errors");
  check.expect(mod.models.count("User") == 1, "model User missing");
  check.expect(mod.behaviors.count("toJSONString") == 1, "behavior type missing");
  check.expect(mod.apis.count("getUser") == 1, "api getUser missing");
  return check.ok;
}

// --------------------------------------------------------------- criterion 3

bool criterion_getuser_semantics(Check & check)
{
  auto mod = load("getuser.tea", check);
  if (!check.ok) return false;

  auto exchange = build_request(mod, "getUser", {{"username", Json("jack")}});
  check.expect(exchange.request.method == "GET", "method != GET");
  check.expect(exchange.request.pathname == "/users/jack", "pathname != /users/jack");
  check.expect(exchange.request.headers.count("host") == 1 &&
                 exchange.request.headers.at("host") == "hostname",
    "host header != hostname");

  MockTransport transport;
  transport.add_rule({"GET", "/users/jack",
    {200, "OK", {}, R"({"username":"jack","age":30})"}});
  Json result = invoke(mod, "getUser", {{"username", Json("jack")}}, transport);
  check.expect(result == Json{{"username", "jack"}, {"age", 30}}, "decoded User differs");

  MockTransport young;
  young.add_rule({"", "", {200, "OK", {}, R"({"username":"jack","age":17})"}});
  bool min_violation = false;
  try {
    invoke(mod, "getUser", {{"username", Json("jack")}}, young);
  } catch (const ValidationFailed & e) {
    min_violation = e.report.violations.size() == 1 &&
                    e.report.violations[0].field_path == "age" &&
                    e.report.violations[0].rule == ViolationRule::Min;
  }
  check.expect(min_violation, "age 17 did not trip the min=18 constraint");
  return check.ok;
}

// --------------------------------------------------------------- criterion 4

// Runs one scenario against the interpreter and returns the comparable tuple.
Json run_native(const SemanticModule & mod, const std::string & api, const Json & args_array,
  const Json & rules)
{
  MockTransport transport = MockTransport::from_json(rules);
  std::map<std::string, Json> args;
  const ApiDecl & decl = *mod.apis.at(api);
  for (std::size_t i = 0; i < decl.params.size(); ++i) {
    args[decl.params[i].name] = args_array.at(i);
  }
  RuntimeConfig config;
  config.backoff_ms = 0;
  Json out{{"result", nullptr}, {"error", nullptr}};
  try {
    out["result"] = invoke(mod, api, args, transport, BehaviorRegistry::with_defaults(), config);
  } catch (const ValidationFailed &) {
    out["error"] = "validation";
  } catch (const TransportError &) {
    out["error"] = "transport";
  } catch (const EvalError &) {
    out["error"] = "eval";
  }
  if (transport.requests().empty()) {
    out["request"] = nullptr;
  } else {
    const auto & seen = transport.requests().back();
    out["request"] =
      Json{{"method", seen.method}, {"pathname", seen.pathname}, {"headers", seen.headers}};
  }
  out["calls"] = transport.call_count();
  return out;
}

Json run_generated(const fs::path & sdk_dir, const fs::path & rules_file,
  const std::string & api_snake, const Json & args_array)
{
  fs::path out_file = sdk_dir / "driver_out.json";
  std::string cmd = "python3 " + fixture("driver.py") + " " + sdk_dir.string() +
                    " " + rules_file.string() + " " + api_snake + " '" + args_array.dump() +
                    "' > " + out_file.string();
  int status = std::system(cmd.c_str());
  if (status != 0) throw std::runtime_error("driver failed for " + api_snake);
  return Json::parse(read_file(out_file.string()));
}

bool criterion_differential_codegen(Check & check)
{
  const char * modules[] = {"getuser.tea", "echo.tea", "status.tea", "concat.tea",
    "defaults.tea", "behavior.tea", "maps.tea", "nested.tea", "logic.tea", "arrays.tea",
    "port.tea"};
  auto start = std::chrono::steady_clock::now();
  int scenarios_run = 0;
  const EmitterTarget & python = *find_target("python");
  fs::path work = fs::temp_directory_path() / "teaforge_acceptance_diff";
  fs::remove_all(work);
  for (const char * name : modules) {
    Check load_check;
    auto mod = load(name, load_check);
    check.expect(load_check.ok, std::string(name) + ": " + load_check.why.str());
    if (!load_check.ok) continue;

    fs::path sdk_dir = work / fs::path(name).stem();
    write_fileset(emit(mod, python), sdk_dir.string());

    Json scenarios =
      Json::parse(read_file(fixture(fs::path(name).stem().string() + ".scenarios.json")));
    check.expect(scenarios.size() >= 3, std::string(name) + ": fewer than 3 scenarios");
    for (const auto & scenario : scenarios) {
      ++scenarios_run;
      std::string api = scenario.at("api").get<std::string>();
      std::string label = std::string(name) + "/" + scenario.at("name").get<std::string>();
      fs::path rules_file = sdk_dir / "rules.json";
      std::ofstream(rules_file) << scenario.at("rules").dump();
      Json native = run_native(mod, api, scenario.at("args"), scenario.at("rules"));
      Json generated = run_generated(sdk_dir, rules_file,
        apply_style(api, IdentifierStyle::SnakeCase), scenario.at("args"));
      check.expect(native == generated,
        label + ": native " + native.dump() + " vs generated " + generated.dump());
    }
  }
  fs::remove_all(work);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  check.expect(scenarios_run >= 33, "expected at least 33 scenarios");
  check.expect(elapsed.count() < 60.0, "suite took " + std::to_string(elapsed.count()) + "s");
  return check.ok;
}

// --------------------------------------------------------------- criterion 5

bool criterion_table_shape(Check & check)
{
  // 100 paired DescribeInstances failures: 21 with an extra InstanceIds,
  // 14 with a changed InstanceIds, 11 with a changed RegionId, the rest
  // identical to their paired success.
  std::vector<an::CallRecord> records;
  const Json base{{"RegionId", "cn-hangzhou"}};
  for (int i = 0; i < 100; ++i) {
    std::int64_t t = 10000LL * i;
    Json success = base;
    Json failure = base;
    std::string code = "InvalidParameter";
    if (i < 21) {
      failure["InstanceIds"] = "i-extra";
    } else if (i < 35) {
      success["InstanceIds"] = "i-a";
      failure["InstanceIds"] = "i-b";
    } else if (i < 46) {
      failure["RegionId"] = "eu-west-1";
    } else {
      code = "Throttling";
    }
    records.push_back({t, "u", "DescribeInstances", success, true, std::nullopt});
    records.push_back({t + 1, "u", "DescribeInstances", failure, false, code});
  }
  auto tables = an::pair_and_aggregate(records);
  const an::ParamErrorTable & table = tables.at("DescribeInstances");
  check.expect(table.paired_failed_calls == 100, "expected 100 paired failures");

  auto rate_of = [&](const std::string & code, const std::string & note) {
    for (const auto & row : table.rows) {
      if (row.error_code == code && row.annotation == note) return row.rate;
    }
    return -1.0;
  };
  double plus = rate_of("InvalidParameter", "+InstanceIds");
  double changed = rate_of("InvalidParameter", "InstanceIds");
  double region = rate_of("InvalidParameter", "RegionId");
  check.expect(std::abs(plus - 0.21) <= 0.005, "+InstanceIds rate " + std::to_string(plus));
  check.expect(std::abs(changed - 0.14) <= 0.005, "InstanceIds rate " + std::to_string(changed));
  check.expect(std::abs(region - 0.11) <= 0.005, "RegionId rate " + std::to_string(region));
  check.expect(std::abs(plus + changed - 0.35) <= 0.01,
    "InstanceIds rows sum to " + std::to_string(plus + changed));
  return check.ok;
}

// --------------------------------------------------------------- criterion 6

bool criterion_quadrant_properties(Check & check)
{
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::tuple<std::string, double, double>> input;
  for (int i = 0; i < 1000; ++i) {
    input.emplace_back("api" + std::to_string(i), unit(rng), unit(rng));
  }
  auto points = an::quadrant(input);
  check.expect(points.size() == 1000, "point count");

  int mismatches = 0;
  int last_q3_rank = 0;
  int first_q4_rank = 1 << 30;
  for (const auto & p : points) {
    an::Quadrant want;
    if (p.coverage >= 0.5 && p.success_rate >= 0.5) want = an::Quadrant::Q1;
    else if (p.coverage < 0.5 && p.success_rate >= 0.5) want = an::Quadrant::Q2;
    else if (p.coverage < 0.5) want = an::Quadrant::Q3;
    else want = an::Quadrant::Q4;
    if (p.quadrant != want) ++mismatches;
    if (p.quadrant == an::Quadrant::Q3) last_q3_rank = std::max(last_q3_rank, p.rank);
    if (p.quadrant == an::Quadrant::Q4) first_q4_rank = std::min(first_q4_rank, p.rank);
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
  check.expect(last_q3_rank < first_q4_rank, "a Q4 point outranks a Q3 point");
  return check.ok;
}

// --------------------------------------------------------------- criterion 7

Json random_value(std::mt19937 & rng, int depth)
{
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 2);
  std::uniform_int_distribution<int> small(0, 3);
  switch (pick(rng)) {
    case 0: return Json(small(rng));
    case 1: return Json(std::string(1, static_cast<char>('a' + small(rng))));
    case 2: return Json(small(rng) % 2 == 0);
    case 3: {
      Json obj = Json::object();
      int n = small(rng);
      for (int i = 0; i < n; ++i) obj["k" + std::to_string(i)] = random_value(rng, depth - 1);
      return obj;
    }
    case 4: {
      Json arr = Json::array();
      int n = small(rng);
      for (int i = 0; i < n; ++i) arr.push_back(random_value(rng, depth - 1));
      return arr;
    }
    default: {
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
  for (int i = 0; i < count; ++i) params["p" + std::to_string(i)] = random_value(rng, 3);
  return params;
}

bool criterion_property_suites(Check & check)
{
  // flatten/diff reflexivity + antisymmetry, 10,000 random nested values
  std::mt19937 rng(31337);
  int reflexivity_failures = 0;
  int antisymmetry_failures = 0;
  std::vector<Json> values;
  values.reserve(10000);
  for (int i = 0; i < 10000; ++i) values.push_back(random_params(rng));
  for (const auto & v : values) {
    if (!an::diff(an::flatten(v), an::flatten(v)).empty()) ++reflexivity_failures;
  }
  for (int i = 0; i + 1 < 10000; i += 2) {
    auto fa = an::flatten(values[i]);
    auto fb = an::flatten(values[i + 1]);
    auto forward = an::diff(fa, fb);
    auto backward = an::diff(fb, fa);
    for (auto & s : forward) {
      if (s[0] == '-') s[0] = '+';
      else if (s[0] == '+') s[0] = '-';
    }
    std::sort(forward.begin(), forward.end());
    std::sort(backward.begin(), backward.end());
    if (forward != backward) ++antisymmetry_failures;
  }
  check.expect(reflexivity_failures == 0,
    std::to_string(reflexivity_failures) + " reflexivity failures");
  check.expect(antisymmetry_failures == 0,
    std::to_string(antisymmetry_failures) + " antisymmetry failures");

  // tokenize fuzz: 10,000 inputs, no aborts
  std::uniform_int_distribution<int> len(0, 80);
  std::uniform_int_distribution<int> byte(0, 255);
  const std::string seeds = "model api type returns var {}()=:;,'`${}\\ \n1x@";
  std::uniform_int_distribution<int> pick(0, static_cast<int>(seeds.size()) - 1);
  int fuzz_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) {
      s += (i % 3 == 0) ? static_cast<char>(byte(rng)) : seeds[pick(rng)];
    }
    try {
      auto tokens = tokenize(s);
      if (tokens.empty() || tokens.back().kind != TokenKind::Eof) ++fuzz_failures;
    } catch (const LexError &) {
      // a diagnosed rejection is fine
    } catch (...) {
      ++fuzz_failures;
    }
  }
  check.expect(fuzz_failures == 0, std::to_string(fuzz_failures) + " tokenizer fuzz failures");

  // emit determinism: byte-identical filesets across runs, both targets
  {
    Check load_check;
    auto mod = load("getuser.tea", load_check);
    check.expect(load_check.ok, load_check.why.str());
    if (load_check.ok) {
      for (const auto & target : list_targets()) {
        check.expect(emit(mod, target) == emit(mod, target),
          target.target_id + " emission is not deterministic");
      }
    }
  }

  // retry exactness
  {
    Check load_check;
    auto mod = load("defaults.tea", load_check);
    check.expect(load_check.ok, load_check.why.str());
    if (load_check.ok) {
      for (int retries : {0, 1, 2, 5}) {
        FailingTransport transport;
        RuntimeConfig config;
        config.retry_times = retries;
        config.backoff_ms = 0;
        int attempts = 0;
        try {
          invoke(mod, "bare", {}, transport, BehaviorRegistry::with_defaults(), config);
        } catch (const TransportError & e) {
          attempts = e.attempts;
        }
        check.expect(attempts == retries + 1 && transport.call_count() == retries + 1,
          "retry_times=" + std::to_string(retries) + " sent " +
            std::to_string(transport.call_count()) + " requests");
      }
    }
  }
  return check.ok;
}

}  // namespace

int main()
{
  struct Criterion
  {
    const char * name;
    bool (*run)(Check &);
  };
  const Criterion criteria[] = {
    {"diff reproduction of the running example", criterion_diff_reproduction},
    {"reference listings compile", criterion_listings_compile},
    {"getUser request semantics", criterion_getuser_semantics},
    {"differential codegen agreement", criterion_differential_codegen},
    {"error-rate table shape on synthetic data", criterion_table_shape},
    {"quadrant classification properties", criterion_quadrant_properties},
    {"property suites", criterion_property_suites},
  };

  int failures = 0;
  int index = 0;
  for (const auto & criterion : criteria) {
    ++index;
    Check check;
    bool ok = false;
    try {
      ok = criterion.run(check);
    } catch (const std::exception & e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    if (ok) {
      std::cout << "PASS criterion " << index << ": " << criterion.name << "\n";
    } else {
      std::cout << "FAIL criterion " << index << ": " << criterion.name << " ("
                << check.why.str() << ")\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
