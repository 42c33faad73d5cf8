// tea.cpp - command-line entry point for the toolchain
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tea/analyzer.hpp"
#include "tea/ast_dump.hpp"
#include "tea/codegen.hpp"
#include "tea/mock_transport.hpp"
#include "tea/parser.hpp"
#include "tea/runtime.hpp"
#include "tea/semantics.hpp"

namespace
{

namespace fs = std::filesystem;
using tea::Json;

// Exit code contract: 0 success, 1 diagnostics/validation failure,
// 2 usage error, 3 I/O error.
constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct IoError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

bool use_color()
{
  const char * env = std::getenv("TEAFORGE_COLOR");
  return env != nullptr && std::string(env) == "1";
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string & path)
{
  std::string text = read_file(path);
  Json v = Json::parse(text, nullptr, false);
  if (v.is_discarded()) throw IoError("invalid JSON in " + path);
  return v;
}

void print_diagnostics(const std::vector<tea::Diagnostic> & diags, const std::string & file)
{
  for (const auto & d : diags) {
    std::string text = tea::render(d, file);
    if (use_color()) {
      const char * color = d.severity == tea::Severity::Error ? "\x1b[31m" : "\x1b[33m";
      std::cerr << color << text << "\x1b[0m\n";
    } else {
      std::cerr << text << "\n";
    }
  }
}

// Parse + analyze, printing diagnostics. Returns nullopt when errors exist.
std::optional<tea::SemanticModule> compile(const std::string & path)
{
  std::string source = read_file(path);
  tea::ParseResult parsed = tea::parse_source(source);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, path);
    return std::nullopt;
  }
  tea::SemanticModule module = tea::analyze(std::move(parsed.tree));
  print_diagnostics(module.diagnostics, path);
  if (!module.valid()) return std::nullopt;
  return module;
}

std::map<std::string, Json> parse_args_json(const std::string & text)
{
  Json v = Json::parse(text, nullptr, false);
  if (v.is_discarded() || !v.is_object()) {
    throw CLI::ValidationError("--args", "must be a JSON object");
  }
  std::map<std::string, Json> args;
  for (const auto & [key, value] : v.items()) args[key] = value;
  return args;
}

std::string format_rate(double rate)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", rate);
  return buf;
}

// ----------------------------------------------------------------- commands

int cmd_check(const std::string & file)
{
  return compile(file) ? kOk : kDiagnostics;
}

int cmd_ast(const std::string & file)
{
  std::string source = read_file(file);
  tea::ParseResult parsed = tea::parse_source(source);
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics, file);
    return kDiagnostics;
  }
  std::cout << tea::dump_ast(parsed.tree);
  return kOk;
}

int cmd_gen(const std::string & file, const std::string & target_id, const std::string & out_dir)
{
  auto module = compile(file);
  if (!module) return kDiagnostics;
  const tea::EmitterTarget * target = tea::find_target(target_id);
  if (target == nullptr) throw CLI::ValidationError("--target", "unknown target " + target_id);
  tea::FileSet files = tea::emit(*module, *target);
  tea::write_fileset(files, out_dir);
  for (const auto & [path, text] : files) std::cout << path << "\n";
  return kOk;
}

int cmd_sample(const std::string & file, const std::string & api, const std::string & args_text,
  const std::string & target_id)
{
  auto module = compile(file);
  if (!module) return kDiagnostics;
  const tea::EmitterTarget * target = tea::find_target(target_id);
  if (target == nullptr) throw CLI::ValidationError("--target", "unknown target " + target_id);
  std::cout << tea::emit_code_sample(*module, api, parse_args_json(args_text), *target);
  return kOk;
}

int cmd_invoke(const std::string & file, const std::string & api, const std::string & args_text,
  const std::string & mock_path, int retries)
{
  auto module = compile(file);
  if (!module) return kDiagnostics;
  if (!fs::exists(mock_path)) throw IoError("cannot open mock fixture: " + mock_path);
  tea::MockTransport transport = tea::MockTransport::from_file(mock_path);
  tea::RuntimeConfig config;
  config.retry_times = retries;
  config.backoff_ms = 0;
  try {
    Json result = tea::invoke(*module, api, parse_args_json(args_text), transport,
      tea::BehaviorRegistry::with_defaults(), config);
    std::cout << result.dump(2) << "\n";
    return kOk;
  } catch (const tea::ValidationFailed & e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kDiagnostics;
  } catch (const tea::TransportError & e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kDiagnostics;
  } catch (const tea::EvalError & e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kDiagnostics;
  }
}

int cmd_analyze_diff(const std::string & correct_path, const std::string & wrong_path,
  bool json_format)
{
  namespace an = tea::analytics;
  an::DiffReport report =
    an::diff(an::flatten(read_json_file(correct_path)), an::flatten(read_json_file(wrong_path)));
  if (json_format) {
    std::cout << Json(report).dump(2) << "\n";
  } else {
    for (const auto & annotation : report) std::cout << annotation << "\n";
  }
  return kOk;
}

int cmd_analyze_logs(const std::string & log_path, const std::string & api_filter,
  bool json_format)
{
  namespace an = tea::analytics;
  if (!fs::exists(log_path)) throw IoError("cannot open call log: " + log_path);
  int malformed = 0;
  auto records = an::read_call_log(log_path, &malformed,
    [](int linenum, const std::string &) {
      std::cerr << "warning: skipping malformed record at line " << linenum << "\n";
    });
  auto tables = an::pair_and_aggregate(records);
  if (json_format) {
    Json out = Json::object();
    for (const auto & [api, table] : tables) {
      if (!api_filter.empty() && api != api_filter) continue;
      Json rows = Json::array();
      for (const auto & row : table.rows) {
        rows.push_back({{"error_code", row.error_code}, {"annotation", row.annotation},
          {"rate", row.rate}, {"count", row.count}});
      }
      out[api] = {{"rows", rows}, {"failed_calls", table.failed_calls},
        {"paired_failed_calls", table.paired_failed_calls},
        {"unpaired_failed_calls", table.unpaired_failed_calls}};
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "api,error_code,annotation,rate,count\n";
    for (const auto & [api, table] : tables) {
      if (!api_filter.empty() && api != api_filter) continue;
      for (const auto & row : table.rows) {
        std::cout << api << "," << row.error_code << "," << row.annotation << ","
                  << format_rate(row.rate) << "," << row.count << "\n";
      }
    }
  }
  return kOk;
}

int cmd_analyze_quadrant(const std::string & docs_dir, const std::string & log_path, double x0,
  double y0, bool json_format)
{
  namespace an = tea::analytics;
  std::map<std::string, double> coverage;
  if (!fs::is_directory(docs_dir)) throw IoError("not a directory: " + docs_dir);
  for (const auto & entry : fs::directory_iterator(docs_dir)) {
    if (entry.path().extension() != ".json") continue;
    an::ApiDocSpec spec = an::parse_doc_spec(read_json_file(entry.path().string()));
    coverage[spec.api] = an::coverage_rate(spec);
  }
  if (!fs::exists(log_path)) throw IoError("cannot open call log: " + log_path);
  auto records = an::read_call_log(log_path);
  std::map<std::string, std::pair<int, int>> calls;  // api -> (success, total)
  for (const auto & r : records) {
    auto & [ok, total] = calls[r.api];
    if (r.success) ++ok;
    ++total;
  }
  std::vector<std::tuple<std::string, double, double>> points;
  for (const auto & [api, cov] : coverage) {
    auto it = calls.find(api);
    if (it == calls.end()) continue;  // no traffic, no success rate
    double success = static_cast<double>(it->second.first) / it->second.second;
    points.emplace_back(api, cov, success);
  }
  auto ranked = an::quadrant(points, x0, y0);
  if (json_format) {
    Json out = Json::array();
    for (const auto & p : ranked) {
      out.push_back({{"api", p.api}, {"coverage", p.coverage},
        {"success_rate", p.success_rate}, {"quadrant", an::to_string(p.quadrant)},
        {"rank", p.rank}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "api,coverage,success_rate,quadrant,rank\n";
    for (const auto & p : ranked) {
      std::cout << p.api << "," << format_rate(p.coverage) << ","
                << format_rate(p.success_rate) << "," << an::to_string(p.quadrant) << ","
                << p.rank << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"TeaDSL toolchain: compile gateway definitions, generate SDKs, analyze call logs"};
  app.require_subcommand(1);

  std::string file;
  std::string api;
  std::string args_text = "{}";
  std::string target_id = "python";
  std::string out_dir;
  std::string mock_path;
  std::string correct_path;
  std::string wrong_path;
  std::string log_path;
  std::string docs_dir;
  std::string api_filter;
  bool json_format = false;
  int retries = 0;
  double x0 = 0.5;
  double y0 = 0.5;

  auto * check = app.add_subcommand("check", "Type-check a .tea file");
  check->add_option("file", file)->required();

  auto * ast = app.add_subcommand("ast", "Dump the syntax tree");
  ast->add_option("file", file)->required();

  auto * gen = app.add_subcommand("gen", "Generate SDK source for a target");
  gen->add_option("file", file)->required();
  gen->add_option("--target", target_id)->required();
  gen->add_option("--out", out_dir)->required();

  auto * sample = app.add_subcommand("sample", "Emit a documentation code sample");
  sample->add_option("file", file)->required();
  sample->add_option("--api", api)->required();
  sample->add_option("--args", args_text);
  sample->add_option("--target", target_id);

  auto * invoke = app.add_subcommand("invoke", "Invoke an api against a mock transport");
  invoke->add_option("file", file)->required();
  invoke->add_option("--api", api)->required();
  invoke->add_option("--args", args_text);
  invoke->add_option("--mock", mock_path)->required();
  invoke->add_option("--retries", retries);

  auto * analyze = app.add_subcommand("analyze", "Call-log analytics");
  analyze->require_subcommand(1);
  auto * adiff = analyze->add_subcommand("diff", "Diff two request bodies");
  adiff->add_option("--correct", correct_path)->required();
  adiff->add_option("--wrong", wrong_path)->required();
  auto * alogs = analyze->add_subcommand("logs", "Per-parameter error rates from a JSONL log");
  alogs->add_option("log", log_path)->required();
  alogs->add_option("--api", api_filter);
  auto * aquad = analyze->add_subcommand("quadrant", "Governance quadrants from docs and logs");
  aquad->add_option("--docs", docs_dir)->required();
  aquad->add_option("--logs", log_path)->required();
  aquad->add_option("--x0", x0)->check(CLI::Range(0.0, 1.0));
  aquad->add_option("--y0", y0)->check(CLI::Range(0.0, 1.0));

  for (CLI::App * sub : {adiff, alogs, aquad}) {
    sub->add_option("--format", "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->each([&](const std::string & v) { json_format = v == "json"; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(file);
    if (ast->parsed()) return cmd_ast(file);
    if (gen->parsed()) return cmd_gen(file, target_id, out_dir);
    if (sample->parsed()) return cmd_sample(file, api, args_text, target_id);
    if (invoke->parsed()) return cmd_invoke(file, api, args_text, mock_path, retries);
    if (adiff->parsed()) return cmd_analyze_diff(correct_path, wrong_path, json_format);
    if (alogs->parsed()) return cmd_analyze_logs(log_path, api_filter, json_format);
    if (aquad->parsed()) return cmd_analyze_quadrant(docs_dir, log_path, x0, y0, json_format);
  } catch (const IoError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const CLI::ValidationError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDiagnostics;
  }
  return kUsage;
}
