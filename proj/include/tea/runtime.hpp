// runtime.hpp - api-block interpreter over a pluggable transport
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tea/semantics.hpp"

namespace tea
{

// ============================================================================
// The abstract gateway record
// ============================================================================

struct HttpRequest
{
  std::string method = "GET";
  std::string pathname;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;
  std::string body;  // readable, read-to-end semantics

  bool operator==(const HttpRequest &) const = default;
};

struct HttpResponse
{
  int status_code = 0;
  std::string status_message;
  std::map<std::string, std::string> headers;
  std::string body;

  bool operator==(const HttpResponse &) const = default;
};

struct HttpExchange
{
  std::string protocol = "https";  // "http" | "https"
  int port = 443;
  std::string host;
  HttpRequest request;
  HttpResponse response;

  bool operator==(const HttpExchange &) const = default;
};

struct RuntimeConfig
{
  int retry_times = 0;
  int backoff_ms = 100;
  int timeout_ms = 30000;
  std::string default_protocol = "https";
  int default_port = 443;
};

// ============================================================================
// Errors
// ============================================================================

struct TransportError : std::runtime_error
{
  int attempts = 1;
  explicit TransportError(const std::string & message, int attempt_count = 1)
  : std::runtime_error(message), attempts(attempt_count)
  {
  }
};

struct EvalError : std::runtime_error
{
  Span span;
  EvalError(const std::string & message, Span s = {}) : std::runtime_error(message), span(s) {}
};

struct ValidationFailed : std::runtime_error
{
  ValidationReport report;
  ValidationFailed(const std::string & context, ValidationReport r)
  : std::runtime_error(context + ": " + summarize(r)), report(std::move(r))
  {
  }

private:
  static std::string summarize(const ValidationReport & r);
};

// ============================================================================
// Pluggable pieces
// ============================================================================

class Transport
{
public:
  virtual ~Transport() = default;
  // Must not mutate the request half of the exchange.
  virtual HttpResponse send(const HttpExchange & exchange, int timeout_ms) = 0;
};

using BehaviorFn = std::function<Json(const std::vector<Json> &)>;

class BehaviorRegistry
{
public:
  // toJSONString and parseJSON come pre-bound.
  static BehaviorRegistry with_defaults();

  void bind(const std::string & name, BehaviorFn fn) { bindings_[name] = std::move(fn); }
  const BehaviorFn * find(const std::string & name) const;

private:
  std::map<std::string, BehaviorFn> bindings_;
};

// ============================================================================
// Evaluation
// ============================================================================

struct EvalEnv
{
  std::map<std::string, Json> vars;
  const HttpExchange * exchange = nullptr;   // __request reads
  const HttpResponse * response = nullptr;   // __response reads
  const BehaviorRegistry * behaviors = nullptr;
};

Json eval_expr(const Expr & expr, EvalEnv & env);

// Executes only the request block; no transport I/O. Model-typed arguments
// are validated first.
HttpExchange build_request(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, const RuntimeConfig & config = {},
  const BehaviorRegistry & registry = BehaviorRegistry::with_defaults());

// Full invocation: build, send with fixed-backoff retries, bind __response,
// evaluate the returns block, validate a model-typed result.
Json invoke(const SemanticModule & module, const std::string & api,
  const std::map<std::string, Json> & args, Transport & transport,
  const BehaviorRegistry & registry = BehaviorRegistry::with_defaults(),
  const RuntimeConfig & config = {});

}  // namespace tea
