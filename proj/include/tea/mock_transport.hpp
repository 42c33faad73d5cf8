// mock_transport.hpp - fixture-driven transport for tests and the CLI
#pragma once

#include <string>
#include <vector>

#include "tea/runtime.hpp"

namespace tea
{

// Rule list, first-match-wins. Fixture JSON format:
//   [{"match": {"method": "GET", "pathname": "/users/jack"},
//     "respond": {"statusCode": 200, "headers": {...}, "body": "..."}}]
// Omitted match keys match anything. A "body" given as a JSON object/array is
// serialized into the response body text.
class MockTransport : public Transport
{
public:
  struct Rule
  {
    std::string method;    // empty = any
    std::string pathname;  // empty = any
    HttpResponse response;
  };

  struct SeenRequest
  {
    std::string method;
    std::string pathname;
    std::map<std::string, std::string> headers;
  };

  MockTransport() = default;
  static MockTransport from_json(const Json & fixture);
  static MockTransport from_file(const std::string & path);

  void add_rule(Rule rule) { rules_.push_back(std::move(rule)); }

  HttpResponse send(const HttpExchange & exchange, int timeout_ms) override;

  int call_count() const { return call_count_; }
  const std::vector<SeenRequest> & requests() const { return requests_; }

private:
  std::vector<Rule> rules_;
  std::vector<SeenRequest> requests_;
  int call_count_ = 0;
};

// Fails every send; used to exercise the retry path.
class FailingTransport : public Transport
{
public:
  HttpResponse send(const HttpExchange &, int) override
  {
    ++call_count_;
    throw TransportError("connection refused");
  }
  int call_count() const { return call_count_; }

private:
  int call_count_ = 0;
};

}  // namespace tea
