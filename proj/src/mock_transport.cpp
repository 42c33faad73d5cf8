// mock_transport.cpp
#include "tea/mock_transport.hpp"

#include <fstream>

namespace tea
{

MockTransport MockTransport::from_json(const Json & fixture)
{
  MockTransport transport;
  if (!fixture.is_array()) throw std::runtime_error("mock fixture must be a JSON array");
  for (const auto & entry : fixture) {
    Rule rule;
    if (entry.contains("match")) {
      const Json & match = entry["match"];
      rule.method = match.value("method", "");
      rule.pathname = match.value("pathname", "");
    }
    const Json & respond = entry.at("respond");
    rule.response.status_code = respond.value("statusCode", 200);
    rule.response.status_message = respond.value("statusMessage", "");
    if (respond.contains("headers")) {
      for (const auto & [k, v] : respond["headers"].items()) {
        rule.response.headers[k] = v.get<std::string>();
      }
    }
    if (respond.contains("body")) {
      const Json & body = respond["body"];
      rule.response.body = body.is_string() ? body.get<std::string>() : body.dump();
    }
    transport.add_rule(std::move(rule));
  }
  return transport;
}

MockTransport MockTransport::from_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mock fixture: " + path);
  Json fixture = Json::parse(in);
  return from_json(fixture);
}

HttpResponse MockTransport::send(const HttpExchange & exchange, int /*timeout_ms*/)
{
  ++call_count_;
  requests_.push_back(
    {exchange.request.method, exchange.request.pathname, exchange.request.headers});
  for (const auto & rule : rules_) {
    if (!rule.method.empty() && rule.method != exchange.request.method) continue;
    if (!rule.pathname.empty() && rule.pathname != exchange.request.pathname) continue;
    return rule.response;
  }
  throw TransportError("no mock rule matches " + exchange.request.method + " " +
                       exchange.request.pathname);
}

}  // namespace tea
