// diagnostic.hpp - diagnostics shared by parser and semantic analysis
#pragma once

#include <string>
#include <vector>

#include "tea/source.hpp"

namespace tea
{

enum class Severity
{
  Error,
  Warning,
};

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  Span span;
};

// Renders `file:line:col: severity[CODE]: message`.
std::string render(const Diagnostic & d, const std::string & filename);

inline bool has_errors(const std::vector<Diagnostic> & diags)
{
  for (const auto & d : diags) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

}  // namespace tea
