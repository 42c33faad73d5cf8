// source.hpp - source positions and spans shared by the whole frontend
#pragma once

#include <cstddef>
#include <string>

namespace tea
{

// 1-based line/column, 0-based byte offset. byte_offset == source.size() marks EOF.
struct SourcePos
{
  int line = 1;
  int column = 1;
  std::size_t byte_offset = 0;

  bool operator==(const SourcePos &) const = default;
};

struct Span
{
  SourcePos begin;
  SourcePos end;

  bool operator==(const Span &) const = default;
};

inline std::string to_string(const SourcePos & p)
{
  return std::to_string(p.line) + ":" + std::to_string(p.column);
}

}  // namespace tea
