// analyzer.hpp - call-log analytics: parameter flattening, diffing,
// per-parameter error rates, and quadrant governance
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "tea/semantics.hpp"

namespace tea::analytics
{

using tea::Json;

// ============================================================================
// Records and reports
// ============================================================================

struct CallRecord
{
  std::int64_t timestamp_ms = 0;
  std::string user_id;
  std::string api;
  Json params;
  bool success = false;
  std::optional<std::string> error_code;  // present iff !success
};

// Dotted-path -> scalar rendering. Parent container keys are kept alongside
// their flattened children.
using FlatParamMap = std::map<std::string, std::string>;

// Annotations: "-path" missing from the wrong call, "+path" extra in the
// wrong call, bare "path" value differs.
using DiffReport = std::vector<std::string>;

struct ParamErrorRow
{
  std::string error_code;
  std::string annotation;
  double rate = 0;
  int count = 0;
};

struct ParamErrorTable
{
  std::vector<ParamErrorRow> rows;  // sorted by rate descending
  int failed_calls = 0;
  int paired_failed_calls = 0;
  int unpaired_failed_calls = 0;
  int malformed_records = 0;
};

struct ApiDocParam
{
  std::string name;
  std::string type;
  bool required = false;
  std::string description;
  std::string example;
};

struct ApiDocSpec
{
  std::string api;
  std::vector<ApiDocParam> parameters;
};

enum class Quadrant
{
  Q1,  // high coverage, high success
  Q2,  // low coverage, high success
  Q3,  // low coverage, low success — govern first
  Q4,  // high coverage, low success
};

const char * to_string(Quadrant q);

struct QuadrantPoint
{
  std::string api;
  double coverage = 0;
  double success_rate = 0;
  Quadrant quadrant = Quadrant::Q1;
  int rank = 0;  // lower = optimize first
};

struct RangeError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct EmptySpec : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// ============================================================================
// Operations
// ============================================================================

// Splits parameters to the finest granularity: nested objects become dotted
// paths, arrays use zero-based numeric segments, and string values that parse
// as JSON objects/arrays are flattened beneath their key while the parent
// entry is retained.
FlatParamMap flatten(const Json & params);

// "-key" only in correct, "+key" only in wrong, bare key for differing
// values; equal entries omitted. Ordering: all "-", then "+", then bare,
// each group lexicographic.
DiffReport diff(const FlatParamMap & correct, const FlatParamMap & wrong);

struct PairingOptions
{
  std::int64_t window_ms = 24LL * 60 * 60 * 1000;
};

// Pairs each failed call with the nearest-in-time success of the same
// (user, api) — forward first, then backward, within the window — diffs the
// pair and tallies (error_code, annotation) rates over paired failures.
std::map<std::string, ParamErrorTable> pair_and_aggregate(
  const std::vector<CallRecord> & records, const PairingOptions & options = {});

// Parses a JSONL call log (gzip accepted). Malformed lines are skipped and
// counted; their line numbers are reported through on_malformed when given.
std::vector<CallRecord> read_call_log(const std::string & path,
  int * malformed_count = nullptr,
  const std::function<void(int, const std::string &)> & on_malformed = {});

std::vector<QuadrantPoint> quadrant(
  const std::vector<std::tuple<std::string, double, double>> & points, double x0 = 0.5,
  double y0 = 0.5);

// Fraction of parameter rows having both a non-empty description and a
// non-empty example.
double coverage_rate(const ApiDocSpec & doc);

ApiDocSpec parse_doc_spec(const Json & doc);

}  // namespace tea::analytics
