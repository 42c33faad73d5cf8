// analyzer.cpp - parameter-granularity error analytics
#include "tea/analyzer.hpp"

#include <algorithm>
#include <fstream>

#include <zlib.h>

namespace tea::analytics
{

const char * to_string(Quadrant q)
{
  switch (q) {
    case Quadrant::Q1: return "Q1";
    case Quadrant::Q2: return "Q2";
    case Quadrant::Q3: return "Q3";
    case Quadrant::Q4: return "Q4";
  }
  return "?";
}

// ------------------------------------------------------------------- flatten

namespace
{

std::string scalar_text(const Json & v)
{
  if (v.is_string()) return v.get<std::string>();
  return v.dump();  // numbers, true/false, null
}

void flatten_into(const Json & value, const std::string & prefix, FlatParamMap & out)
{
  auto child_key = [&](const std::string & segment) {
    return prefix.empty() ? segment : prefix + "." + segment;
  };
  if (value.is_object()) {
    if (!prefix.empty()) out[prefix] = value.dump();
    for (const auto & [key, item] : value.items()) flatten_into(item, child_key(key), out);
    return;
  }
  if (value.is_array()) {
    if (!prefix.empty()) out[prefix] = value.dump();
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten_into(value[i], child_key(std::to_string(i)), out);
    }
    return;
  }
  if (value.is_string()) {
    // A string payload that itself parses as JSON structure is split further;
    // the parent keeps the original string rendering.
    const std::string & text = value.get<std::string>();
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
      Json parsed = Json::parse(text, nullptr, false);
      if (!parsed.is_discarded() && (parsed.is_object() || parsed.is_array())) {
        out[prefix] = text;
        for (const auto & [key, item] : parsed.items()) {
          flatten_into(item, child_key(key), out);
        }
        return;
      }
    }
    out[prefix] = text;
    return;
  }
  out[prefix] = scalar_text(value);
}

}  // namespace

FlatParamMap flatten(const Json & params)
{
  FlatParamMap out;
  if (params.is_object()) {
    for (const auto & [key, item] : params.items()) flatten_into(item, key, out);
  } else {
    flatten_into(params, "", out);
  }
  return out;
}

// ---------------------------------------------------------------------- diff

DiffReport diff(const FlatParamMap & correct, const FlatParamMap & wrong)
{
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  std::vector<std::string> changed;
  for (const auto & [key, value] : correct) {
    auto it = wrong.find(key);
    if (it == wrong.end()) {
      missing.push_back("-" + key);
    } else if (it->second != value) {
      changed.push_back(key);
    }
  }
  for (const auto & [key, value] : wrong) {
    if (!correct.count(key)) extra.push_back("+" + key);
  }
  // maps iterate sorted, so each group is already lexicographic
  DiffReport report;
  report.insert(report.end(), missing.begin(), missing.end());
  report.insert(report.end(), extra.begin(), extra.end());
  report.insert(report.end(), changed.begin(), changed.end());
  return report;
}

// ----------------------------------------------------------------- aggregate

std::map<std::string, ParamErrorTable> pair_and_aggregate(
  const std::vector<CallRecord> & records, const PairingOptions & options)
{
  struct Group
  {
    std::vector<const CallRecord *> successes;  // sorted by timestamp
    std::vector<const CallRecord *> failures;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (const auto & r : records) {
    Group & g = groups[{r.user_id, r.api}];
    (r.success ? g.successes : g.failures).push_back(&r);
  }

  std::map<std::string, ParamErrorTable> tables;
  std::map<std::string, std::map<std::pair<std::string, std::string>, int>> tallies;

  for (auto & [key, group] : groups) {
    auto by_time = [](const CallRecord * a, const CallRecord * b) {
      return a->timestamp_ms < b->timestamp_ms;
    };
    std::stable_sort(group.successes.begin(), group.successes.end(), by_time);

    for (const CallRecord * failed : group.failures) {
      ParamErrorTable & table = tables[failed->api];
      ++table.failed_calls;

      // nearest success in time inside the window; an exact tie goes forward
      const CallRecord * paired = nullptr;
      auto it = std::lower_bound(group.successes.begin(), group.successes.end(),
        failed->timestamp_ms, [](const CallRecord * s, std::int64_t t) {
          return s->timestamp_ms < t;
        });
      const CallRecord * forward =
        it != group.successes.end() &&
            (*it)->timestamp_ms - failed->timestamp_ms <= options.window_ms
          ? *it
          : nullptr;
      const CallRecord * backward =
        it != group.successes.begin() &&
            failed->timestamp_ms - (*std::prev(it))->timestamp_ms <= options.window_ms
          ? *std::prev(it)
          : nullptr;
      if (forward && backward) {
        paired = (*it)->timestamp_ms - failed->timestamp_ms <=
                     failed->timestamp_ms - backward->timestamp_ms
                   ? forward
                   : backward;
      } else {
        paired = forward ? forward : backward;
      }
      if (paired == nullptr) {
        ++table.unpaired_failed_calls;
        continue;
      }
      ++table.paired_failed_calls;
      DiffReport annotations = diff(flatten(paired->params), flatten(failed->params));
      const std::string code = failed->error_code.value_or("");
      for (const auto & annotation : annotations) {
        ++tallies[failed->api][{code, annotation}];
      }
    }
  }

  for (auto & [api, table] : tables) {
    for (const auto & [key, count] : tallies[api]) {
      ParamErrorRow row;
      row.error_code = key.first;
      row.annotation = key.second;
      row.count = count;
      row.rate = table.paired_failed_calls > 0
                   ? static_cast<double>(count) / table.paired_failed_calls
                   : 0.0;
      table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(),
      [](const ParamErrorRow & a, const ParamErrorRow & b) {
        if (a.rate != b.rate) return a.rate > b.rate;
        if (a.error_code != b.error_code) return a.error_code < b.error_code;
        return a.annotation < b.annotation;
      });
  }
  return tables;
}

// ------------------------------------------------------------------ call log

namespace
{

bool is_gzip(const std::string & bytes)
{
  return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
         static_cast<unsigned char>(bytes[1]) == 0x8b;
}

std::string gunzip(const std::string & bytes)
{
  z_stream stream{};
  if (inflateInit2(&stream, 16 + MAX_WBITS) != Z_OK) {
    throw std::runtime_error("inflateInit2 failed");
  }
  std::string out;
  std::vector<char> buffer(1 << 16);
  stream.next_in = reinterpret_cast<Bytef *>(const_cast<char *>(bytes.data()));
  stream.avail_in = static_cast<uInt>(bytes.size());
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    stream.next_out = reinterpret_cast<Bytef *>(buffer.data());
    stream.avail_out = static_cast<uInt>(buffer.size());
    status = inflate(&stream, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) {
      inflateEnd(&stream);
      throw std::runtime_error("corrupt gzip stream");
    }
    out.append(buffer.data(), buffer.size() - stream.avail_out);
  }
  inflateEnd(&stream);
  return out;
}

std::optional<CallRecord> parse_record(const std::string & linetext)
{
  Json v = Json::parse(linetext, nullptr, false);
  if (v.is_discarded() || !v.is_object()) return std::nullopt;
  if (!v.contains("timestamp") || !v["timestamp"].is_number_integer()) return std::nullopt;
  if (!v.contains("user_id") || !v["user_id"].is_string()) return std::nullopt;
  if (!v.contains("api") || !v["api"].is_string()) return std::nullopt;
  if (!v.contains("success") || !v["success"].is_boolean()) return std::nullopt;
  CallRecord record;
  record.timestamp_ms = v["timestamp"].get<std::int64_t>();
  record.user_id = v["user_id"].get<std::string>();
  record.api = v["api"].get<std::string>();
  record.success = v["success"].get<bool>();
  record.params = v.value("params", Json::object());
  if (v.contains("error_code") && v["error_code"].is_string()) {
    record.error_code = v["error_code"].get<std::string>();
  }
  // error_code present iff the call failed
  if (record.success == record.error_code.has_value()) return std::nullopt;
  return record;
}

}  // namespace

std::vector<CallRecord> read_call_log(const std::string & path, int * malformed_count,
  const std::function<void(int, const std::string &)> & on_malformed)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open call log: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (is_gzip(bytes)) bytes = gunzip(bytes);

  std::vector<CallRecord> records;
  int malformed = 0;
  int line_number = 0;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    std::string linetext = bytes.substr(start, end == std::string::npos ? end : end - start);
    start = end == std::string::npos ? bytes.size() + 1 : end + 1;
    ++line_number;
    if (linetext.empty() ||
        linetext.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    if (auto record = parse_record(linetext)) {
      records.push_back(std::move(*record));
    } else {
      ++malformed;
      if (on_malformed) on_malformed(line_number, linetext);
    }
  }
  if (malformed_count != nullptr) *malformed_count = malformed;
  std::stable_sort(records.begin(), records.end(),
    [](const CallRecord & a, const CallRecord & b) { return a.timestamp_ms < b.timestamp_ms; });
  return records;
}

// ------------------------------------------------------------------ quadrant

std::vector<QuadrantPoint> quadrant(
  const std::vector<std::tuple<std::string, double, double>> & points, double x0, double y0)
{
  std::vector<QuadrantPoint> out;
  out.reserve(points.size());
  for (const auto & [api, coverage, success] : points) {
    if (coverage < 0 || coverage > 1 || success < 0 || success > 1) {
      throw RangeError("coverage/success_rate must lie in [0,1] for api '" + api + "'");
    }
    QuadrantPoint p;
    p.api = api;
    p.coverage = coverage;
    p.success_rate = success;
    // thresholds belong to the closed upper side
    bool high_coverage = coverage >= x0;
    bool high_success = success >= y0;
    if (high_coverage && high_success) p.quadrant = Quadrant::Q1;
    else if (!high_coverage && high_success) p.quadrant = Quadrant::Q2;
    else if (!high_coverage && !high_success) p.quadrant = Quadrant::Q3;
    else p.quadrant = Quadrant::Q4;
    out.push_back(std::move(p));
  }
  // Q3 first, then Q4, then Q1/Q2 at equal priority; within a class by
  // ascending success rate
  auto priority = [](Quadrant q) {
    switch (q) {
      case Quadrant::Q3: return 0;
      case Quadrant::Q4: return 1;
      default: return 2;
    }
  };
  std::sort(out.begin(), out.end(), [&](const QuadrantPoint & a, const QuadrantPoint & b) {
    if (priority(a.quadrant) != priority(b.quadrant)) {
      return priority(a.quadrant) < priority(b.quadrant);
    }
    if (a.success_rate != b.success_rate) return a.success_rate < b.success_rate;
    return a.api < b.api;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

// ------------------------------------------------------------------ coverage

double coverage_rate(const ApiDocSpec & doc)
{
  if (doc.parameters.empty()) throw EmptySpec("doc spec for '" + doc.api + "' has no rows");
  int complete = 0;
  for (const auto & p : doc.parameters) {
    if (!p.description.empty() && !p.example.empty()) ++complete;
  }
  return static_cast<double>(complete) / static_cast<double>(doc.parameters.size());
}

ApiDocSpec parse_doc_spec(const Json & doc)
{
  ApiDocSpec spec;
  spec.api = doc.at("api").get<std::string>();
  for (const auto & row : doc.at("parameters")) {
    ApiDocParam param;
    param.name = row.value("name", "");
    param.type = row.value("type", "");
    param.required = row.value("required", false);
    param.description = row.value("description", "");
    const Json example = row.value("example", Json(""));
    param.example = example.is_string() ? example.get<std::string>() : example.dump();
    spec.parameters.push_back(std::move(param));
  }
  return spec;
}

}  // namespace tea::analytics
