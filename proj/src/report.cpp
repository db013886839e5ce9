#include "bachlab/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace bachlab {

namespace {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::AtLeast: return ">=";
    case Relation::Equal: return "==";
  }
  return "?";
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CheckRecord make_check(std::string id, std::string anchor, std::string inputs, double value, double tolerance,
                       Relation rel, double expected, std::string note) {
  CheckRecord c;
  c.check_id = std::move(id);
  c.paper_anchor = std::move(anchor);
  c.inputs_digest = fnv1a_hex(inputs);
  c.value = value;
  c.expected = expected;
  c.tolerance = tolerance;
  c.relation = rel;
  switch (rel) {
    case Relation::AtMost: c.pass = value <= tolerance; break;
    case Relation::AtLeast: c.pass = value >= tolerance; break;
    case Relation::Equal: c.pass = std::abs(value - expected) <= tolerance; break;
  }
  c.note = std::move(note);
  return c;
}

CheckRecord make_flag(std::string id, std::string anchor, std::string inputs, bool ok, std::string note) {
  return make_check(std::move(id), std::move(anchor), std::move(inputs), ok ? 1.0 : 0.0, 0.0, Relation::Equal, 1.0,
                    std::move(note));
}

std::size_t Report::passed() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.pass ? 1 : 0;
  return n;
}

std::string Report::to_json() const {
  using oj = nlohmann::ordered_json;
  oj doc;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["command"] = command;
  oj cfg = oj::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  doc["config"] = cfg;
  oj tol = oj::object();
  for (const auto& [k, v] : tolerances) tol[k] = number(v);
  doc["tolerances"] = tol;
  oj arr = oj::array();
  for (const auto& c : checks) {
    oj j;
    j["check_id"] = c.check_id;
    j["paper_anchor"] = c.paper_anchor;
    j["inputs_digest"] = c.inputs_digest;
    j["value"] = number(c.value);
    j["expected"] = number(c.expected);
    j["relation"] = to_string(c.relation);
    j["tolerance"] = number(c.tolerance);
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  doc["checks"] = std::move(arr);
  doc["summary"] = {{"total", checks.size()}, {"passed", passed()}, {"failed", failed()}};
  return doc.dump(2) + "\n";
}

}  // namespace bachlab
