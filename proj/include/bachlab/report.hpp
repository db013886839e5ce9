#pragma once

// Machine-readable check reports. Serialization is deterministic: fields in
// fixed order, doubles printed shortest-round-trip, no timestamps.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bachlab {

inline constexpr const char* kToolName = "bachlab";
inline constexpr const char* kToolVersion = "1.0.0";

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

enum class Relation { AtMost, AtLeast, Equal };

struct CheckRecord {
  std::string check_id;
  std::string paper_anchor;
  std::string inputs_digest;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::AtMost;  // value <= tolerance, value >= tolerance, |value - expected| <= tolerance
  bool pass = false;
  std::string note;
};

/// Builds a record and sets pass from the relation. NaN never passes.
CheckRecord make_check(std::string id, std::string anchor, std::string inputs, double value, double tolerance,
                       Relation rel = Relation::AtMost, double expected = 0.0, std::string note = {});
/// A boolean outcome recorded as value 1/0 against expected 1.
CheckRecord make_flag(std::string id, std::string anchor, std::string inputs, bool ok, std::string note = {});

struct Report {
  std::string command;
  std::map<std::string, std::string> config;  // echoed as strings
  std::map<std::string, double> tolerances;
  std::vector<CheckRecord> checks;

  std::size_t passed() const;
  std::size_t failed() const { return checks.size() - passed(); }
  std::string to_json() const;
};

}  // namespace bachlab
