#pragma once

// The acceptance suite: every criterion as a list of check records over the
// deterministic corpora. Used by `suite all` and the acceptance binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bachlab/report.hpp"
#include "bachlab/tolerances.hpp"

namespace bachlab::suite {

struct Config {
  std::uint64_t seed = 1;
  Tolerances tol;
};

struct Criterion {
  int index = 0;
  std::string title;
  std::vector<CheckRecord> checks;
  bool pass() const;
};

struct Entry {
  int index;
  std::string title;
  std::function<std::vector<CheckRecord>(const Config&)> run;
};

/// Criteria in order; the reproducibility criterion is not listed here
/// because it compares whole suite runs.
const std::vector<Entry>& entries();

Criterion run_one(const Entry& e, const Config& cfg);
std::vector<Criterion> run_all(const Config& cfg);

/// Report for `suite all` (check ids prefixed with the criterion slug).
Report suite_report(const Config& cfg, const std::vector<Criterion>& results);

}  // namespace bachlab::suite
