// Runs every acceptance criterion and prints one line per criterion.
// Exit status is the number of failing criteria (capped at 1).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include <CLI11.hpp>

#include "bachlab/suite.hpp"

using namespace bachlab;

int main(int argc, char** argv) {
  CLI::App app{"bachlab acceptance criteria"};
  suite::Config cfg;
  bool verbose = false;
  int only = 0;
  app.add_option("--seed", cfg.seed, "corpus seed");
  app.add_option("--only", only, "run a single criterion by position");
  app.add_flag("-v,--verbose", verbose, "print every check");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  std::string first_report;
  for (const auto& e : suite::entries()) {
    if (only && e.index != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = suite::run_one(e, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t ok = 0;
    for (const auto& k : c.checks) ok += k.pass ? 1 : 0;
    std::printf("[%s] %2d %-50s %zu/%zu checks (%.1fs)\n", c.pass() ? "PASS" : "FAIL", c.index, c.title.c_str(), ok,
                c.checks.size(), secs);
    for (const auto& k : c.checks)
      if (verbose || !k.pass)
        std::printf("       %s %-60s value %.3e %s %.3e%s%s\n", k.pass ? "ok  " : "FAIL", k.check_id.c_str(), k.value,
                    k.relation == Relation::AtLeast ? ">=" : (k.relation == Relation::Equal ? "==" : "<="),
                    k.relation == Relation::Equal ? k.expected : k.tolerance, k.note.empty() ? "" : "  ",
                    k.note.c_str());
    failed += c.pass() ? 0 : 1;
  }

  if (!only || only == 11) {
    // two full suite runs with the same seed must serialize identically
    const auto t0 = std::chrono::steady_clock::now();
    const std::string a = suite::suite_report(cfg, suite::run_all(cfg)).to_json();
    const std::string b = suite::suite_report(cfg, suite::run_all(cfg)).to_json();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool same = a == b;
    std::printf("[%s] 11 %-50s %zu bytes, digest %s (%.1fs)\n", same ? "PASS" : "FAIL",
                "suite report byte-identical across runs", a.size(), fnv1a_hex(a).c_str(), secs);
    failed += same ? 0 : 1;
  }
  std::printf("%s: %d criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
