#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "bachlab/corpus.hpp"
#include "bachlab/error.hpp"
#include "bachlab/report.hpp"
#include "bachlab/tolerances.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bachlab;

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("check relations") {
  CHECK(make_check("a", "", "", 1e-9, 1e-8).pass);
  CHECK_FALSE(make_check("a", "", "", 1e-7, 1e-8).pass);
  CHECK(make_check("a", "", "", 12.0, 10.0, Relation::AtLeast).pass);
  CHECK_FALSE(make_check("a", "", "", 9.0, 10.0, Relation::AtLeast).pass);
  CHECK(make_check("a", "", "", 0.5 + 1e-12, 1e-10, Relation::Equal, 0.5).pass);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto rel : {Relation::AtMost, Relation::AtLeast, Relation::Equal}) CHECK_FALSE(make_check("a", "", "", nan, 1.0, rel).pass);
  CHECK(make_flag("f", "", "", true).pass);
  CHECK_FALSE(make_flag("f", "", "", false).pass);
}

TEST_CASE("report serialization is deterministic and ordered") {
  Report r;
  r.command = "check identity";
  r.config = {{"seed", "1"}, {"case", "x.json"}};
  r.tolerances = Tolerances{}.as_map();
  r.checks.push_back(make_check("b.first", "anchor", fnv1a_hex("in"), 1e-12, 1e-7));
  r.checks.push_back(make_check("a.second", "anchor", fnv1a_hex("in"), std::numeric_limits<double>::infinity(), 10.0,
                                Relation::AtLeast));
  const std::string text = r.to_json();
  CHECK(text == r.to_json());
  const auto j = nlohmann::json::parse(text);
  CHECK(j["tool"]["name"] == "bachlab");
  CHECK(j["checks"][0]["check_id"] == "b.first");
  CHECK(j["checks"][1]["value"] == "inf");
  CHECK(j["summary"]["passed"] == 2);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(text.find("\"tool\"") < text.find("\"checks\""));
}

TEST_CASE("tolerance table") {
  Tolerances t;
  CHECK(t.get("integral_identity") == 1e-7);
  t.set("integral_identity", 1e-9);
  CHECK(t.integral_identity == 1e-9);
  CHECK_THROWS_AS(t.set("nope", 1.0), SpecError);
  CHECK(t.as_map().size() == Tolerances::names().size());
  std::set<std::string> unique(Tolerances::names().begin(), Tolerances::names().end());
  CHECK(unique.size() == Tolerances::names().size());
}

TEST_CASE("corpora are seeded") {
  corpus::Rng a(42), b(42);
  const auto ma = corpus::random_metric(3, a), mb = corpus::random_metric(3, b);
  for (std::size_t k = 0; k < ma.g.size(); ++k) CHECK(ma.g[k].to_string() == mb.g[k].to_string());
  CHECK(corpus::torus_function(a, 0.5) == corpus::torus_function(b, 0.5));
}

TEST_CASE("random metrics are positive definite on their box") {
  corpus::Rng rng(8);
  for (int dim = 2; dim <= 4; ++dim) {
    const Manifold m("r", {corpus::random_metric(dim, rng)});
    for (const auto& p : m.sample_points(50, 1)) {
      const Tensor g = m.metric_values(p);
      // Gershgorin
      for (int i = 0; i < dim; ++i) {
        double off = 0.0;
        for (int j = 0; j < dim; ++j)
          if (j != i) off += std::abs(g(i, j));
        CHECK(g(i, i) - off > 0.3);
      }
    }
  }
}
