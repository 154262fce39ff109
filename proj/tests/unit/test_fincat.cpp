#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "spanlab/diagram.hpp"
#include "spanlab/errors.hpp"
#include "spanlab/fincat.hpp"

using namespace spanlab;
using nlohmann::json;

namespace {

json walking_arrow() {
  return json::parse(R"({
    "objects": ["a", "b"],
    "morphisms": [{"id": "1a", "src": "a", "tgt": "a"},
                  {"id": "1b", "src": "b", "tgt": "b"},
                  {"id": "m", "src": "a", "tgt": "b"}],
    "identities": {"a": "1a", "b": "1b"},
    "compose": [["1a", "1a", "1a"], ["1b", "1b", "1b"], ["m", "1a", "m"], ["1b", "m", "m"]]
  })");
}

int fn(const FinCategory& c, int n, int k, const std::vector<int>& v) { return c.from_function(n, k, v); }

} // namespace

TEST_CASE("finite-set skeleton hom-sets have k^n elements") {
  const auto c = FinCategory::finset(3);
  CHECK(c.object_count() == 4);
  long total = 0;
  for (int n = 0; n <= 3; ++n) {
    for (int k = 0; k <= 3; ++k) {
      CHECK(static_cast<long>(c.hom(n, k).size()) == oracle::ipow(k, n));
      total += oracle::ipow(k, n);
    }
  }
  CHECK(c.morphism_count() == total);
  for (int n = 0; n <= 3; ++n) {
    CHECK(static_cast<long>(c.automorphisms(n).size()) == oracle::factorial(n));
    CHECK(c.size(n) == n);
  }
}

TEST_CASE("composition in the skeleton is composition of functions") {
  const auto c = FinCategory::finset(3);
  for (int f : c.hom(2, 3)) {
    for (int g : c.hom(3, 2)) {
      const auto& fv = c.function(f);
      const auto& gv = c.function(g);
      std::vector<int> expected;
      for (int v : fv) {
        expected.push_back(gv[v]);
      }
      CHECK(c.function(c.compose(g, f)) == expected);
    }
  }
}

TEST_CASE("category axioms") {
  CHECK(validate_category(FinCategory::finset(2)).ok);
  CHECK(validate_category(category_from_json(walking_arrow())).ok);

  auto bad = walking_arrow();
  bad["compose"][2] = json::array({"m", "1a", "1b"});
  const auto r = validate_category(category_from_json(bad));
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("wrong type") != std::string::npos);
}

TEST_CASE("category JSON round trip and schema errors") {
  const auto c = FinCategory::finset(2);
  const auto back = category_from_json(to_json(c));
  CHECK(back.object_count() == c.object_count());
  CHECK(back.morphism_count() == c.morphism_count());
  CHECK(validate_category(back).ok);

  CHECK_THROWS_AS(category_from_json(json::array()), SchemaError);
  auto missing = walking_arrow();
  missing.erase("identities");
  CHECK_THROWS_AS(category_from_json(missing), SchemaError);
  auto unknown = walking_arrow();
  unknown["morphisms"][2]["tgt"] = "c";
  CHECK_THROWS_AS(category_from_json(unknown), SchemaError);
  CHECK_THROWS_AS(load_base("finset:x"), SchemaError);
  CHECK_THROWS_AS(load_base("/nonexistent/base.json"), SchemaError);
  CHECK_THROWS_AS(FinCategory::finset(5), ResourceError);
}

TEST_CASE("pullbacks match pair enumeration") {
  const auto c = FinCategory::finset(4);
  SUBCASE("over the terminal object") {
    // 2 -> 1 <- 3 would need an apex of size 6; finset:4 has none
    CHECK_THROWS_AS(pullback(c, fn(c, 2, 1, {0, 0}), fn(c, 3, 1, {0, 0, 0})), NoLimitError);
    const auto c6 = limit_cardinality(c, cospan_poset(), cospan_diagram(c, fn(c, 2, 1, {0, 0}), fn(c, 3, 1, {0, 0, 0})));
    CHECK(c6 == 6u);
    const auto p = pullback(c, fn(c, 2, 1, {0, 0}), fn(c, 2, 1, {0, 0}));
    CHECK(c.size(p.cone.apex) == 4);
  }
  SUBCASE("identity against a point") {
    const auto p = pullback(c, c.identity(2), fn(c, 1, 2, {1}));
    CHECK(c.size(p.cone.apex) == 1);
  }
  SUBCASE("along an identity") {
    const int f = fn(c, 3, 2, {0, 1, 1});
    const auto p = pullback(c, f, c.identity(2));
    CHECK(c.size(p.cone.apex) == 3);
  }
  SUBCASE("exhaustive at sizes up to 2") {
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) {
        for (int x = 0; x <= 2; ++x) {
          for (int f : c.hom(a, x)) {
            for (int g : c.hom(b, x)) {
              const auto expected = oracle::pullback_size(c.function(f), c.function(g));
              const auto p = pullback(c, f, g);
              CHECK(static_cast<std::size_t>(*c.size(p.cone.apex)) == expected);
              CHECK(is_limit(c, cospan_poset(), cospan_diagram(c, f, g), p.cone));
              CHECK(is_limit_by_counting(c, cospan_poset(), cospan_diagram(c, f, g), p.cone));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("cone search agrees with the canonical construction") {
  const auto c = FinCategory::finset(3);
  for (int f : c.hom(2, 2)) {
    for (int g : c.hom(1, 2)) {
      const auto lim = limit(c, cospan_poset(), cospan_diagram(c, f, g));
      const auto found = limit_by_search(c, cospan_poset(), cospan_diagram(c, f, g));
      CHECK(c.size(found.apex) == c.size(lim.cone.apex));
    }
  }
}

TEST_CASE("small limits") {
  const auto c = FinCategory::finset(3);
  const Poset empty(0, [](std::size_t, std::size_t) { return false; });
  CHECK(c.size(limit(c, empty, Diagram{}).cone.apex) == 1);
  const Poset one(1, [](std::size_t, std::size_t) { return true; });
  const auto l = limit(c, one, Diagram{{2}, {}});
  CHECK(c.size(l.cone.apex) == 2);
  CHECK(c.is_iso(l.cone.legs[0]));
}

TEST_CASE("functors are validated") {
  auto c = std::make_shared<const FinCategory>(FinCategory::finset(1));
  std::vector<int> objects{0, 1};
  std::vector<int> morphisms;
  for (int m = 0; m < c->morphism_count(); ++m) {
    morphisms.push_back(m);
  }
  CHECK(validate_functor(Functor(c, c, objects, morphisms)).ok);
  // send every morphism to the identity of 0: wrong typing somewhere
  std::vector<int> flat(morphisms.size(), c->identity(0));
  CHECK_FALSE(validate_functor(Functor(c, c, objects, flat)).ok);
}
