#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <memory>

#include "oracles.hpp"
#include "spanlab/errors.hpp"
#include "spanlab/groupoid.hpp"

using namespace spanlab;
using nlohmann::json;

namespace {

// One-object category on n elements with multiplication op.
CategoryPtr group(int n, const std::function<int(int, int)>& op) {
  json j;
  j["objects"] = {"*"};
  j["morphisms"] = json::array();
  for (int i = 0; i < n; ++i) {
    j["morphisms"].push_back({{"id", "g" + std::to_string(i)}, {"src", "*"}, {"tgt", "*"}});
  }
  j["identities"] = {{"*", "g0"}};
  j["compose"] = json::array();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      j["compose"].push_back({"g" + std::to_string(a), "g" + std::to_string(b), "g" + std::to_string(op(a, b))});
    }
  }
  return std::make_shared<const FinCategory>(category_from_json(j));
}

CategoryPtr cyclic(int n) {
  return group(n, [n](int a, int b) { return (a + b) % n; });
}

CategoryPtr discrete(int n) {
  json j;
  j["objects"] = json::array();
  j["morphisms"] = json::array();
  j["identities"] = json::object();
  j["compose"] = json::array();
  for (int i = 0; i < n; ++i) {
    const std::string o = "o" + std::to_string(i);
    const std::string m = "1" + o;
    j["objects"].push_back(o);
    j["morphisms"].push_back({{"id", m}, {"src", o}, {"tgt", o}});
    j["identities"][o] = m;
    j["compose"].push_back({m, m, m});
  }
  return std::make_shared<const FinCategory>(category_from_json(j));
}

// Sends every arrow to the identity of the image object.
GroupoidMap collapse(const FinGroupoid& a, const FinGroupoid& b, std::vector<int> objects) {
  return {&a, &b, std::move(objects), [&b](int, int, const Code&) { return b.identity(0); }};
}

GroupoidMap identity_map(const FinGroupoid& g) {
  std::vector<int> obj(static_cast<std::size_t>(g.object_count()));
  for (int i = 0; i < g.object_count(); ++i) {
    obj[i] = i;
  }
  return {&g, &g, obj, [](int, int, const Code& f) { return f; }};
}

} // namespace

TEST_CASE("core of finite sets") {
  const auto c = std::make_shared<const FinCategory>(FinCategory::finset(3));
  const auto g = FinGroupoid::core(c);
  CHECK(g.component_count() == 4);
  for (int n = 0; n <= 3; ++n) {
    CHECK(static_cast<long>(g.aut_order(g.component_of(n))) == oracle::factorial(n));
  }
  using P = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(pi0_aut_profile(g) == P{{1, 2}, {2, 1}, {6, 1}});
}

TEST_CASE("cores of discrete categories and groupoids") {
  const auto d = FinGroupoid::core(discrete(3));
  using P = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(pi0_aut_profile(d) == P{{1, 3}});
  const auto z3 = FinGroupoid::from_groupoid_category(cyclic(3));
  CHECK(z3.component_count() == 1);
  CHECK(z3.aut_order(0) == 3);
  CHECK(pi0_aut_profile(FinGroupoid::core(cyclic(3))) == pi0_aut_profile(z3));
  CHECK_THROWS_AS(FinGroupoid::from_groupoid_category(std::make_shared<const FinCategory>(FinCategory::finset(2))),
                  NotGroupoidError);
}

TEST_CASE("hom-sets are transports of automorphisms") {
  const auto c = std::make_shared<const FinCategory>(FinCategory::finset(3));
  const auto g = FinGroupoid::core(c);
  for (int x = 0; x < g.object_count(); ++x) {
    for (int y = 0; y < g.object_count(); ++y) {
      const auto h = g.hom(x, y);
      const long expected = *c->size(x) == *c->size(y) ? oracle::factorial(*c->size(x)) : 0;
      CHECK(static_cast<long>(h.size()) == expected);
    }
  }
}

TEST_CASE("equivalence detection") {
  const auto c = std::make_shared<const FinCategory>(FinCategory::finset(2));
  const auto g = FinGroupoid::core(c);
  CHECK(equivalent(identity_map(g)).equivalent());
  CHECK(equivalent(identity_map(g.skeleton())).equivalent());

  const auto z2 = FinGroupoid::from_groupoid_category(cyclic(2));
  const auto z3 = FinGroupoid::from_groupoid_category(cyclic(3));
  const auto r = equivalent(collapse(z2, z3, {0}));
  CHECK_FALSE(r.fully_faithful);
  CHECK_FALSE(r.equivalent());

  const auto d2 = FinGroupoid::core(discrete(2));
  const auto d1 = FinGroupoid::core(discrete(1));
  const auto r2 = equivalent(collapse(d2, d1, {0, 0}));
  CHECK_FALSE(r2.fully_faithful);
  CHECK(r2.essentially_surjective);
}

TEST_CASE("profiles do not decide equivalence") {
  const auto z4 = FinGroupoid::from_groupoid_category(cyclic(4));
  const auto klein = FinGroupoid::from_groupoid_category(group(4, [](int a, int b) { return a ^ b; }));
  CHECK(pi0_aut_profile(z4) == pi0_aut_profile(klein));
  CHECK_FALSE(groups_isomorphic(z4, 0, klein, 0));
  CHECK_FALSE(abstractly_equivalent(z4, klein));
  CHECK(abstractly_equivalent(z4, FinGroupoid::from_groupoid_category(cyclic(4))));
}

TEST_CASE("iso-comma of two points over BZ/2") {
  const auto k = FinGroupoid::from_groupoid_category(cyclic(2));
  const auto pt = FinGroupoid::point(k.base_ptr());
  const GroupoidMap f{&pt, &k, {0}, [&k](int, int, const Code&) { return k.identity(0); }};
  const IsoComma ic(f, f);
  CHECK(ic.groupoid().component_count() == 2);
  for (int i = 0; i < ic.groupoid().component_count(); ++i) {
    CHECK(ic.groupoid().aut_order(i) == 1);
  }
}

TEST_CASE("iso-comma along an identity is equivalent to the source") {
  const auto c = std::make_shared<const FinCategory>(FinCategory::finset(2));
  const auto g = FinGroupoid::core(c);
  const auto id = identity_map(g);
  const IsoComma ic(id, id);
  CHECK(equivalent(ic.left_projection()).equivalent());
  CHECK(pi0_aut_profile(ic.groupoid()) == pi0_aut_profile(g));
}

TEST_CASE("iso-comma over a discrete groupoid is the strict pullback") {
  const auto k = FinGroupoid::core(discrete(2));
  const auto a = FinGroupoid::core(discrete(3));
  const GroupoidMap f{&a, &k, {0, 1, 1}, [&k](int, int y, const Code&) { return k.identity(y == 0 ? 0 : 1); }};
  const GroupoidMap g{&a, &k, {1, 1, 0}, [&k](int, int y, const Code&) { return k.identity(y == 2 ? 0 : 1); }};
  const IsoComma ic(f, g);
  // pairs (x, y) with f x = g y: 1 * 1 + 2 * 2
  CHECK(ic.groupoid().component_count() == 5);
  CHECK(pi0_aut_profile(ic.groupoid())[0].first == 1);
}

TEST_CASE("products multiply automorphism groups") {
  const auto c = std::make_shared<const FinCategory>(FinCategory::finset(2));
  const auto g = FinGroupoid::core(c);
  const auto p = product(g, g);
  CHECK(p.component_count() == 9);
  std::map<std::size_t, std::size_t> expected;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; b <= 2; ++b) {
      expected[static_cast<std::size_t>(oracle::factorial(a) * oracle::factorial(b))] += 1;
    }
  }
  const std::vector<std::pair<std::size_t, std::size_t>> want(expected.begin(), expected.end());
  CHECK(pi0_aut_profile(p) == want);
  CHECK_THROWS_AS(product(g, FinGroupoid::from_groupoid_category(cyclic(2))), Error);
}

TEST_CASE("groupoid JSON with an inverse table") {
  json j = to_json(*cyclic(3));
  j["inverse"] = {{"g0", "g0"}, {"g1", "g2"}, {"g2", "g1"}};
  CHECK(groupoid_from_json(j).aut_order(0) == 3);
  j["inverse"]["g1"] = "g1";
  CHECK_THROWS_AS(groupoid_from_json(j), SchemaError);
}

TEST_CASE("functoriality violations are reported") {
  const auto z3 = FinGroupoid::from_groupoid_category(cyclic(3));
  // g -> g composed with g1 is not a homomorphism
  const GroupoidMap bad{&z3, &z3, {0}, [&z3](int, int, const Code& f) { return z3.compose(Code{1}, f); }};
  CHECK_FALSE(validate_map(bad).ok);
  CHECK(validate_map(identity_map(z3)).ok);
}
