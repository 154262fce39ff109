#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "spanlab/errors.hpp"
#include "spanlab/shapes.hpp"

using namespace spanlab;

namespace {

std::size_t intervals(std::size_t n) { return (n + 1) * (n + 2) / 2; }

// (i,j) <= (i',j') iff i <= i' and j' <= j, straight from the definition.
bool leq_cells(const Cell& a, const Cell& b) {
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (!(a[r].first <= b[r].first && b[r].second <= a[r].second)) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST_CASE("sigma 2 has the six depicted cells") {
  const SigmaShape s({2});
  std::set<Interval> got;
  for (const auto& c : s.cells()) {
    got.insert(c[0]);
  }
  const std::set<Interval> expected{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  CHECK(got == expected);
  CHECK(s.size() == 6);
}

TEST_CASE("cell counts match the product of interval counts") {
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(SigmaShape({n}).size() == intervals(n));
    CHECK(LambdaShape(SigmaShape({n})).size() == 2 * n + 1);
  }
  CHECK(SigmaShape({0}).size() == 1);
  CHECK(SigmaShape({1, 1}).size() == 9);
  CHECK(SigmaShape({2, 3}).size() == intervals(2) * intervals(3));
  CHECK(SigmaShape({3}).size() == 10);
  CHECK(LambdaShape(SigmaShape({3})).size() == 7);
  CHECK(LambdaShape(SigmaShape({2, 2})).size() == 25);
}

TEST_CASE("order and covers agree with a brute-force Hasse diagram") {
  for (const auto& ar : std::vector<std::vector<std::size_t>>{{2}, {3}, {1, 1}, {2, 1}, {1, 1, 1}}) {
    const SigmaShape s(ar);
    const Poset& p = s.poset();
    std::set<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s.size(); ++b) {
        CHECK(p.leq(a, b) == leq_cells(s.cell(a), s.cell(b)));
        if (a == b || !leq_cells(s.cell(a), s.cell(b))) {
          continue;
        }
        bool between = false;
        for (std::size_t c = 0; c < s.size() && !between; ++c) {
          between = c != a && c != b && leq_cells(s.cell(a), s.cell(c)) && leq_cells(s.cell(c), s.cell(b));
        }
        if (!between) {
          covers.insert({a, b});
        }
      }
    }
    const std::set<std::pair<std::size_t, std::size_t>> got(p.covers().begin(), p.covers().end());
    CHECK(got == covers);
  }
}

TEST_CASE("lambda cells are the short intervals") {
  const SigmaShape s({3, 1});
  const LambdaShape l(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool short_cell = true;
    for (const auto& [a, b] : s.cell(i)) {
      short_cell = short_cell && b - a <= 1;
    }
    CHECK(s.in_lambda(i) == short_cell);
    CHECK(l.from_parent(i).has_value() == short_cell);
  }
}

TEST_CASE("simplex maps act on cells") {
  const SigmaShape one({1});
  const SigmaShape two({2});
  const auto up = sigma_map(SimplexMap(1, 2, {0, 2}), one);
  const auto idx = one.index_of({{0, 1}});
  REQUIRE(idx);
  CHECK(two.cell(up(*idx)) == Cell{{0, 2}});
  CHECK_FALSE(preserves_lambda(up));

  const SigmaShape zero({0});
  const auto down = sigma_map(SimplexMap(1, 0, {0, 0}), one);
  CHECK(zero.cell(down(*idx)) == Cell{{0, 0}});

  const auto id = sigma_map(SimplexMap::identity(2), two);
  for (std::size_t i = 0; i < two.size(); ++i) {
    CHECK(id(i) == i);
  }
  CHECK(preserves_lambda(sigma_map(SimplexMap(1, 2, {1, 2}), one)));
  CHECK(SimplexMap(1, 2, {1, 2}).is_inert());
  CHECK_FALSE(SimplexMap(1, 2, {0, 2}).is_inert());
}

TEST_CASE("composition of simplex maps matches composite poset maps") {
  const SigmaShape one({1});
  const SimplexMap f(1, 2, {0, 1});
  const SimplexMap g(2, 3, {0, 2, 3});
  const SigmaShape two({2});
  CHECK(compose(sigma_map(f, one), sigma_map(g, two)) == sigma_map(f.then(g), one));
  CHECK(SimplexMap::all(1, 2).size() == 6);
}

TEST_CASE("malformed shape requests are rejected") {
  CHECK_THROWS_AS(SigmaShape({}), ShapeSpecError);
  CHECK_THROWS_AS(SimplexMap(1, 2, {2, 1}), ShapeSpecError);
  CHECK_THROWS_AS(SimplexMap(1, 2, {0, 3}), ShapeSpecError);
  CHECK_THROWS_AS(SimplexMap(2, 2, {0, 1}), ShapeSpecError);
}

TEST_CASE("gluing one-edge shapes gives lambda") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto w = lambda_wedge_check(n);
    CHECK(w.holds);
    CHECK(w.glued_size == 2 * n + 1);
    CHECK(w.lambda_size == 2 * n + 1);
  }
}

TEST_CASE("shape JSON lists objects and covers") {
  const auto j = to_json(SigmaShape({2}));
  CHECK(j.at("objects").size() == 6);
  CHECK(j.at("cover_relations").size() == SigmaShape({2}).poset().covers().size());
  CHECK(j.at("arities") == nlohmann::json::array({2}));
}
