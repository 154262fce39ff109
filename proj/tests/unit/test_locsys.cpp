#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmpxx.h>

#include <memory>
#include <random>

#include "oracles.hpp"
#include "spanlab/errors.hpp"
#include "spanlab/locsys.hpp"

using namespace spanlab;

namespace {

using Coeff = std::shared_ptr<const InternalCategory>;

CategoryPtr finset(int n) { return std::make_shared<const FinCategory>(FinCategory::finset(n)); }

Coeff share(InternalCategory k) { return std::make_shared<const InternalCategory>(std::move(k)); }

std::vector<std::pair<std::string, Coeff>> samples() {
  return {{"discrete:2", share(InternalCategory::discrete(2))},
          {"cyclic:2", share(InternalCategory::cyclic_group(2))},
          {"cyclic:3", share(InternalCategory::cyclic_group(3))},
          {"arrow", share(InternalCategory::walking_arrow())}};
}

long homs(const InternalCategory& k, int a, int b) {
  long n = 0;
  for (int m = 0; m < k.c1; ++m) {
    n += k.src[m] == a && k.tgt[m] == b ? 1 : 0;
  }
  return n;
}

// sum over labelled spans of 1 / (x! a! y!), by direct enumeration of legs and foot labels
mpq_class labelled_span_mass(const InternalCategory& k, int b) {
  mpq_class total = 0;
  for (int x = 0; x <= b; ++x) {
    for (int a = 0; a <= b; ++a) {
      for (int y = 0; y <= b; ++y) {
        long count = 0;
        for (const auto& f : oracle::functions(a, x)) {
          for (const auto& g : oracle::functions(a, y)) {
            for (const auto& xi : oracle::functions(x, k.c0)) {
              for (const auto& eta : oracle::functions(y, k.c0)) {
                long ways = 1;
                for (int i = 0; i < a; ++i) {
                  ways *= homs(k, xi[f[i]], eta[g[i]]);
                }
                count += ways;
              }
            }
          }
        }
        mpq_class t(count, oracle::factorial(x) * oracle::factorial(a) * oracle::factorial(y));
        t.canonicalize();
        total += t;
      }
    }
  }
  return total;
}

mpq_class groupoid_mass(const FinGroupoid& g) {
  mpq_class m = 0;
  for (int k = 0; k < g.component_count(); ++k) {
    m += mpq_class(1, static_cast<unsigned long>(g.aut_order(k)));
  }
  return m;
}

LocalSystemSpan point_span(const FinCategory& c, int label) {
  return {make_span(c, c.identity(1), c.identity(1)), {0}, {label}, {0}};
}

} // namespace

TEST_CASE("internal category axioms") {
  for (const auto& [name, k] : samples()) {
    INFO(name);
    CHECK(validate_internal(*k).ok);
    CHECK(validate_internal(internal_from_json(to_json(*k))).ok);
  }
  auto bad = InternalCategory::cyclic_group(3);
  bad.comp[1 * 3 + 1] = 0;
  bad.inv.reset();
  CHECK_FALSE(validate_internal(bad).ok);

  auto untyped = InternalCategory::walking_arrow();
  untyped.comp[2 * 3 + 1] = 2;
  CHECK_FALSE(validate_internal(untyped).ok);
}

TEST_CASE("inverses in the coefficients") {
  const auto z2 = InternalCategory::cyclic_group(2);
  CHECK(z2.compose(1, 1) == z2.ident[0]);
  CHECK(is_internal_groupoid(z2));
  CHECK_FALSE(only_trivial_isos(z2));
  const auto z3 = InternalCategory::cyclic_group(3);
  CHECK(internal_inverse(z3, 1) == 2);
  const auto arrow = InternalCategory::walking_arrow();
  CHECK_FALSE(internal_inverse(arrow, 2).has_value());
  CHECK_FALSE(is_internal_groupoid(arrow));
  CHECK(only_trivial_isos(arrow));
  CHECK(only_trivial_isos(InternalCategory::discrete(3)));
}

TEST_CASE("levels with coefficients in Z/2") {
  const auto z2 = share(InternalCategory::cyclic_group(2));
  CHECK(LocalSystemLevel(finset(1), z2, 0, 1).size() == 2);
  // four unlabelled spans with empty apex and the point span labelled e or g
  CHECK(LocalSystemLevel(finset(1), z2, 1, 1).size() == 6);
}

TEST_CASE("level masses match direct enumeration") {
  for (const auto& [name, k] : samples()) {
    INFO(name);
    const LocalSystemLevel level(finset(2), k, 1, 2);
    CHECK(groupoid_mass(level.groupoid()) == labelled_span_mass(*k, 2));
    mpq_class vertices = 0;
    for (int x = 0; x <= 2; ++x) {
      mpq_class t(oracle::ipow(k->c0, x), oracle::factorial(x));
      t.canonicalize();
      vertices += t;
    }
    CHECK(groupoid_mass(LocalSystemLevel(finset(2), k, 0, 2).groupoid()) == vertices);
  }
}

TEST_CASE("terminal coefficients give the plain levels") {
  const auto one = share(InternalCategory::discrete(1));
  for (std::size_t n = 0; n <= 2; ++n) {
    const LocalSystemLevel labelled(finset(2), one, n, 2);
    const SpanLevel plain(finset(2), {n}, 2);
    CHECK(labelled.size() == plain.size());
    CHECK(pi0_aut_profile(labelled.groupoid()) == pi0_aut_profile(plain.groupoid()));
  }
}

TEST_CASE("composition of labelled spans") {
  const auto c = FinCategory::finset(2);
  const auto z3 = InternalCategory::cyclic_group(3);
  const auto g = point_span(c, 1);
  const auto gg = compose_locsys(c, z3, g, g);
  CHECK(gg.apex_label == std::vector<int>{2});
  CHECK(locsys_iso(c, compose_locsys(c, z3, gg, g), point_span(c, 0)));

  for (const auto& [name, k] : samples()) {
    INFO(name);
    for (const auto& s : all_locsys_spans(c, *k, 1)) {
      CHECK(locsys_violation(c, *k, s).empty());
      const auto left = compose_locsys(c, *k, identity_locsys(c, *k, s.span.left, s.left_label), s);
      const auto right = compose_locsys(c, *k, s, identity_locsys(c, *k, s.span.right, s.right_label));
      CHECK(locsys_iso(c, left, s));
      CHECK(locsys_iso(c, right, s));
    }
  }
  const auto arrow = InternalCategory::walking_arrow();
  const LocalSystemSpan m{make_span(c, c.identity(1), c.identity(1)), {0}, {2}, {1}};
  CHECK(locsys_violation(c, arrow, m).empty());
  CHECK_THROWS_AS(compose_locsys(c, arrow, m, m), MismatchError);
}

TEST_CASE("associativity of labelled composition") {
  const auto c = FinCategory::finset(4);
  for (const auto& [name, k] : samples()) {
    INFO(name);
    const auto spans = all_locsys_spans(c, *k, 2);
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const auto& s = spans[rng() % spans.size()];
      const auto& t = spans[rng() % spans.size()];
      const auto& u = spans[rng() % spans.size()];
      if (s.span.right != t.span.left || t.span.right != u.span.left || s.right_label != t.left_label ||
          t.right_label != u.left_label) {
        continue;
      }
      try {
        const auto a = compose_locsys(c, *k, compose_locsys(c, *k, s, t), u);
        const auto b = compose_locsys(c, *k, s, compose_locsys(c, *k, t, u));
        CHECK(locsys_iso(c, a, b));
        ++checked;
      } catch (const NoLimitError&) {
      }
    }
    CHECK(checked > 5);
  }
}

TEST_CASE("duals of labelled spans") {
  const auto c = FinCategory::finset(1);
  const auto z3 = InternalCategory::cyclic_group(3);
  const auto d = locsys_dual(c, z3, point_span(c, 1));
  CHECK(d.verdict == Verdict::verified);
  CHECK(d.dual.apex_label == std::vector<int>{2});
  for (const auto& s : all_locsys_spans(c, z3, 1)) {
    CHECK(locsys_dual(c, z3, s).verdict == Verdict::verified);
  }
  CHECK_THROWS_AS(locsys_dual(c, InternalCategory::walking_arrow(), point_span(c, 0)), NotGroupoidError);
}

TEST_CASE("invertibility and completeness with coefficients") {
  for (const auto& [name, k] : samples()) {
    INFO(name);
    const auto r = locsys_equivalence_check(finset(1), k, 1);
    CHECK(r.verdict == Verdict::verified);
    CHECK(r.classification_agrees);
    CHECK(r.rezk_equivalent == r.coefficients_complete);
    CHECK(r.coefficients_complete == only_trivial_isos(*k));
  }
}

TEST_CASE("comma objects") {
  const auto arrow = InternalCategory::walking_arrow();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> xi(rng() % 3);
    std::vector<int> eta(rng() % 3);
    for (auto& v : xi) {
      v = static_cast<int>(rng() % 2);
    }
    for (auto& v : eta) {
      v = static_cast<int>(rng() % 2);
    }
    long expected = 0;
    for (int a : xi) {
      for (int b : eta) {
        expected += homs(arrow, a, b);
      }
    }
    CHECK(static_cast<long>(comma_object(arrow, xi, eta).size()) == expected);
  }
}

TEST_CASE("mapping spaces with coefficients") {
  const auto z2 = share(InternalCategory::cyclic_group(2));
  const auto r = locsys_mapping_check(finset(1), z2, 1, {0}, 1, {0}, 1);
  CHECK(r.verdict == Verdict::verified);
  CHECK(r.comma_size == 2);
  const auto arrow = share(InternalCategory::walking_arrow());
  CHECK(locsys_mapping_check(finset(1), arrow, 1, {0}, 1, {1}, 1).verdict == Verdict::verified);
  CHECK(locsys_mapping_check(finset(1), arrow, 1, {1}, 1, {0}, 1).comma_size == 0);
}

TEST_CASE("Segal condition with coefficients") {
  for (const auto& [name, k] : samples()) {
    INFO(name);
    CHECK(locsys_segal_check(finset(1), k, 2, 1).verdict == Verdict::verified);
  }
}

TEST_CASE("labelled span JSON") {
  const auto c = FinCategory::finset(2);
  const auto z2 = InternalCategory::cyclic_group(2);
  for (const auto& s : all_locsys_spans(c, z2, 1)) {
    CHECK(locsys_from_json(c, to_json(c, s)) == s);
  }
  CHECK_THROWS_AS(locsys_from_json(c, nlohmann::json::object()), SchemaError);
}
