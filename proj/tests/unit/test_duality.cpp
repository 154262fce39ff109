#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "spanlab/duality.hpp"

using namespace spanlab;

namespace {

// fibers of A -> X x Y with more than one element
bool has_big_fiber(const FinCategory& c, const Span& s) {
  const auto& f = c.function(s.to_left);
  const auto& g = c.function(s.to_right);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (f[i] == f[j] && g[i] == g[j]) {
        return true;
      }
    }
  }
  return false;
}

} // namespace

TEST_CASE("every span is left adjoint to its reverse") {
  const auto c = FinCategory::finset(3);
  std::size_t n = 0;
  for (const auto& s : all_spans(c, 2)) {
    const auto w = build_adjunction(c, s);
    CHECK(w.right == reverse_span(s));
    CHECK(adjunction_data_violation(c, w).empty());
    CHECK(w.unit_target_size == oracle::pullback_size(c.function(s.to_right), c.function(s.to_right)));
    CHECK(w.counit_target_size == oracle::pullback_size(c.function(s.to_left), c.function(s.to_left)));
    const auto r = triangle_check(c, w);
    CHECK(r.verdict == Verdict::verified);
    CHECK(r.left_triangle.comparison.has_value());
    CHECK(r.right_triangle.comparison.has_value());
    ++n;
  }
  CHECK(static_cast<long>(n) == oracle::span_count(2));
}

TEST_CASE("damaged units and counits are refuted") {
  const auto c = FinCategory::finset(3);
  std::size_t refuted = 0;
  for (const auto& s : all_spans(c, 3)) {
    const auto w = build_adjunction(c, s);
    const auto bad_unit = corrupt_unit(c, w);
    const auto bad_counit = corrupt_counit(c, w);
    CHECK(fiber_swap(c, s).has_value() == has_big_fiber(c, s));
    CHECK(bad_unit.has_value() == has_big_fiber(c, s));
    if (bad_unit) {
      CHECK(adjunction_data_violation(c, *bad_unit).empty());
      CHECK(triangle_check(c, *bad_unit).verdict == Verdict::refuted);
      ++refuted;
    }
    if (bad_counit) {
      CHECK(triangle_check(c, *bad_counit).verdict == Verdict::refuted);
    }
  }
  CHECK(refuted > 0);
}

TEST_CASE("identity and empty spans") {
  const auto c = FinCategory::finset(2);
  for (int x = 0; x <= 2; ++x) {
    const auto w = build_adjunction(c, identity_span(c, x));
    CHECK(w.unit_target_size == static_cast<std::size_t>(x));
    CHECK(triangle_check(c, w).verdict == Verdict::verified);
  }
  const auto empty = make_span(c, c.from_function(0, 2, {}), c.from_function(0, 1, {}));
  const auto w = build_adjunction(c, empty);
  CHECK(w.unit_target_size == 0u);
  CHECK(triangle_check(c, w).verdict == Verdict::verified);
}

TEST_CASE("objects are self-dual") {
  for (int n = 1; n <= 4; ++n) {
    const auto c = FinCategory::finset(n);
    for (int x = 0; x <= n; ++x) {
      const auto d = object_duality_check(c, x);
      CHECK(d.verdict == Verdict::verified);
      CHECK(d.square_size == static_cast<std::size_t>(x * x));
      CHECK(d.first_comparison.has_value());
      CHECK(d.second_comparison.has_value());
      CHECK(span_iso(c, d.first_zigzag, identity_span(c, x)));
      CHECK(span_iso(c, d.second_zigzag, identity_span(c, x)));
    }
  }
}

TEST_CASE("witness JSON") {
  const auto c = FinCategory::finset(3);
  const auto s = make_span(c, c.from_function(3, 2, {0, 1, 1}), c.from_function(3, 2, {0, 0, 1}));
  const auto w = build_adjunction(c, s);
  const auto j = w.to_json(c);
  CHECK(j.contains("unit"));
  CHECK(j.contains("counit"));
  CHECK(triangle_check(c, w).to_json(c).contains("left_triangle"));
  CHECK(object_duality_check(c, 3).to_json(c).contains("square_size"));
}
