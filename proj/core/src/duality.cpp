#include "spanlab/duality.hpp"

#include <array>
#include <utility>
#include <vector>

#include "spanlab/diagram.hpp"
#include "spanlab/errors.hpp"

namespace spanlab {

namespace {

struct FlatEdge {
  std::size_t from;
  std::size_t to;
  int arrow;
};

struct Flat {
  Poset poset;
  Diagram diagram;
};

// Depth-one poset: every edge is a cover.
Flat flat_diagram(const std::vector<int>& objects, const std::vector<FlatEdge>& edges) {
  const std::size_t n = objects.size();
  Poset p(n, [&](std::size_t a, std::size_t b) {
    if (a == b) {
      return true;
    }
    for (const auto& e : edges) {
      if (e.from == a && e.to == b) {
        return true;
      }
    }
    return false;
  });
  Diagram d{objects, std::vector<int>(p.covers().size(), -1)};
  for (const auto& e : edges) {
    d.arrows[*p.cover_index(e.from, e.to)] = e.arrow;
  }
  return {std::move(p), std::move(d)};
}

std::string name(const FinCategory& c, int m) { return c.morphism(m).label; }

nlohmann::json span_json(const FinCategory& c, const Span& s) {
  return {{"left", c.object_label(s.left)},
          {"apex", c.object_label(s.apex)},
          {"right", c.object_label(s.right)},
          {"to_left", name(c, s.to_left)},
          {"to_right", name(c, s.to_right)}};
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json opt_arrow(const FinCategory& c, const std::optional<int>& m) {
  return m ? nlohmann::json(name(c, *m)) : nlohmann::json(nullptr);
}

// (first, second) : P -> A factored through A x_Z A for the leg h : A -> Z.
std::pair<std::optional<int>, std::optional<int>> into_pullback(const FinCategory& c, int h, int apex, int first,
                                                                int second) {
  try {
    const Limit pb = pullback(c, h, h);
    const Cone cone{apex, {first, second, c.compose(h, first)}};
    return {pb.cone.apex, factor(c, cospan_poset(), cospan_diagram(c, h, h), pb, cone)};
  } catch (const NoLimitError&) {
    return {std::nullopt, std::nullopt};
  }
}

std::optional<std::size_t> pullback_size(const FinCategory& c, int h) {
  return limit_cardinality(c, cospan_poset(), cospan_diagram(c, h, h));
}

TwoCell finish(const FinCategory& c, int apex, int to_source, int to_target) {
  TwoCell out{apex, to_source, to_target, std::nullopt};
  if (to_source == to_target && c.is_iso(to_source)) {
    out.comparison = to_source;
  }
  return out;
}

} // namespace

nlohmann::json AdjunctionWitness::to_json(const FinCategory& c) const {
  return {{"left", span_json(c, left)},
          {"right", span_json(c, right)},
          {"unit",
           {{"apex", c.object_label(unit.apex)},
            {"to_foot", name(c, unit.to_foot)},
            {"first", name(c, unit.first)},
            {"second", name(c, unit.second)},
            {"target_size", opt_json(unit_target_size)},
            {"target", unit_target ? nlohmann::json(c.object_label(*unit_target)) : nlohmann::json(nullptr)},
            {"diagonal", opt_arrow(c, unit_diagonal)}}},
          {"counit",
           {{"apex", c.object_label(counit.apex)},
            {"first", name(c, counit.first)},
            {"second", name(c, counit.second)},
            {"to_foot", name(c, counit.to_foot)},
            {"target_size", opt_json(counit_target_size)},
            {"target", counit_target ? nlohmann::json(c.object_label(*counit_target)) : nlohmann::json(nullptr)},
            {"diagonal", opt_arrow(c, counit_diagonal)}}}};
}

AdjunctionWitness build_adjunction(const FinCategory& c, const Span& s) {
  AdjunctionWitness w;
  w.left = s;
  w.right = reverse_span(s);
  const int id = c.identity(s.apex);
  w.unit = {s.apex, s.to_left, id, id};
  w.counit = {s.apex, id, id, s.to_right};
  w.unit_target_size = pullback_size(c, s.to_right);
  w.counit_target_size = pullback_size(c, s.to_left);
  std::tie(w.unit_target, w.unit_diagonal) = into_pullback(c, s.to_right, s.apex, id, id);
  std::tie(w.counit_target, w.counit_diagonal) = into_pullback(c, s.to_left, s.apex, id, id);
  return w;
}

std::string adjunction_data_violation(const FinCategory& c, const AdjunctionWitness& w) {
  const Span& s = w.left;
  const int f = s.to_left;
  const int g = s.to_right;
  const auto& u = w.unit;
  const auto& v = w.counit;
  auto typed = [&](int m, int from, int to) { return c.src(m) == from && c.tgt(m) == to; };
  if (w.right != reverse_span(s)) {
    return "right adjoint is not the reversed span";
  }
  if (!typed(u.to_foot, u.apex, s.left) || !typed(u.first, u.apex, s.apex) || !typed(u.second, u.apex, s.apex)) {
    return "unit maps are mistyped";
  }
  if (!typed(v.to_foot, v.apex, s.right) || !typed(v.first, v.apex, s.apex) || !typed(v.second, v.apex, s.apex)) {
    return "counit maps are mistyped";
  }
  if (c.compose(g, u.first) != c.compose(g, u.second)) {
    return "unit does not land in A x_Y A";
  }
  if (c.compose(f, u.first) != u.to_foot || c.compose(f, u.second) != u.to_foot) {
    return "unit does not commute with the legs to X";
  }
  if (c.compose(f, v.first) != c.compose(f, v.second)) {
    return "counit does not start in A x_X A";
  }
  if (c.compose(g, v.first) != v.to_foot || c.compose(g, v.second) != v.to_foot) {
    return "counit does not commute with the legs to Y";
  }
  return {};
}

std::optional<int> fiber_swap(const FinCategory& c, const Span& s) {
  for (int m : c.hom(s.apex, s.apex)) {
    if (!c.is_identity(m) && c.compose(s.to_left, m) == s.to_left && c.compose(s.to_right, m) == s.to_right) {
      return m;
    }
  }
  return std::nullopt;
}

std::optional<AdjunctionWitness> corrupt_unit(const FinCategory& c, const AdjunctionWitness& w) {
  const auto sigma = fiber_swap(c, w.left);
  if (!sigma || w.unit.apex != w.left.apex) {
    return std::nullopt;
  }
  AdjunctionWitness out = w;
  out.unit.second = c.compose(*sigma, out.unit.second);
  std::tie(out.unit_target, out.unit_diagonal) =
      into_pullback(c, w.left.to_right, out.unit.apex, out.unit.first, out.unit.second);
  return out;
}

std::optional<AdjunctionWitness> corrupt_counit(const FinCategory& c, const AdjunctionWitness& w) {
  const auto sigma = fiber_swap(c, w.left);
  if (!sigma || w.counit.apex != w.left.apex) {
    return std::nullopt;
  }
  AdjunctionWitness out = w;
  out.counit.second = c.compose(*sigma, out.counit.second);
  std::tie(out.counit_target, out.counit_diagonal) =
      into_pullback(c, w.left.to_left, out.counit.apex, out.counit.first, out.counit.second);
  return out;
}

nlohmann::json TwoCell::to_json(const FinCategory& c) const {
  return {{"apex", c.object_label(apex)},
          {"to_source", name(c, to_source)},
          {"to_target", name(c, to_target)},
          {"comparison", opt_arrow(c, comparison)}};
}

nlohmann::json TriangleReport::to_json(const FinCategory& c) const {
  nlohmann::json out{{"verdict", spanlab::to_string(verdict)}, {"violation", violation}};
  if (left_triangle.apex >= 0) {
    out["left_triangle"] = left_triangle.to_json(c);
  }
  if (right_triangle.apex >= 0) {
    out["right_triangle"] = right_triangle.to_json(c);
  }
  return out;
}

TriangleReport triangle_check(const FinCategory& c, const AdjunctionWitness& w) {
  TriangleReport out;
  out.violation = adjunction_data_violation(c, w);
  if (!out.violation.empty()) {
    out.verdict = Verdict::error;
    return out;
  }
  const Span& s = w.left;
  const auto& u = w.unit;
  const auto& v = w.counit;
  const int f = s.to_left;
  const int g = s.to_right;
  const std::vector<int> objects{u.apex, v.apex, s.apex, s.left, s.right};
  enum : std::size_t { U, V, M, X, Y };

  // s => s o rbar o s => s: u2(u) = v1(v), legs v2 and u1.
  const Flat first = flat_diagram(objects, {{U, M, u.second},
                                            {V, M, v.first},
                                            {U, X, u.to_foot},
                                            {V, X, c.compose(f, v.second)},
                                            {U, Y, c.compose(g, u.first)},
                                            {V, Y, v.to_foot}});
  // sbar => sbar o s o sbar => sbar: u1(u) = v2(v), legs v1 and u2.
  const Flat second = flat_diagram(objects, {{U, M, u.first},
                                             {V, M, v.second},
                                             {U, X, u.to_foot},
                                             {V, X, c.compose(f, v.first)},
                                             {U, Y, c.compose(g, u.second)},
                                             {V, Y, v.to_foot}});
  const Limit l1 = limit(c, first.poset, first.diagram);
  const Limit l2 = limit(c, second.poset, second.diagram);
  out.left_triangle = finish(c, l1.cone.apex, c.compose(v.second, l1.cone.legs[V]), c.compose(u.first, l1.cone.legs[U]));
  out.right_triangle =
      finish(c, l2.cone.apex, c.compose(v.first, l2.cone.legs[V]), c.compose(u.second, l2.cone.legs[U]));
  if (!out.left_triangle.comparison) {
    out.violation = "first triangle composite is not isomorphic to the identity 2-cell of the span";
  } else if (!out.right_triangle.comparison) {
    out.violation = "second triangle composite is not isomorphic to the identity 2-cell of the reversed span";
  }
  out.verdict = verdict_of(out.violation.empty());
  return out;
}

nlohmann::json DualityWitness::to_json(const FinCategory& c) const {
  return {{"object", c.object_label(object)},
          {"verdict", spanlab::to_string(verdict)},
          {"square_size", opt_json(square_size)},
          {"first_zigzag", span_json(c, first_zigzag)},
          {"second_zigzag", span_json(c, second_zigzag)},
          {"first_comparison", opt_arrow(c, first_comparison)},
          {"second_comparison", opt_arrow(c, second_comparison)},
          {"violation", violation}};
}

DualityWitness object_duality_check(const FinCategory& c, int x) {
  DualityWitness out;
  out.object = x;
  const int id = c.identity(x);
  {
    const Flat pair = flat_diagram({x, x}, {});
    out.square_size = limit_cardinality(c, pair.poset, pair.diagram);
  }
  // Apexes of the two tensored spans, then the three coordinates of X x X x X.
  enum : std::size_t { P1, P2, Q1, Q2, T1, T2, T3 };
  const std::vector<int> objects(7, x);
  auto zigzag = [&](const std::vector<FlatEdge>& edges, std::size_t l, std::size_t r) {
    const Flat flat = flat_diagram(objects, edges);
    const Limit lim = limit(c, flat.poset, flat.diagram);
    return Span{x, lim.cone.apex, x, lim.cone.legs[l], lim.cone.legs[r]};
  };
  // (ev x id) o (id x coev): (x, y) |-> (x, y, y) meets (z, w) |-> (z, z, w).
  out.first_zigzag =
      zigzag({{P1, T1, id}, {P2, T2, id}, {P2, T3, id}, {Q1, T1, id}, {Q1, T2, id}, {Q2, T3, id}}, P1, Q2);
  // (id x ev) o (coev x id): (y, x) |-> (y, y, x) meets (z, w) |-> (z, w, w).
  out.second_zigzag =
      zigzag({{P1, T1, id}, {P1, T2, id}, {P2, T3, id}, {Q1, T1, id}, {Q2, T2, id}, {Q2, T3, id}}, P2, Q1);
  const Span ident = identity_span(c, x);
  out.first_comparison = span_iso(c, out.first_zigzag, ident);
  out.second_comparison = span_iso(c, out.second_zigzag, ident);
  if (!out.first_comparison) {
    out.violation = "first zigzag is not isomorphic to the identity span";
  } else if (!out.second_comparison) {
    out.violation = "second zigzag is not isomorphic to the identity span";
  }
  out.verdict = verdict_of(out.violation.empty());
  return out;
}

} // namespace spanlab
