#include "spanlab/diagram.hpp"

#include <map>
#include <set>

#include "spanlab/errors.hpp"

namespace spanlab {

namespace {

bool typed(const FinCategory& c, const Poset& p, const Diagram& d, std::string* why) {
  if (d.objects.size() != p.size() || d.arrows.size() != p.covers().size()) {
    if (why != nullptr) {
      *why = "diagram has the wrong number of objects or arrows for its shape";
    }
    return false;
  }
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [a, b] = p.covers()[e];
    const int m = d.arrows[e];
    if (m < 0 || m >= c.morphism_count() || c.src(m) != d.objects[a] || c.tgt(m) != d.objects[b]) {
      if (why != nullptr) {
        *why = "arrow on cover " + std::to_string(a) + " -> " + std::to_string(b) + " has the wrong endpoints";
      }
      return false;
    }
  }
  return true;
}

// For each element: the minimal elements below it and the path maps from them.
struct Plan {
  std::vector<std::size_t> minimal;
  std::vector<std::vector<std::pair<std::size_t, int>>> sources;
};

Plan make_plan(const FinCategory& c, const Poset& p, const Diagram& d) {
  auto paths = path_table(c, p, d);
  if (!paths) {
    throw MismatchError("diagram is not functorial");
  }
  Plan plan;
  std::vector<std::size_t> index(p.size(), 0);
  for (std::size_t a = 0; a < p.size(); ++a) {
    bool minimal = true;
    for (std::size_t b = 0; b < p.size() && minimal; ++b) {
      if (b != a && p.leq(b, a)) {
        minimal = false;
      }
    }
    if (minimal) {
      index[a] = plan.minimal.size();
      plan.minimal.push_back(a);
    }
  }
  plan.sources.resize(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    for (std::size_t k = 0; k < plan.minimal.size(); ++k) {
      if (p.leq(plan.minimal[k], v)) {
        plan.sources[v].emplace_back(k, (*paths)(plan.minimal[k], v));
      }
    }
  }
  return plan;
}

// Odometer over a product of ranges; calls visit(digits) on each tuple in
// lexicographic order.
template <typename Visit>
void odometer(const std::vector<int>& ranges, Visit&& visit) {
  for (int r : ranges) {
    if (r == 0) {
      return;
    }
  }
  std::vector<int> digit(ranges.size(), 0);
  while (true) {
    visit(digit);
    std::size_t k = ranges.size();
    while (k > 0) {
      --k;
      if (++digit[k] < ranges[k]) {
        break;
      }
      digit[k] = 0;
      if (k == 0) {
        return;
      }
    }
    if (ranges.empty()) {
      return;
    }
  }
}

std::vector<std::vector<int>> finset_families(const FinCategory& c, const Poset& p, const Diagram& d) {
  const Plan plan = make_plan(c, p, d);
  std::vector<int> ranges;
  for (std::size_t a : plan.minimal) {
    ranges.push_back(*c.size(d.objects[a]));
  }
  std::vector<std::vector<int>> families;
  std::vector<int> family(p.size());
  odometer(ranges, [&](const std::vector<int>& x) {
    for (std::size_t v = 0; v < p.size(); ++v) {
      int value = -1;
      for (const auto& [k, m] : plan.sources[v]) {
        const int image = c.function(m)[x[k]];
        if (value < 0) {
          value = image;
        } else if (value != image) {
          return;
        }
      }
      family[v] = value;
    }
    families.push_back(family);
  });
  return families;
}

} // namespace

std::optional<PathTable> path_table(const FinCategory& c, const Poset& p, const Diagram& d) {
  if (!typed(c, p, d, nullptr)) {
    return std::nullopt;
  }
  const std::size_t n = p.size();
  std::vector<int> table(n * n, -1);
  for (std::size_t a : p.targets_first()) {
    table[a * n + a] = c.identity(d.objects[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a || !p.leq(a, b)) {
        continue;
      }
      int value = -1;
      for (std::size_t e : p.covers_from(a)) {
        const std::size_t mid = p.covers()[e].second;
        if (!p.leq(mid, b)) {
          continue;
        }
        const int candidate = c.compose(table[mid * n + b], d.arrows[e]);
        if (value < 0) {
          value = candidate;
        } else if (value != candidate) {
          return std::nullopt;
        }
      }
      table[a * n + b] = value;
    }
  }
  return PathTable(n, std::move(table));
}

ValidationReport check_functorial(const FinCategory& c, const Poset& p, const Diagram& d) {
  std::string why;
  if (!typed(c, p, d, &why)) {
    return {false, why};
  }
  if (!path_table(c, p, d)) {
    return {false, "some square of the diagram does not commute"};
  }
  return {};
}

int path_map(const FinCategory& c, const Poset& p, const Diagram& d, std::size_t a, std::size_t b) {
  int result = c.identity(d.objects[a]);
  std::size_t at = a;
  while (at != b) {
    bool moved = false;
    for (std::size_t e : p.covers_from(at)) {
      const std::size_t next = p.covers()[e].second;
      if (p.leq(next, b)) {
        result = c.compose(d.arrows[e], result);
        at = next;
        moved = true;
        break;
      }
    }
    if (!moved) {
      throw ShapeSpecError("no chain of covers from " + std::to_string(a) + " to " + std::to_string(b));
    }
  }
  return result;
}

Poset subposet(const Poset& p, const std::vector<std::size_t>& elements) {
  return Poset(elements.size(), [&](std::size_t a, std::size_t b) { return p.leq(elements[a], elements[b]); });
}

Diagram restrict_diagram(const FinCategory& c, const Poset& p, const Diagram& d,
                         const std::vector<std::size_t>& elements) {
  const Poset sub = subposet(p, elements);
  return pull_back(c, p, d, sub, elements);
}

Diagram pull_back(const FinCategory& c, const Poset& target_poset, const Diagram& d, const Poset& source_poset,
                  const std::vector<std::size_t>& map) {
  Diagram out;
  out.objects.reserve(source_poset.size());
  for (std::size_t i = 0; i < source_poset.size(); ++i) {
    out.objects.push_back(d.objects[map[i]]);
  }
  for (const auto& [a, b] : source_poset.covers()) {
    out.arrows.push_back(path_map(c, target_poset, d, map[a], map[b]));
  }
  return out;
}

bool is_cone(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone) {
  if (cone.legs.size() != p.size()) {
    return false;
  }
  for (std::size_t v = 0; v < p.size(); ++v) {
    const int m = cone.legs[v];
    if (m < 0 || m >= c.morphism_count() || c.src(m) != cone.apex || c.tgt(m) != d.objects[v]) {
      return false;
    }
  }
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [a, b] = p.covers()[e];
    if (c.compose(d.arrows[e], cone.legs[a]) != cone.legs[b]) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> cones_over(const FinCategory& c, const Poset& p, const Diagram& d, int apex) {
  const Plan plan = make_plan(c, p, d);
  std::vector<int> ranges;
  for (std::size_t a : plan.minimal) {
    ranges.push_back(static_cast<int>(c.hom(apex, d.objects[a]).size()));
  }
  std::vector<std::vector<int>> cones;
  std::vector<int> legs(p.size());
  odometer(ranges, [&](const std::vector<int>& x) {
    for (std::size_t v = 0; v < p.size(); ++v) {
      int value = -1;
      for (const auto& [k, m] : plan.sources[v]) {
        const int leg = c.compose(m, c.hom(apex, d.objects[plan.minimal[k]])[x[k]]);
        if (value < 0) {
          value = leg;
        } else if (value != leg) {
          return;
        }
      }
      legs[v] = value;
    }
    cones.push_back(legs);
  });
  return cones;
}

Limit limit(const FinCategory& c, const Poset& p, const Diagram& d) {
  if (!c.is_finset()) {
    return Limit{limit_by_search(c, p, d), {}};
  }
  Limit out;
  out.families = finset_families(c, p, d);
  const int count = static_cast<int>(out.families.size());
  if (count > c.finset_bound()) {
    throw NoLimitError("limit has " + std::to_string(count) + " elements, beyond finset:" +
                       std::to_string(c.finset_bound()));
  }
  out.cone.apex = count;
  for (std::size_t v = 0; v < p.size(); ++v) {
    std::vector<int> values(count);
    for (int k = 0; k < count; ++k) {
      values[k] = out.families[k][v];
    }
    out.cone.legs.push_back(c.from_function(count, *c.size(d.objects[v]), values));
  }
  return out;
}

std::optional<std::size_t> limit_cardinality(const FinCategory& c, const Poset& p, const Diagram& d) {
  if (!c.is_finset()) {
    return std::nullopt;
  }
  return finset_families(c, p, d).size();
}

Cone limit_by_search(const FinCategory& c, const Poset& p, const Diagram& d) {
  for (int o = 0; o < c.object_count(); ++o) {
    for (auto& legs : cones_over(c, p, d, o)) {
      Cone cone{o, std::move(legs)};
      if (is_limit_by_counting(c, p, d, cone)) {
        return cone;
      }
    }
  }
  throw NoLimitError("no universal cone exists for the diagram");
}

bool is_limit_by_counting(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone) {
  if (!is_cone(c, p, d, cone)) {
    return false;
  }
  for (int o = 0; o < c.object_count(); ++o) {
    const auto cones = cones_over(c, p, d, o);
    const auto& hom = c.hom(o, cone.apex);
    if (hom.size() != cones.size()) {
      return false;
    }
    std::set<std::vector<int>> targets(cones.begin(), cones.end());
    std::set<std::vector<int>> hit;
    for (int h : hom) {
      std::vector<int> legs(p.size());
      for (std::size_t v = 0; v < p.size(); ++v) {
        legs[v] = c.compose(cone.legs[v], h);
      }
      if (targets.count(legs) == 0 || !hit.insert(legs).second) {
        return false;
      }
    }
  }
  return true;
}

bool is_limit(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone) {
  if (!c.is_finset()) {
    return is_limit_by_counting(c, p, d, cone);
  }
  if (!is_cone(c, p, d, cone)) {
    return false;
  }
  const auto families = finset_families(c, p, d);
  const int n = *c.size(cone.apex);
  if (static_cast<int>(families.size()) != n) {
    return false;
  }
  std::set<std::vector<int>> seen;
  for (int x = 0; x < n; ++x) {
    std::vector<int> family(p.size());
    for (std::size_t v = 0; v < p.size(); ++v) {
      family[v] = c.function(cone.legs[v])[x];
    }
    if (!seen.insert(std::move(family)).second) {
      return false;
    }
  }
  return true;
}

int factor(const FinCategory& c, const Poset& p, const Diagram& /*d*/, const Limit& lim, const Cone& other) {
  if (!c.is_finset()) {
    for (int h : c.hom(other.apex, lim.cone.apex)) {
      bool ok = true;
      for (std::size_t v = 0; v < p.size() && ok; ++v) {
        ok = c.compose(lim.cone.legs[v], h) == other.legs[v];
      }
      if (ok) {
        return h;
      }
    }
    throw MismatchError("cone does not factor through the limit");
  }
  std::map<std::vector<int>, int> index;
  for (std::size_t k = 0; k < lim.families.size(); ++k) {
    index.emplace(lim.families[k], static_cast<int>(k));
  }
  const int n = *c.size(other.apex);
  std::vector<int> values(n);
  for (int x = 0; x < n; ++x) {
    std::vector<int> family(p.size());
    for (std::size_t v = 0; v < p.size(); ++v) {
      family[v] = c.function(other.legs[v])[x];
    }
    auto it = index.find(family);
    if (it == index.end()) {
      throw MismatchError("cone does not factor through the limit");
    }
    values[x] = it->second;
  }
  return c.from_function(n, lim.cone.apex, values);
}

const Poset& cospan_poset() {
  static const Poset p(3, [](std::size_t a, std::size_t b) { return a == b || b == 2; });
  return p;
}

Diagram cospan_diagram(const FinCategory& c, int f, int g) {
  if (c.tgt(f) != c.tgt(g)) {
    throw MismatchError("cospan legs " + c.morphism(f).label + " and " + c.morphism(g).label +
                        " have different targets");
  }
  return Diagram{{c.src(f), c.src(g), c.tgt(f)}, {f, g}};
}

Limit pullback(const FinCategory& c, int f, int g) {
  return limit(c, cospan_poset(), cospan_diagram(c, f, g));
}

} // namespace spanlab
