#include "spanlab/locsys.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "segal_impl.hpp"
#include "spanlab/errors.hpp"

namespace spanlab {

namespace {

using detail::concat_codes;
using detail::pull_code;

int size_of(const FinCategory& c, int o) { return *c.size(o); }

const std::vector<int>& fn(const FinCategory& c, int m) { return c.function(m); }

std::size_t length(const SigmaShape& sigma, std::size_t x) {
  const Interval iv = sigma.cell(x)[0];
  return iv.second - iv.first;
}

void require_one_direction(const SigmaShape& sigma) {
  if (sigma.directions() != 1) {
    throw ShapeSpecError("local systems are labelled in one direction only");
  }
}

void require_finset(const FinCategory& c) {
  if (!c.is_finset()) {
    throw SchemaError("local systems need a finite-set base");
  }
}

std::vector<int> int_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw SchemaError(std::string("field '") + key + "' must be an array of integers");
  }
  std::vector<int> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number_integer()) {
      throw SchemaError(std::string("field '") + key + "' must be an array of integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

int int_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw SchemaError(std::string("field '") + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

// Calls visit with every vector v, v[i] in options[i].
void product_of(const std::vector<std::vector<int>>& options, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> pick(options.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) {
      visit(pick);
      return;
    }
    for (int v : options[i]) {
      pick[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

std::vector<int> all_values(int n) {
  std::vector<int> out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

// Apex labellings compatible with fixed foot labels.
std::vector<std::vector<int>> apex_labellings(const FinCategory& c, const InternalCategory& k, const Span& s,
                                              const std::vector<int>& xi, const std::vector<int>& eta) {
  std::vector<std::vector<int>> options;
  for (int p = 0; p < size_of(c, s.apex); ++p) {
    std::vector<int> ok;
    for (int m = 0; m < k.c1; ++m) {
      if (k.src[m] == xi[fn(c, s.to_left)[p]] && k.tgt[m] == eta[fn(c, s.to_right)[p]]) {
        ok.push_back(m);
      }
    }
    options.push_back(std::move(ok));
  }
  std::vector<std::vector<int>> out;
  product_of(options, [&](const std::vector<int>& v) { out.push_back(v); });
  return out;
}

std::vector<std::vector<int>> foot_labellings(const InternalCategory& k, int size) {
  std::vector<std::vector<int>> out;
  product_of(std::vector<std::vector<int>>(size, all_values(k.c0)), [&](const std::vector<int>& v) { out.push_back(v); });
  return out;
}

std::vector<std::vector<int>> act(const FinCategory& c, const Code& g, const std::vector<std::vector<int>>& labels) {
  std::vector<std::vector<int>> out(labels.size());
  for (std::size_t x = 0; x < labels.size(); ++x) {
    out[x].resize(labels[x].size());
    const auto& f = fn(c, g[x]);
    for (std::size_t e = 0; e < labels[x].size(); ++e) {
      out[x][f[e]] = labels[x][e];
    }
  }
  return out;
}

} // namespace

// ------------------------------------------------------ internal categories

InternalCategory InternalCategory::discrete(int n) {
  InternalCategory k;
  k.c0 = k.c1 = n;
  k.src = k.tgt = k.ident = all_values(n);
  k.comp.assign(static_cast<std::size_t>(n) * n, -1);
  for (int g = 0; g < n; ++g) {
    k.comp[static_cast<std::size_t>(g) * n + g] = g;
  }
  k.inv = all_values(n);
  return k;
}

InternalCategory InternalCategory::cyclic_group(int n) {
  InternalCategory k;
  k.c0 = 1;
  k.c1 = n;
  k.src.assign(n, 0);
  k.tgt.assign(n, 0);
  k.ident = {0};
  k.comp.resize(static_cast<std::size_t>(n) * n);
  std::vector<int> inv(n);
  for (int g = 0; g < n; ++g) {
    for (int f = 0; f < n; ++f) {
      k.comp[static_cast<std::size_t>(g) * n + f] = (g + f) % n;
    }
    inv[g] = (n - g) % n;
  }
  k.inv = std::move(inv);
  return k;
}

InternalCategory InternalCategory::walking_arrow() {
  InternalCategory k;
  k.c0 = 2;
  k.c1 = 3;
  k.src = {0, 1, 0};
  k.tgt = {0, 1, 1};
  k.ident = {0, 1};
  k.comp.assign(9, -1);
  k.comp[0 * 3 + 0] = 0;
  k.comp[1 * 3 + 1] = 1;
  k.comp[2 * 3 + 0] = 2;
  k.comp[1 * 3 + 2] = 2;
  return k;
}

ValidationReport validate_internal(const InternalCategory& k) {
  auto fail = [](std::string why) { return ValidationReport{false, std::move(why)}; };
  const auto c0 = static_cast<std::size_t>(k.c0);
  const auto c1 = static_cast<std::size_t>(k.c1);
  if (k.c0 < 0 || k.c1 < 0 || k.src.size() != c1 || k.tgt.size() != c1 || k.ident.size() != c0 ||
      k.comp.size() != c1 * c1) {
    return fail("table sizes do not match C0 and C1");
  }
  auto in1 = [&](int m) { return m >= 0 && m < k.c1; };
  auto in0 = [&](int o) { return o >= 0 && o < k.c0; };
  for (int m = 0; m < k.c1; ++m) {
    if (!in0(k.src[m]) || !in0(k.tgt[m])) {
      return fail("endpoint of morphism " + std::to_string(m) + " out of range");
    }
  }
  for (int o = 0; o < k.c0; ++o) {
    if (!in1(k.ident[o]) || k.src[k.ident[o]] != o || k.tgt[k.ident[o]] != o) {
      return fail("identity of object " + std::to_string(o) + " is mistyped");
    }
  }
  for (int g = 0; g < k.c1; ++g) {
    for (int f = 0; f < k.c1; ++f) {
      const int gf = k.compose(g, f);
      if (!k.composable(g, f)) {
        if (gf != -1) {
          return fail("composite of non-composable pair (" + std::to_string(g) + ", " + std::to_string(f) + ")");
        }
        continue;
      }
      if (!in1(gf)) {
        return fail("composite of (" + std::to_string(g) + ", " + std::to_string(f) + ") is missing");
      }
      if (k.src[gf] != k.src[f] || k.tgt[gf] != k.tgt[g]) {
        return fail("composite of (" + std::to_string(g) + ", " + std::to_string(f) + ") is mistyped");
      }
    }
  }
  for (int f = 0; f < k.c1; ++f) {
    if (k.compose(k.ident[k.tgt[f]], f) != f || k.compose(f, k.ident[k.src[f]]) != f) {
      return fail("unit law fails at morphism " + std::to_string(f));
    }
  }
  for (int h = 0; h < k.c1; ++h) {
    for (int g = 0; g < k.c1; ++g) {
      if (!k.composable(h, g)) {
        continue;
      }
      for (int f = 0; f < k.c1; ++f) {
        if (k.composable(g, f) && k.compose(h, k.compose(g, f)) != k.compose(k.compose(h, g), f)) {
          return fail("associativity fails on (" + std::to_string(h) + ", " + std::to_string(g) + ", " +
                      std::to_string(f) + ")");
        }
      }
    }
  }
  if (k.inv) {
    if (k.inv->size() != c1) {
      return fail("inverse table has the wrong size");
    }
    for (int m = 0; m < k.c1; ++m) {
      const int n = (*k.inv)[m];
      if (!in1(n) || k.src[n] != k.tgt[m] || k.tgt[n] != k.src[m] || k.compose(n, m) != k.ident[k.src[m]] ||
          k.compose(m, n) != k.ident[k.tgt[m]]) {
        return fail("inverse law fails at morphism " + std::to_string(m));
      }
    }
  }
  return {};
}

InternalCategory internal_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchemaError("internal category must be a JSON object");
  }
  InternalCategory k;
  k.c0 = int_field(j, "C0");
  k.c1 = int_field(j, "C1");
  if (k.c0 < 0 || k.c1 < 0) {
    throw SchemaError("C0 and C1 must be non-negative");
  }
  k.src = int_list(j, "src");
  k.tgt = int_list(j, "tgt");
  k.ident = int_list(j, "id");
  k.comp.assign(static_cast<std::size_t>(k.c1) * k.c1, -1);
  if (!j.contains("comp") || !j.at("comp").is_array()) {
    throw SchemaError("field 'comp' must be an array of [g, f, gf] triples");
  }
  for (const auto& t : j.at("comp")) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
        !t[2].is_number_integer()) {
      throw SchemaError("field 'comp' must be an array of [g, f, gf] triples");
    }
    const int g = t[0].get<int>();
    const int f = t[1].get<int>();
    if (g < 0 || g >= k.c1 || f < 0 || f >= k.c1) {
      throw SchemaError("comp entry " + t.dump() + " out of range");
    }
    k.comp[static_cast<std::size_t>(g) * k.c1 + f] = t[2].get<int>();
  }
  if (j.contains("inv")) {
    k.inv = int_list(j, "inv");
  }
  return k;
}

nlohmann::json to_json(const InternalCategory& k) {
  nlohmann::json comp = nlohmann::json::array();
  for (int g = 0; g < k.c1; ++g) {
    for (int f = 0; f < k.c1; ++f) {
      if (k.compose(g, f) >= 0) {
        comp.push_back({g, f, k.compose(g, f)});
      }
    }
  }
  nlohmann::json out{{"C0", k.c0}, {"C1", k.c1}, {"src", k.src}, {"tgt", k.tgt}, {"id", k.ident}, {"comp", comp}};
  if (k.inv) {
    out["inv"] = *k.inv;
  }
  return out;
}

std::optional<int> internal_inverse(const InternalCategory& k, int m) {
  for (int n = 0; n < k.c1; ++n) {
    if (k.composable(n, m) && k.composable(m, n) && k.compose(n, m) == k.ident[k.src[m]] &&
        k.compose(m, n) == k.ident[k.tgt[m]]) {
      return n;
    }
  }
  return std::nullopt;
}

bool is_internal_groupoid(const InternalCategory& k) {
  for (int m = 0; m < k.c1; ++m) {
    if (!internal_inverse(k, m)) {
      return false;
    }
  }
  return true;
}

bool only_trivial_isos(const InternalCategory& k) {
  for (int m = 0; m < k.c1; ++m) {
    if (internal_inverse(k, m) && k.ident[k.src[m]] != m) {
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------ labelled spans

std::string locsys_violation(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s) {
  require_finset(c);
  const Span& sp = s.span;
  if (static_cast<int>(s.left_label.size()) != size_of(c, sp.left) ||
      static_cast<int>(s.apex_label.size()) != size_of(c, sp.apex) ||
      static_cast<int>(s.right_label.size()) != size_of(c, sp.right)) {
    return "label lists do not match the sizes of the span";
  }
  for (int o : s.left_label) {
    if (o < 0 || o >= k.c0) {
      return "left label out of range";
    }
  }
  for (int o : s.right_label) {
    if (o < 0 || o >= k.c0) {
      return "right label out of range";
    }
  }
  for (std::size_t p = 0; p < s.apex_label.size(); ++p) {
    const int m = s.apex_label[p];
    if (m < 0 || m >= k.c1) {
      return "apex label out of range";
    }
    if (k.src[m] != s.left_label[fn(c, sp.to_left)[p]]) {
      return "source of the label at apex element " + std::to_string(p) + " differs from the left label";
    }
    if (k.tgt[m] != s.right_label[fn(c, sp.to_right)[p]]) {
      return "target of the label at apex element " + std::to_string(p) + " differs from the right label";
    }
  }
  return {};
}

LocalSystemSpan identity_locsys(const FinCategory& c, const InternalCategory& k, int x, const std::vector<int>& xi) {
  LocalSystemSpan out{identity_span(c, x), xi, {}, xi};
  for (int o : xi) {
    out.apex_label.push_back(k.ident[o]);
  }
  return out;
}

LocalSystemSpan compose_locsys(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s,
                               const LocalSystemSpan& t) {
  require_finset(c);
  if (s.span.right != t.span.left || s.right_label != t.left_label) {
    throw MismatchError("cannot compose local systems: the shared foot or its labels differ");
  }
  const SpanComposite sc = compose_spans(c, s.span, t.span);
  LocalSystemSpan out{sc.span, s.left_label, {}, t.right_label};
  for (const auto& fam : sc.pullback.families) {
    out.apex_label.push_back(k.compose(t.apex_label[fam[1]], s.apex_label[fam[0]]));
  }
  return out;
}

std::optional<int> locsys_iso(const FinCategory& c, const LocalSystemSpan& s, const LocalSystemSpan& t) {
  if (s.left_label != t.left_label || s.right_label != t.right_label || s.span.left != t.span.left ||
      s.span.right != t.span.right) {
    return std::nullopt;
  }
  for (int h : c.hom(s.span.apex, t.span.apex)) {
    if (!c.is_iso(h) || c.compose(t.span.to_left, h) != s.span.to_left ||
        c.compose(t.span.to_right, h) != s.span.to_right) {
      continue;
    }
    bool ok = true;
    for (std::size_t p = 0; p < s.apex_label.size() && ok; ++p) {
      ok = t.apex_label[fn(c, h)[p]] == s.apex_label[p];
    }
    if (ok) {
      return h;
    }
  }
  return std::nullopt;
}

std::vector<LocalSystemSpan> all_locsys_spans(const FinCategory& c, const InternalCategory& k, int bound) {
  require_finset(c);
  std::vector<LocalSystemSpan> out;
  for (const Span& s : all_spans(c, effective_bound(c, bound))) {
    for (const auto& xi : foot_labellings(k, size_of(c, s.left))) {
      for (const auto& eta : foot_labellings(k, size_of(c, s.right))) {
        for (auto& a : apex_labellings(c, k, s, xi, eta)) {
          out.push_back({s, xi, std::move(a), eta});
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const FinCategory& c, const LocalSystemSpan& s) {
  return {{"left", size_of(c, s.span.left)},
          {"apex", size_of(c, s.span.apex)},
          {"right", size_of(c, s.span.right)},
          {"to_left", fn(c, s.span.to_left)},
          {"to_right", fn(c, s.span.to_right)},
          {"left_label", s.left_label},
          {"apex_label", s.apex_label},
          {"right_label", s.right_label}};
}

LocalSystemSpan locsys_from_json(const FinCategory& c, const nlohmann::json& j) {
  require_finset(c);
  if (!j.is_object()) {
    throw SchemaError("labelled span must be a JSON object");
  }
  const int x = int_field(j, "left");
  const int a = int_field(j, "apex");
  const int y = int_field(j, "right");
  for (int n : {x, a, y}) {
    if (n < 0 || n > c.finset_bound()) {
      throw SchemaError("span object of size " + std::to_string(n) + " is not in finset:" +
                        std::to_string(c.finset_bound()));
    }
  }
  const auto f = int_list(j, "to_left");
  const auto g = int_list(j, "to_right");
  auto check = [&](const std::vector<int>& v, int from, int to, const char* what) {
    if (static_cast<int>(v.size()) != from ||
        std::any_of(v.begin(), v.end(), [&](int e) { return e < 0 || e >= to; })) {
      throw SchemaError(std::string(what) + " is not a function " + std::to_string(from) + " -> " + std::to_string(to));
    }
  };
  check(f, a, x, "to_left");
  check(g, a, y, "to_right");
  LocalSystemSpan out{make_span(c, c.from_function(a, x, f), c.from_function(a, y, g)), {}, {}, {}};
  out.left_label = j.contains("left_label") ? int_list(j, "left_label") : std::vector<int>(x, 0);
  out.apex_label = j.contains("apex_label") ? int_list(j, "apex_label") : std::vector<int>(a, 0);
  out.right_label = j.contains("right_label") ? int_list(j, "right_label") : std::vector<int>(y, 0);
  return out;
}

// ------------------------------------------------------ labelled diagrams

std::vector<std::vector<int>> complete_labels(const FinCategory& c, const InternalCategory& k, const SigmaShape& sigma,
                                              const Diagram& d, const std::vector<std::vector<int>>& labels) {
  require_one_direction(sigma);
  const Poset& p = sigma.poset();
  std::vector<std::vector<int>> out = labels;
  out.resize(sigma.size());
  for (std::size_t x = 0; x < sigma.size(); ++x) {
    if (length(sigma, x) < 2) {
      continue;
    }
    const auto [a, b] = sigma.cell(x)[0];
    std::vector<const std::vector<int>*> maps;
    std::vector<std::size_t> edges;
    for (std::size_t i = a; i < b; ++i) {
      const std::size_t e = *sigma.index_of({{i, i + 1}});
      edges.push_back(e);
      maps.push_back(&fn(c, path_map(c, p, d, x, e)));
    }
    const int n = size_of(c, d.objects[x]);
    out[x].assign(n, -1);
    for (int el = 0; el < n; ++el) {
      int m = labels[edges[0]][(*maps[0])[el]];
      for (std::size_t i = 1; i < edges.size() && m >= 0; ++i) {
        const int next = labels[edges[i]][(*maps[i])[el]];
        m = k.composable(next, m) ? k.compose(next, m) : -1;
      }
      out[x][el] = m;
    }
  }
  return out;
}

std::string label_violation(const FinCategory& c, const InternalCategory& k, const SigmaShape& sigma,
                            const LabeledDiagram& d) {
  require_one_direction(sigma);
  if (d.labels.size() != sigma.size()) {
    return "one label list per cell expected";
  }
  for (std::size_t x = 0; x < sigma.size(); ++x) {
    const int range = length(sigma, x) == 0 ? k.c0 : k.c1;
    if (static_cast<int>(d.labels[x].size()) != size_of(c, d.diagram.objects[x])) {
      return "label list of cell " + to_string(sigma.cell(x)) + " has the wrong length";
    }
    for (int v : d.labels[x]) {
      if (v < 0 || v >= range) {
        return "label out of range at cell " + to_string(sigma.cell(x));
      }
    }
  }
  const Poset& p = sigma.poset();
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [x, y] = p.covers()[e];
    if (length(sigma, x) != 1 || length(sigma, y) != 0) {
      continue;
    }
    const bool to_source = sigma.cell(x)[0].first == sigma.cell(y)[0].first;
    const auto& f = fn(c, d.diagram.arrows[e]);
    for (std::size_t el = 0; el < d.labels[x].size(); ++el) {
      const int m = d.labels[x][el];
      if ((to_source ? k.src[m] : k.tgt[m]) != d.labels[y][f[el]]) {
        return "label at " + to_string(sigma.cell(x)) + " incompatible with " + to_string(sigma.cell(y));
      }
    }
  }
  if (complete_labels(c, k, sigma, d.diagram, d.labels) != d.labels) {
    return "labels on long cells are not the composites of the edge labels";
  }
  return {};
}

LabeledDiagram pull_labeled(const FinCategory& c, const InternalCategory& k, const SigmaShape& from,
                            const LabeledDiagram& d, const SigmaShape& to, const std::vector<std::size_t>& map) {
  require_one_direction(to);
  LabeledDiagram out{pull_back(c, from.poset(), d.diagram, to.poset(), map), {}};
  for (std::size_t y = 0; y < to.size(); ++y) {
    const std::size_t x = map[y];
    if (length(to, y) > 0 && length(from, x) == 0) {
      std::vector<int> ids;
      for (int o : d.labels[x]) {
        ids.push_back(k.ident[o]);
      }
      out.labels.push_back(std::move(ids));
    } else {
      out.labels.push_back(d.labels[x]);
    }
  }
  return out;
}

LabeledDiagram transport_labeled(const FinCategory& c, const SigmaShape& sigma, const LabeledDiagram& d,
                                 const Code& iso) {
  return {transport(c, sigma.poset(), d.diagram, iso), act(c, iso, d.labels)};
}

LabeledDiagram labeled_span_diagram(const LocalSystemSpan& s) {
  static const SigmaShape sigma({1});
  LabeledDiagram out{span_diagram(s.span), std::vector<std::vector<int>>(3)};
  out.labels[*sigma.index_of({{0, 0}})] = s.left_label;
  out.labels[*sigma.index_of({{0, 1}})] = s.apex_label;
  out.labels[*sigma.index_of({{1, 1}})] = s.right_label;
  return out;
}

// ------------------------------------------------------ labelled levels

struct LocalSystemLevel::Table {
  struct Entry {
    int component = 0;
    Code arrow;
  };
  std::vector<std::map<std::vector<std::vector<int>>, Entry>> by_plain;
};

LocalSystemLevel::~LocalSystemLevel() = default;
LocalSystemLevel::LocalSystemLevel(LocalSystemLevel&&) noexcept = default;

LocalSystemLevel::LocalSystemLevel(CategoryPtr base, std::shared_ptr<const InternalCategory> coefficients,
                                   std::size_t n, int bound)
    : base_(base), k_(std::move(coefficients)), table_(std::make_unique<Table>()) {
  require_finset(*base_);
  if (const auto v = validate_internal(*k_); !v.ok) {
    throw SchemaError("invalid internal category: " + v.violation);
  }
  plain_ = std::make_unique<SpanLevel>(base_, std::vector<std::size_t>{n}, bound, true);
  const FinCategory& c = *base_;
  const InternalCategory& k = *k_;
  const SigmaShape& sigma = plain_->sigma();
  const FinGroupoid& G = plain_->groupoid();
  const Poset& p = sigma.poset();

  std::vector<FinGroupoid::Object> objects;
  std::vector<FinGroupoid::Component> components;
  table_->by_plain.resize(plain_->size());
  for (std::size_t q = 0; q < plain_->size(); ++q) {
    const Diagram& d = plain_->diagram(q);
    const auto& auts = G.component(G.component_of(static_cast<int>(q))).automorphisms;
    auto& table = table_->by_plain[q];

    // vertex labels free, edge labels constrained by them
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> edges;
    for (std::size_t x = 0; x < sigma.size(); ++x) {
      if (length(sigma, x) < 2) {
        (length(sigma, x) == 0 ? vertices : edges).push_back(x);
      }
    }
    std::vector<std::vector<int>> labels(sigma.size());
    std::vector<std::vector<std::vector<int>>> found;
    std::function<void(std::size_t)> over_vertices;
    std::function<void(std::size_t)> over_edges = [&](std::size_t i) {
      if (i == edges.size()) {
        found.push_back(complete_labels(c, k, sigma, d, labels));
        return;
      }
      const std::size_t x = edges[i];
      const auto [a, b] = sigma.cell(x)[0];
      const std::size_t sx = *sigma.index_of({{a, a}});
      const std::size_t tx = *sigma.index_of({{b, b}});
      const auto& fs = fn(c, d.arrows[*p.cover_index(x, sx)]);
      const auto& ft = fn(c, d.arrows[*p.cover_index(x, tx)]);
      std::vector<std::vector<int>> options;
      for (int el = 0; el < size_of(c, d.objects[x]); ++el) {
        std::vector<int> ok;
        for (int m = 0; m < k.c1; ++m) {
          if (k.src[m] == labels[sx][fs[el]] && k.tgt[m] == labels[tx][ft[el]]) {
            ok.push_back(m);
          }
        }
        options.push_back(std::move(ok));
      }
      product_of(options, [&](const std::vector<int>& v) {
        labels[x] = v;
        over_edges(i + 1);
      });
    };
    over_vertices = [&](std::size_t i) {
      if (i == vertices.size()) {
        over_edges(0);
        return;
      }
      for (const auto& v : foot_labellings(k, size_of(c, d.objects[vertices[i]]))) {
        labels[vertices[i]] = v;
        over_vertices(i + 1);
      }
    };
    over_vertices(0);

    std::size_t local = 0;
    for (const auto& rep : found) {
      if (table.count(rep) != 0) {
        continue;
      }
      const int comp = static_cast<int>(components.size());
      FinGroupoid::Component component{static_cast<int>(objects.size()), {}};
      for (const Code& g : auts) {
        auto image = act(c, g, rep);
        if (image == rep) {
          component.automorphisms.push_back(g);
        }
        table.emplace(std::move(image), Table::Entry{comp, g});
      }
      objects.push_back({"d" + std::to_string(q) + "." + std::to_string(local++), comp,
                         detail::identity_code(c, d)});
      components.push_back(std::move(component));
      data_.push_back({d, rep});
      plain_of_.push_back(q);
    }
  }
  groupoid_ = std::make_unique<FinGroupoid>(base_, sigma.size(), std::move(objects), std::move(components));
}

std::optional<std::pair<std::size_t, Code>> LocalSystemLevel::classify(const LabeledDiagram& d) const {
  const auto hit = plain_->classify(d.diagram);
  if (!hit) {
    return std::nullopt;
  }
  const FinCategory& c = *base_;
  const auto& [q, kappa] = *hit;
  // labels seen from the representative
  std::vector<std::vector<int>> labels(d.labels.size());
  for (std::size_t x = 0; x < labels.size(); ++x) {
    const auto& f = fn(c, kappa[x]);
    for (std::size_t e = 0; e < f.size(); ++e) {
      labels[x].push_back(d.labels.at(x).at(f[e]));
    }
  }
  labels = complete_labels(c, *k_, sigma(), plain_->diagram(q), labels);
  const auto& table = table_->by_plain[q];
  const auto it = table.find(labels);
  if (it == table.end()) {
    return std::nullopt;
  }
  return std::make_pair(static_cast<std::size_t>(it->second.component), compose_codes(c, kappa, it->second.arrow));
}

nlohmann::json LocalSystemLevel::to_json(bool with_objects) const {
  nlohmann::json profile = nlohmann::json::array();
  for (const auto& [order, count] : pi0_aut_profile(*groupoid_)) {
    profile.push_back({order, count});
  }
  nlohmann::json out{{"arities", sigma().arities()},
                     {"bound", bound()},
                     {"classes", size()},
                     {"plain_classes", plain_->size()},
                     {"profile", profile}};
  if (with_objects) {
    nlohmann::json objs = nlohmann::json::array();
    for (std::size_t i = 0; i < data_.size(); ++i) {
      nlohmann::json cells = nlohmann::json::array();
      for (std::size_t x = 0; x < sigma().size(); ++x) {
        cells.push_back({{"cell", spanlab::to_string(sigma().cell(x))},
                         {"size", size_of(base(), data_[i].diagram.objects[x])},
                         {"labels", data_[i].labels[x]}});
      }
      objs.push_back({{"plain_class", plain_of_[i]},
                      {"automorphisms", groupoid_->aut_order(static_cast<int>(i))},
                      {"cells", cells}});
    }
    out["objects"] = objs;
  }
  return out;
}

template <>
struct detail::LevelOps<LocalSystemLevel> {
  using Datum = LabeledDiagram;
  static const LabeledDiagram& datum(const LocalSystemLevel& l, std::size_t k) { return l.datum(k); }
  static LabeledDiagram pull(const LocalSystemLevel& from, const LabeledDiagram& d, const SigmaShape& to,
                             const std::vector<std::size_t>& map) {
    return pull_labeled(from.base(), from.coefficients(), from.sigma(), d, to, map);
  }
  static LabeledDiagram transport(const LocalSystemLevel& l, const LabeledDiagram& d, const Code& iso) {
    return transport_labeled(l.base(), l.sigma(), d, iso);
  }
  static const Diagram& underlying(const LabeledDiagram& d) { return d.diagram; }
};

SegalDirectionReport locsys_segal_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k, std::size_t n,
                                        int bound) {
  try {
    const LocalSystemLevel level(base, k, n, bound);
    if (n < 2) {
      return detail::segal_direction(level, 0, level, level);
    }
    const LocalSystemLevel edges(base, k, 1, bound);
    const LocalSystemLevel vertices(base, k, 0, bound);
    return detail::segal_direction(level, 0, edges, vertices);
  } catch (const ResourceError& err) {
    SegalDirectionReport out;
    out.verdict = Verdict::inconclusive;
    out.witness = err.what();
    return out;
  }
}

// ------------------------------------------------------ equivalences

namespace {

bool identity_like(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s) {
  return locsys_iso(c, s, identity_locsys(c, k, s.span.left, s.left_label)).has_value();
}

} // namespace

std::optional<LocalSystemSpan> find_locsys_inverse(const FinCategory& c, const InternalCategory& k,
                                                   const LocalSystemSpan& s, int bound) {
  const int b = effective_bound(c, bound);
  const Span& sp = s.span;
  for (int a = 0; a <= b; ++a) {
    for (int g : c.hom(a, sp.right)) {
      for (int f : c.hom(a, sp.left)) {
        const Span t_span{sp.right, a, sp.left, g, f};
        for (auto& labels : apex_labellings(c, k, t_span, s.right_label, s.left_label)) {
          const LocalSystemSpan t{t_span, s.right_label, std::move(labels), s.left_label};
          try {
            if (identity_like(c, k, compose_locsys(c, k, s, t)) && identity_like(c, k, compose_locsys(c, k, t, s))) {
              return t;
            }
          } catch (const NoLimitError&) {
          }
        }
      }
    }
  }
  return std::nullopt;
}

nlohmann::json LocsysEquivalenceReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"spans", spans},
          {"invertible", invertible},
          {"classification_agrees", classification_agrees},
          {"classification_witness", classification_witness},
          {"rezk_equivalent", rezk_equivalent},
          {"coefficients_complete", coefficients_complete},
          {"equivalence", equivalence.to_json()}};
}

LocsysEquivalenceReport locsys_equivalence_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k,
                                                 int bound) {
  const FinCategory& c = *base;
  const int b = effective_bound(c, bound);
  LocsysEquivalenceReport out;
  out.classification_agrees = true;
  for (const auto& s : all_locsys_spans(c, *k, b)) {
    ++out.spans;
    bool predicate = c.is_iso(s.span.to_left) && c.is_iso(s.span.to_right);
    for (int m : s.apex_label) {
      predicate = predicate && internal_inverse(*k, m).has_value();
    }
    const bool invertible = find_locsys_inverse(c, *k, s, b).has_value();
    out.invertible += invertible ? 1 : 0;
    if (predicate != invertible && out.classification_agrees) {
      out.classification_agrees = false;
      out.classification_witness = to_json(c, s).dump() + (invertible ? " is invertible but fails the predicate"
                                                                       : " satisfies the predicate but has no inverse");
    }
  }

  // degeneracy into the invertible part of level 1
  const LocalSystemLevel v0(base, k, 0, b);
  const LocalSystemLevel v1(base, k, 1, b);
  std::vector<char> inv(v1.size(), 0);
  for (std::size_t e = 0; e < v1.size(); ++e) {
    const LabeledDiagram& d = v1.datum(e);
    const SigmaShape& sh = v1.sigma();
    const LocalSystemSpan s{span_from_diagram(d.diagram), d.labels[*sh.index_of({{0, 0}})],
                            d.labels[*sh.index_of({{0, 1}})], d.labels[*sh.index_of({{1, 1}})]};
    inv[e] = find_locsys_inverse(c, *k, s, b) ? 1 : 0;
  }
  std::vector<int> old;
  const FinGroupoid target = v1.groupoid().full_subgroupoid([&](int e) { return inv[e] != 0; }, &old);
  std::vector<int> to_target(v1.size(), -1);
  for (std::size_t i = 0; i < old.size(); ++i) {
    to_target[old[i]] = static_cast<int>(i);
  }
  const auto cells = direction_map(v1.sigma(), 0, SimplexMap(1, 0, {0, 0}));
  std::vector<Code> kappa;
  GroupoidMap deg;
  deg.source = &v0.groupoid();
  deg.target = &target;
  for (std::size_t x = 0; x < v0.size(); ++x) {
    const auto hit = v1.classify(pull_labeled(c, *k, v0.sigma(), v0.datum(x), v1.sigma(), cells));
    if (!hit || to_target[hit->first] < 0) {
      out.verdict = Verdict::refuted;
      out.classification_witness = "degenerate span of vertex class " + std::to_string(x) + " is not invertible";
      return out;
    }
    deg.object_image.push_back(to_target[hit->first]);
    kappa.push_back(hit->second);
  }
  deg.arrow_image = [&](int x, int y, const Code& u) {
    return compose_codes(c, invert_code(c, kappa[y]), compose_codes(c, pull_code(u, cells), kappa[x]));
  };
  out.equivalence = equivalent(deg);
  out.rezk_equivalent = out.equivalence.equivalent();
  out.coefficients_complete = only_trivial_isos(*k);
  out.verdict = verdict_of(out.classification_agrees && out.rezk_equivalent == out.coefficients_complete);
  return out;
}

// ------------------------------------------------------ duals

nlohmann::json LocsysDualReport::to_json(const FinCategory& c) const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"dual", spanlab::to_json(c, dual)},
          {"adjunction", adjunction.to_json(c)},
          {"triangles", triangles.to_json(c)},
          {"mirror_triangles", mirror_triangles.to_json(c)},
          {"violation", violation}};
}

LocsysDualReport locsys_dual(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s) {
  if (!is_internal_groupoid(k)) {
    throw NotGroupoidError("coefficients are not an internal groupoid");
  }
  if (const std::string v = locsys_violation(c, k, s); !v.empty()) {
    throw MismatchError(v);
  }
  auto inverse = [&](int m) { return k.inv ? (*k.inv)[m] : *internal_inverse(k, m); };
  LocsysDualReport out;
  out.dual = {reverse_span(s.span), s.right_label, {}, s.left_label};
  for (int m : s.apex_label) {
    out.dual.apex_label.push_back(inverse(m));
  }
  out.violation = locsys_violation(c, k, out.dual);
  out.adjunction = build_adjunction(c, s.span);
  const auto& u = out.adjunction.unit;
  const auto& w = out.adjunction.counit;
  // composite labels at the diagonal are identities on the foot labels
  for (int p = 0; p < size_of(c, u.apex) && out.violation.empty(); ++p) {
    const int label = k.compose(out.dual.apex_label[fn(c, u.second)[p]], s.apex_label[fn(c, u.first)[p]]);
    if (label != k.ident[s.left_label[fn(c, u.to_foot)[p]]]) {
      out.violation = "unit label at element " + std::to_string(p) + " is not an identity";
    }
  }
  for (int p = 0; p < size_of(c, w.apex) && out.violation.empty(); ++p) {
    const int label = k.compose(s.apex_label[fn(c, w.second)[p]], out.dual.apex_label[fn(c, w.first)[p]]);
    if (label != k.ident[s.right_label[fn(c, w.to_foot)[p]]]) {
      out.violation = "counit label at element " + std::to_string(p) + " is not an identity";
    }
  }
  out.triangles = triangle_check(c, out.adjunction);
  out.mirror_triangles = triangle_check(c, build_adjunction(c, out.dual.span));
  if (out.violation.empty() && out.triangles.verdict != Verdict::verified) {
    out.violation = out.triangles.violation;
  }
  if (out.violation.empty() && out.mirror_triangles.verdict != Verdict::verified) {
    out.violation = out.mirror_triangles.violation;
  }
  out.verdict = verdict_of(out.violation.empty());
  return out;
}

// ------------------------------------------------------ mapping fibers

std::vector<std::array<int, 3>> comma_object(const InternalCategory& k, const std::vector<int>& xi,
                                             const std::vector<int>& eta) {
  std::vector<std::array<int, 3>> out;
  for (int x = 0; x < static_cast<int>(xi.size()); ++x) {
    for (int y = 0; y < static_cast<int>(eta.size()); ++y) {
      for (int m = 0; m < k.c1; ++m) {
        if (k.src[m] == xi[x] && k.tgt[m] == eta[y]) {
          out.push_back({x, y, m});
        }
      }
    }
  }
  return out;
}

nlohmann::json LocsysMappingReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"comma_size", comma_size},
          {"fiber_classes", fiber_classes},
          {"slice_classes", slice_classes},
          {"equivalence", equivalence.to_json()}};
}

LocsysMappingReport locsys_mapping_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k, int x,
                                         const std::vector<int>& xi, int y, const std::vector<int>& eta, int bound) {
  const FinCategory& c = *base;
  require_finset(c);
  LocsysMappingReport out;
  const int b = effective_bound(c, bound);
  const LocalSystemLevel edges(base, k, 1, b);
  const LocalSystemLevel vertices(base, k, 0, b);
  const detail::VertexMaps vm = detail::vertex_maps(edges, 0, vertices);
  const FinGroupoid& E = edges.groupoid();
  const FinGroupoid& V = vertices.groupoid();
  const FinGroupoid VV = product(V, V);
  const FinGroupoid point = FinGroupoid::point(base);
  const int nv = static_cast<int>(vertices.size());

  auto constant = [&](int o, const std::vector<int>& label) {
    auto hit = vertices.classify({Diagram{{o}, {}}, {label}});
    if (!hit) {
      throw ResourceError("labelled object of size " + std::to_string(size_of(c, o)) + " exceeds the bound");
    }
    return *hit;
  };
  const auto [kx, kappa_x] = constant(x, xi);
  const auto [ky, kappa_y] = constant(y, eta);

  GroupoidMap fmap;
  fmap.source = &E;
  fmap.target = &VV;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    fmap.object_image.push_back(vm.s_class[e] * nv + vm.t_class[e]);
  }
  fmap.arrow_image = [&](int a, int bb, const Code& u) {
    return concat_codes(detail::vertex_arrow(V, vm, false, a, bb, u), detail::vertex_arrow(V, vm, true, a, bb, u));
  };
  GroupoidMap pmap;
  pmap.source = &point;
  pmap.target = &VV;
  const int px = static_cast<int>(kx) * nv + static_cast<int>(ky);
  pmap.object_image = {px};
  pmap.arrow_image = [&](int, int, const Code&) { return VV.identity(px); };
  const IsoComma fiber(fmap, pmap, false);
  out.fiber_classes = static_cast<std::size_t>(fiber.groupoid().component_count());

  // core of finite sets over the comma object: sorted maps A -> C_{xi,eta}
  const auto comma = comma_object(*k, xi, eta);
  out.comma_size = comma.size();
  std::vector<std::vector<int>> reps;
  std::vector<FinGroupoid::Object> objects;
  std::vector<FinGroupoid::Component> components;
  for (int a = 0; a <= b; ++a) {
    std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& phi) {
      if (static_cast<int>(phi.size()) == a) {
        FinGroupoid::Component comp{static_cast<int>(objects.size()), {}};
        std::vector<int> perm = all_values(a);
        do {
          bool ok = true;
          for (int i = 0; i < a && ok; ++i) {
            ok = phi[perm[i]] == phi[i];
          }
          if (ok) {
            comp.automorphisms.push_back({c.from_function(a, a, perm)});
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        objects.push_back({"s" + std::to_string(objects.size()), static_cast<int>(components.size()),
                           {c.identity(a)}});
        components.push_back(std::move(comp));
        reps.push_back(phi);
        return;
      }
      for (int v = phi.empty() ? 0 : phi.back(); v < static_cast<int>(comma.size()); ++v) {
        phi.push_back(v);
        rec(phi);
        phi.pop_back();
      }
    };
    std::vector<int> phi;
    rec(phi);
  }
  const FinGroupoid slice(base, 1, std::move(objects), std::move(components));
  out.slice_classes = static_cast<std::size_t>(slice.component_count());

  const SigmaShape& es = edges.sigma();
  const std::size_t cl = *es.index_of({{0, 0}});
  const std::size_t ca = *es.index_of({{0, 1}});
  const std::size_t cr = *es.index_of({{1, 1}});
  GroupoidMap phi_map;
  phi_map.source = &slice;
  phi_map.target = &fiber.groupoid();
  std::vector<Code> realize;
  for (std::size_t z = 0; z < reps.size(); ++z) {
    const auto& phi = reps[z];
    const int a = static_cast<int>(phi.size());
    std::vector<int> f;
    std::vector<int> g;
    std::vector<int> labels;
    for (int v : phi) {
      f.push_back(comma[v][0]);
      g.push_back(comma[v][1]);
      labels.push_back(comma[v][2]);
    }
    const LocalSystemSpan s{make_span(c, c.from_function(a, size_of(c, x), f), c.from_function(a, size_of(c, y), g)),
                            xi, labels, eta};
    const auto hit = edges.classify(labeled_span_diagram(s));
    if (!hit) {
      out.verdict = Verdict::refuted;
      out.equivalence.violation = "slice class " + std::to_string(z) + " has no counterpart among bounded edges";
      return out;
    }
    const auto& [e, tau] = *hit;
    const Code alpha_s = V.compose(V.inverse(kappa_x), V.compose(pull_code(tau, vm.s_cells), vm.s_kappa[e]));
    const Code alpha_t = V.compose(V.inverse(kappa_y), V.compose(pull_code(tau, vm.t_cells), vm.t_kappa[e]));
    const auto [comp, w] = fiber.locate(static_cast<int>(e), 0, concat_codes(alpha_s, alpha_t));
    phi_map.object_image.push_back(comp);
    realize.push_back(E.compose(tau, w));
  }
  phi_map.arrow_image = [&](int a, int bb, const Code& h) {
    Code edge(es.size());
    edge[cl] = c.identity(x);
    edge[cr] = c.identity(y);
    edge[ca] = h[0];
    return E.compose(E.inverse(realize[bb]), E.compose(edge, realize[a]));
  };
  out.equivalence = equivalent(phi_map);
  out.verdict = verdict_of(out.equivalence.equivalent());
  return out;
}

} // namespace spanlab
