#include "spanlab/spans.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spanlab/errors.hpp"
#include "segal_impl.hpp"

namespace spanlab {

namespace {

using namespace detail;

const SigmaShape& sigma_one() {
  static const SigmaShape shape({1});
  return shape;
}

bool isomorphic(const FinCategory& c, int a, int b) {
  for (int m : c.hom(a, b)) {
    if (c.is_iso(m)) {
      return true;
    }
  }
  return false;
}

// Lambda cells above x, as parent indices in increasing order.
std::vector<std::size_t> lambda_above(const SigmaShape& sigma, std::size_t x) {
  std::vector<std::size_t> out;
  for (std::size_t y : sigma.poset().up_set(x)) {
    if (sigma.in_lambda(y)) {
      out.push_back(y);
    }
  }
  return out;
}

nlohmann::json profile_json(const FinGroupoid& g) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [order, count] : pi0_aut_profile(g)) {
    out.push_back({order, count});
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------- spans

Span make_span(const FinCategory& c, int to_left, int to_right) {
  if (c.src(to_left) != c.src(to_right)) {
    throw MismatchError("span legs " + c.morphism(to_left).label + " and " + c.morphism(to_right).label +
                        " have different sources");
  }
  return {c.tgt(to_left), c.src(to_left), c.tgt(to_right), to_left, to_right};
}

Span identity_span(const FinCategory& c, int x) {
  const int id = c.identity(x);
  return {x, x, x, id, id};
}

Span reverse_span(const Span& s) { return {s.right, s.apex, s.left, s.to_right, s.to_left}; }

SpanComposite compose_spans(const FinCategory& c, const Span& s, const Span& t) {
  if (s.right != t.left) {
    throw MismatchError("cannot compose spans: foot " + c.object_label(s.right) + " differs from " +
                        c.object_label(t.left));
  }
  Limit pb = pullback(c, s.to_right, t.to_left);
  Span out{s.left, pb.cone.apex, t.right, c.compose(s.to_left, pb.cone.legs[0]),
           c.compose(t.to_right, pb.cone.legs[1])};
  return {out, std::move(pb)};
}

std::optional<int> span_iso(const FinCategory& c, const Span& s, const Span& t) {
  if (s.left != t.left || s.right != t.right) {
    return std::nullopt;
  }
  for (int h : c.hom(s.apex, t.apex)) {
    if (c.is_iso(h) && c.compose(t.to_left, h) == s.to_left && c.compose(t.to_right, h) == s.to_right) {
      return h;
    }
  }
  return std::nullopt;
}

Diagram span_diagram(const Span& s) {
  const SigmaShape& sh = sigma_one();
  const std::size_t l = *sh.index_of({{0, 0}});
  const std::size_t a = *sh.index_of({{0, 1}});
  const std::size_t r = *sh.index_of({{1, 1}});
  Diagram d{std::vector<int>(3), std::vector<int>(2)};
  d.objects[l] = s.left;
  d.objects[a] = s.apex;
  d.objects[r] = s.right;
  d.arrows[*sh.poset().cover_index(a, l)] = s.to_left;
  d.arrows[*sh.poset().cover_index(a, r)] = s.to_right;
  return d;
}

Span span_from_diagram(const Diagram& d) {
  const SigmaShape& sh = sigma_one();
  const std::size_t l = *sh.index_of({{0, 0}});
  const std::size_t a = *sh.index_of({{0, 1}});
  const std::size_t r = *sh.index_of({{1, 1}});
  return {d.objects[l], d.objects[a], d.objects[r], d.arrows[*sh.poset().cover_index(a, l)],
          d.arrows[*sh.poset().cover_index(a, r)]};
}

std::vector<Span> all_spans(const FinCategory& c, int bound) {
  auto fits = [&](int o) { return !c.has_sizes() || *c.size(o) <= bound; };
  std::vector<Span> out;
  for (int a = 0; a < c.object_count(); ++a) {
    if (!fits(a)) {
      continue;
    }
    for (int x = 0; x < c.object_count(); ++x) {
      if (!fits(x)) {
        continue;
      }
      for (int y = 0; y < c.object_count(); ++y) {
        if (!fits(y)) {
          continue;
        }
        for (int f : c.hom(a, x)) {
          for (int g : c.hom(a, y)) {
            out.push_back({x, a, y, f, g});
          }
        }
      }
    }
  }
  return out;
}

// ----------------------------------------------------- Cartesian diagrams

nlohmann::json CartesianCertificate::to_json(const SigmaShape& sigma) const {
  nlohmann::json out = nlohmann::json::array();
  for (const Entry& e : entries) {
    out.push_back({{"cell", to_string(sigma.cell(e.cell))}, {"apex", e.cone.apex}, {"legs", e.cone.legs}});
  }
  return out;
}

Diagram lambda_part(const FinCategory& c, const SigmaShape& sigma, const Diagram& d) {
  const LambdaShape lam(sigma);
  return pull_back(c, sigma.poset(), d, lam.poset(), lam.parent_indices());
}

KanExtension kan_extend(const FinCategory& c, const SigmaShape& sigma, const Diagram& lambda_data) {
  const LambdaShape lam(sigma);
  const Poset& p = sigma.poset();
  if (lambda_data.objects.size() != lam.size() || lambda_data.arrows.size() != lam.poset().covers().size()) {
    throw MismatchError("lambda data does not match the shape");
  }
  KanExtension out;
  Diagram& d = out.diagram;
  d.objects.assign(p.size(), -1);
  d.arrows.assign(p.covers().size(), -1);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    d.objects[lam.to_parent(i)] = lambda_data.objects[i];
  }
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [a, b] = p.covers()[e];
    const auto la = lam.from_parent(a);
    const auto lb = lam.from_parent(b);
    if (la && lb) {
      d.arrows[e] = lambda_data.arrows[*lam.poset().cover_index(*la, *lb)];
    }
  }

  struct Filled {
    std::vector<std::size_t> elems;
    Poset sub;
    Diagram data;
    Limit lim;
  };
  std::map<std::size_t, Filled> filled;
  for (std::size_t x : p.targets_first()) {
    if (sigma.in_lambda(x)) {
      continue;
    }
    Filled f;
    f.elems = lambda_above(sigma, x);
    f.sub = subposet(p, f.elems);
    std::vector<std::size_t> local;
    for (std::size_t y : f.elems) {
      local.push_back(*lam.from_parent(y));
    }
    f.data = pull_back(c, lam.poset(), lambda_data, f.sub, local);
    try {
      f.lim = limit(c, f.sub, f.data);
    } catch (const NoLimitError& err) {
      throw NoLimitError("no limit for cell " + to_string(sigma.cell(x)) + ": " + err.what());
    }
    d.objects[x] = f.lim.cone.apex;
    for (std::size_t e : p.covers_from(x)) {
      const std::size_t y = p.covers()[e].second;
      if (sigma.in_lambda(y)) {
        const auto pos = std::lower_bound(f.elems.begin(), f.elems.end(), y) - f.elems.begin();
        d.arrows[e] = f.lim.cone.legs[static_cast<std::size_t>(pos)];
        continue;
      }
      const Filled& g = filled.at(y);
      Cone other{f.lim.cone.apex, {}};
      for (std::size_t z : g.elems) {
        const auto pos = std::lower_bound(f.elems.begin(), f.elems.end(), z) - f.elems.begin();
        other.legs.push_back(f.lim.cone.legs[static_cast<std::size_t>(pos)]);
      }
      d.arrows[e] = factor(c, g.sub, g.data, g.lim, other);
    }
    out.certificate.entries.push_back({x, f.lim.cone});
    filled.emplace(x, std::move(f));
  }
  return out;
}

CartesianReport is_cartesian(const FinCategory& c, const SigmaShape& sigma, const Diagram& d) {
  CartesianReport out;
  const Poset& p = sigma.poset();
  const ValidationReport functorial = check_functorial(c, p, d);
  if (!functorial.ok) {
    out.reason = functorial.violation;
    return out;
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (sigma.in_lambda(x)) {
      continue;
    }
    const auto elems = lambda_above(sigma, x);
    const Poset sub = subposet(p, elems);
    const Diagram data = pull_back(c, p, d, sub, elems);
    Cone cone{d.objects[x], {}};
    for (std::size_t y : elems) {
      cone.legs.push_back(path_map(c, p, d, x, y));
    }
    if (!is_limit(c, sub, data, cone)) {
      out.failing_cell = x;
      out.reason = "cell " + to_string(sigma.cell(x)) + " is not the limit of the lambda cells above it";
      out.certificate.entries.clear();
      return out;
    }
    out.certificate.entries.push_back({x, std::move(cone)});
  }
  out.cartesian = true;
  return out;
}

namespace {

bool natural_at(const FinCategory& c, const Poset& p, const Diagram& from, const Diagram& to, const Code& iso,
                std::size_t x, int h) {
  for (std::size_t e : p.covers_from(x)) {
    const std::size_t y = p.covers()[e].second;
    if (c.compose(to.arrows[e], h) != c.compose(iso[y], from.arrows[e])) {
      return false;
    }
  }
  return true;
}

// lambda cells are numbered in increasing parent order
Code lift_lambda_code(const SigmaShape& sigma, const Code& lambda_iso) {
  Code iso(sigma.size(), -1);
  std::size_t i = 0;
  for (std::size_t x = 0; x < sigma.size(); ++x) {
    if (sigma.in_lambda(x)) {
      iso[x] = lambda_iso[i++];
    }
  }
  return iso;
}

} // namespace

std::optional<Code> extend_iso(const FinCategory& c, const SigmaShape& sigma, const Diagram& from, const Diagram& to,
                               const Code& lambda_iso) {
  const Poset& p = sigma.poset();
  Code iso = lift_lambda_code(sigma, lambda_iso);
  for (std::size_t x : p.targets_first()) {
    if (sigma.in_lambda(x)) {
      continue;
    }
    for (int h : c.hom(from.objects[x], to.objects[x])) {
      if (c.is_iso(h) && natural_at(c, p, from, to, iso, x, h)) {
        iso[x] = h;
        break;
      }
    }
    if (iso[x] < 0) {
      return std::nullopt;
    }
  }
  return iso;
}

std::size_t count_extensions(const FinCategory& c, const SigmaShape& sigma, const Diagram& from, const Diagram& to,
                             const Code& lambda_iso) {
  const Poset& p = sigma.poset();
  Code iso = lift_lambda_code(sigma, lambda_iso);
  std::vector<std::size_t> order;
  for (std::size_t x : p.targets_first()) {
    if (!sigma.in_lambda(x)) {
      order.push_back(x);
    }
  }
  std::function<std::size_t(std::size_t)> count = [&](std::size_t i) -> std::size_t {
    if (i == order.size()) {
      return 1;
    }
    const std::size_t x = order[i];
    std::size_t total = 0;
    for (int h : c.hom(from.objects[x], to.objects[x])) {
      if (c.is_iso(h) && natural_at(c, p, from, to, iso, x, h)) {
        iso[x] = h;
        total += count(i + 1);
      }
    }
    iso[x] = -1;
    return total;
  };
  return count(0);
}

Diagram transport(const FinCategory& c, const Poset& p, const Diagram& d, const Code& iso) {
  Diagram out;
  for (std::size_t x = 0; x < p.size(); ++x) {
    out.objects.push_back(c.tgt(iso[x]));
  }
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [a, b] = p.covers()[e];
    out.arrows.push_back(c.compose(iso[b], c.compose(d.arrows[e], c.inverse(iso[a]))));
  }
  return out;
}

Diagram inflate_cell(const FinCategory& c, const Poset& p, const Diagram& d, std::size_t cell) {
  if (!c.is_finset()) {
    throw Error("inflate_cell needs a finite-set base");
  }
  const int n = *c.size(d.objects[cell]);
  if (n == 0 || n + 1 > c.finset_bound()) {
    throw ResourceError("cannot inflate a set of size " + std::to_string(n) + " inside finset:" +
                        std::to_string(c.finset_bound()));
  }
  std::vector<int> onto{0};
  std::vector<int> section{0};
  for (int i = 0; i < n; ++i) {
    onto.push_back(i);
  }
  for (int i = 1; i < n; ++i) {
    section.push_back(i + 1);
  }
  const int q = c.from_function(n + 1, n, onto);
  const int s = c.from_function(n, n + 1, section);
  Diagram out = d;
  out.objects[cell] = n + 1;
  for (std::size_t e = 0; e < p.covers().size(); ++e) {
    const auto [a, b] = p.covers()[e];
    if (a == cell) {
      out.arrows[e] = c.compose(d.arrows[e], q);
    } else if (b == cell) {
      out.arrows[e] = c.compose(s, d.arrows[e]);
    }
  }
  return out;
}

// ------------------------------------------------------------ span levels

int effective_bound(const FinCategory& c, int bound) {
  if (bound < 0) {
    throw ShapeSpecError("bound must be non-negative");
  }
  return c.is_finset() ? std::min(bound, c.finset_bound()) : bound;
}

std::vector<std::size_t> direction_map(const SigmaShape& source, std::size_t r, const SimplexMap& phi) {
  std::vector<SimplexMap> phis;
  for (std::size_t q = 0; q < source.directions(); ++q) {
    phis.push_back(q == r ? phi : SimplexMap::identity(source.arities()[q]));
  }
  return sigma_map(std::span<const SimplexMap>(phis), source).image;
}

SpanLevel::SpanLevel(CategoryPtr base, std::vector<std::size_t> arities, int bound, bool keep_tables,
                     std::function<bool(const PartialDiagram&)> restriction)
    : base_(std::move(base)), sigma_(std::move(arities)), lambda_(sigma_), bound_(effective_bound(*base_, bound)) {
  const FinCategory& c = *base_;
  const Poset& lp = lambda_.poset();
  const std::vector<std::size_t> order = fill_order(lp);
  std::vector<std::size_t> position(lp.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[order[i]] = i;
  }

  // each non-lambda cell is checked as soon as the lambda cells above it are filled
  struct Check {
    std::vector<std::size_t> elems;
    Poset sub;
  };
  std::vector<std::vector<Check>> checks(order.size());
  for (std::size_t x = 0; x < sigma_.size(); ++x) {
    if (sigma_.in_lambda(x)) {
      continue;
    }
    Check ch;
    std::size_t last = 0;
    for (std::size_t y : lambda_above(sigma_, x)) {
      const std::size_t ly = *lambda_.from_parent(y);
      ch.elems.push_back(ly);
      last = std::max(last, position[ly]);
    }
    ch.sub = subposet(lp, ch.elems);
    checks[last].push_back(std::move(ch));
  }
  const int b = bound_;
  DiagramClassifier::Options opt;
  opt.bound = b;
  opt.keep_tables = keep_tables;
  opt.prune = [&c, &lp, &checks, b, restriction](const PartialDiagram& pd) {
    for (const Check& ch : checks[pd.assigned.size() - 1]) {
      const Diagram data = pull_back(c, lp, pd.diagram, ch.sub, ch.elems);
      try {
        const Limit lim = limit(c, ch.sub, data);
        if (c.has_sizes() && *c.size(lim.cone.apex) > b) {
          return true;
        }
      } catch (const NoLimitError&) {
        return true;
      }
    }
    return restriction && restriction(pd);
  };
  classifier_ = std::make_unique<DiagramClassifier>(base_, lp, std::move(opt));
  nodes_ = classifier_->nodes_visited();

  std::vector<FinGroupoid::Object> objects;
  std::vector<FinGroupoid::Component> components;
  lambda_to_level_.assign(classifier_->class_count(), -1);
  for (std::size_t k = 0; k < classifier_->class_count(); ++k) {
    KanExtension ext;
    try {
      ext = kan_extend(c, sigma_, classifier_->representative(k));
    } catch (const NoLimitError&) {
      continue;
    }
    if (!within_bound(c, ext.diagram, bound_)) {
      continue;
    }
    FinGroupoid::Component comp;
    comp.representative = static_cast<int>(diagrams_.size());
    for (const Code& g : classifier_->automorphisms(k)) {
      auto full = extend_iso(c, sigma_, ext.diagram, ext.diagram, g);
      if (!full) {
        throw Error("automorphism of lambda data does not extend to its Kan extension");
      }
      comp.automorphisms.push_back(std::move(*full));
    }
    lambda_to_level_[k] = static_cast<int>(diagrams_.size());
    objects.push_back({"d" + std::to_string(diagrams_.size()), static_cast<int>(diagrams_.size()),
                       identity_code(c, ext.diagram)});
    components.push_back(std::move(comp));
    diagrams_.push_back(std::move(ext.diagram));
  }
  groupoid_ = std::make_unique<FinGroupoid>(base_, sigma_.size(), std::move(objects), std::move(components));
}

std::optional<std::pair<std::size_t, Code>> SpanLevel::classify(const Diagram& d) const {
  const auto hit =
      classifier_->classify(pull_back(*base_, sigma_.poset(), d, lambda_.poset(), lambda_.parent_indices()));
  if (!hit) {
    return std::nullopt;
  }
  const int k = lambda_to_level_[hit->first];
  if (k < 0) {
    return std::nullopt;
  }
  auto iso = extend_iso(*base_, sigma_, diagrams_[k], d, hit->second);
  if (!iso) {
    return std::nullopt;
  }
  return std::make_pair(static_cast<std::size_t>(k), std::move(*iso));
}

void SpanLevel::replace_diagram(std::size_t k, Diagram d) { diagrams_.at(k) = std::move(d); }

nlohmann::json SpanLevel::to_json(bool with_objects) const {
  nlohmann::json out{{"arities", sigma_.arities()},
                     {"bound", bound_},
                     {"classes", diagrams_.size()},
                     {"profile", profile_json(*groupoid_)}};
  if (with_objects) {
    const FinCategory& c = *base_;
    nlohmann::json objs = nlohmann::json::array();
    for (std::size_t k = 0; k < diagrams_.size(); ++k) {
      nlohmann::json cells = nlohmann::json::object();
      for (std::size_t x = 0; x < sigma_.size(); ++x) {
        cells[to_string(sigma_.cell(x))] = c.object_label(diagrams_[k].objects[x]);
      }
      nlohmann::json arrows = nlohmann::json::array();
      const Poset& p = sigma_.poset();
      for (std::size_t e = 0; e < p.covers().size(); ++e) {
        arrows.push_back({to_string(sigma_.cell(p.covers()[e].first)), to_string(sigma_.cell(p.covers()[e].second)),
                          c.morphism(diagrams_[k].arrows[e]).label});
      }
      objs.push_back({{"cells", cells}, {"arrows", arrows}, {"aut_order", groupoid_->aut_order(static_cast<int>(k))}});
    }
    out["objects"] = objs;
  }
  return out;
}

std::optional<std::size_t> corrupt_level(SpanLevel& level) {
  const FinCategory& c = level.base();
  if (!c.is_finset()) {
    return std::nullopt;
  }
  Cell top;
  for (std::size_t n : level.arities()) {
    top.push_back({0, n});
  }
  const std::size_t t = *level.sigma().index_of(top);
  if (level.sigma().in_lambda(t)) {
    return std::nullopt;
  }
  for (std::size_t k = 0; k < level.size(); ++k) {
    const int n = *c.size(level.diagram(k).objects[t]);
    if (n >= 1 && n + 1 <= c.finset_bound()) {
      level.replace_diagram(k, inflate_cell(c, level.sigma().poset(), level.diagram(k), t));
      return k;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- Segal

nlohmann::json SegalDirectionReport::to_json() const {
  return {{"direction", direction},
          {"verdict", spanlab::to_string(verdict)},
          {"level_classes", level_classes},
          {"target_classes", target_classes},
          {"target_in_bound", target_in_bound},
          {"excluded", excluded},
          {"equivalence", equivalence.to_json()},
          {"witness", witness}};
}

nlohmann::json SegalReport::to_json() const {
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& d : directions) {
    dirs.push_back(d.to_json());
  }
  return {{"verdict", spanlab::to_string(verdict)}, {"directions", dirs}, {"note", note}};
}

template <>
struct detail::LevelOps<SpanLevel> {
  using Datum = Diagram;
  static const Diagram& datum(const SpanLevel& l, std::size_t k) { return l.diagram(k); }
  static Diagram pull(const SpanLevel& from, const Diagram& d, const SigmaShape& to,
                      const std::vector<std::size_t>& map) {
    return pull_back(from.base(), from.sigma().poset(), d, to.poset(), map);
  }
  static Diagram transport(const SpanLevel& l, const Diagram& d, const Code& iso) {
    return spanlab::transport(l.base(), l.sigma().poset(), d, iso);
  }
  static const Diagram& underlying(const Diagram& d) { return d; }
};

SegalDirectionReport segal_check_direction(const SpanLevel& level, std::size_t r, const SpanLevel& edges,
                                           const SpanLevel& vertices) {
  return detail::segal_direction(level, r, edges, vertices);
}


SegalReport segal_check(CategoryPtr base, const std::vector<std::size_t>& arities, int bound, bool corrupt) {
  SegalReport out;
  try {
    SpanLevel level(base, arities, bound);
    if (corrupt) {
      const auto k = corrupt_level(level);
      out.note = k ? "top cell of level class " + std::to_string(*k) + " inflated" : "no class could be corrupted";
    }
    out.verdict = Verdict::verified;
    for (std::size_t r = 0; r < arities.size(); ++r) {
      SegalDirectionReport d;
      if (arities[r] < 2) {
        d = segal_check_direction(level, r, level, level);
      } else {
        const SpanLevel edges(base, with_arity(arities, r, 1), bound, true);
        const SpanLevel vertices(base, with_arity(arities, r, 0), bound, true);
        d = segal_check_direction(level, r, edges, vertices);
      }
      out.verdict = worst(out.verdict, d.verdict);
      out.directions.push_back(std::move(d));
    }
  } catch (const ResourceError& err) {
    out.verdict = Verdict::inconclusive;
    out.note = err.what();
  }
  return out;
}

// ------------------------------------------------------- invertible spans

namespace {

bool is_identity_like(const FinCategory& c, const Span& s) {
  return s.left == s.right && s.to_left == s.to_right && c.is_iso(s.to_left);
}

} // namespace

std::optional<Span> find_inverse_span(const FinCategory& c, const Span& s, int bound) {
  for (int b = 0; b < c.object_count(); ++b) {
    if (c.has_sizes() && *c.size(b) > bound) {
      continue;
    }
    for (int f : c.hom(b, s.right)) {
      for (int g : c.hom(b, s.left)) {
        const Span t{s.right, b, s.left, f, g};
        try {
          if (is_identity_like(c, compose_spans(c, s, t).span) && is_identity_like(c, compose_spans(c, t, s).span)) {
            return t;
          }
        } catch (const NoLimitError&) {
        }
      }
    }
  }
  return std::nullopt;
}

nlohmann::json InvertibleReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)}, {"spans", spans}, {"invertible", invertible}, {"witness", witness}};
}

InvertibleReport invertible_span_check(const FinCategory& c, int bound) {
  const int b = effective_bound(c, bound);
  InvertibleReport out;
  out.verdict = Verdict::verified;
  for (const Span& s : all_spans(c, b)) {
    ++out.spans;
    const bool legs_iso = c.is_iso(s.to_left) && c.is_iso(s.to_right);
    const bool invertible = find_inverse_span(c, s, b).has_value();
    out.invertible += invertible ? 1 : 0;
    if (legs_iso != invertible && out.verdict == Verdict::verified) {
      out.verdict = Verdict::refuted;
      out.witness = c.object_label(s.left) + " <-" + c.morphism(s.to_left).label + "- " + c.object_label(s.apex) +
                    " -" + c.morphism(s.to_right).label + "-> " + c.object_label(s.right) +
                    (invertible ? " has an inverse but a non-invertible leg" : " has invertible legs but no inverse");
    }
  }
  return out;
}

// ------------------------------------------------------------ completeness

nlohmann::json CompletenessReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"object_classes", object_classes},
          {"span_classes", span_classes},
          {"invertible_classes", invertible_classes},
          {"equivalence", equivalence.to_json()}};
}

CompletenessReport completeness_check(CategoryPtr base, int bound) {
  const FinCategory& c = *base;
  const SpanLevel objects(base, {0}, bound, true);
  const SpanLevel spans(base, {1}, bound, true);
  CompletenessReport out;
  out.object_classes = objects.size();
  out.span_classes = spans.size();

  std::vector<char> invertible(spans.size(), 0);
  for (std::size_t k = 0; k < spans.size(); ++k) {
    invertible[k] = find_inverse_span(c, span_from_diagram(spans.diagram(k)), spans.bound()).has_value() ? 1 : 0;
    out.invertible_classes += invertible[k];
  }
  std::vector<int> old;
  const FinGroupoid sub = spans.groupoid().full_subgroupoid([&](int k) { return invertible[k] != 0; }, &old);
  std::vector<int> new_index(spans.size(), -1);
  for (std::size_t i = 0; i < old.size(); ++i) {
    new_index[old[i]] = static_cast<int>(i);
  }

  const auto deg = direction_map(spans.sigma(), 0, SimplexMap(1, 0, {0, 0}));
  std::vector<Code> kappa;
  GroupoidMap m;
  m.source = &objects.groupoid();
  m.target = &sub;
  for (std::size_t x = 0; x < objects.size(); ++x) {
    const Diagram d = pull_back(c, objects.sigma().poset(), objects.diagram(x), spans.sigma().poset(), deg);
    auto hit = spans.classify(d);
    if (!hit || new_index[hit->first] < 0) {
      out.verdict = Verdict::refuted;
      out.equivalence.violation = "the identity span on object class " + std::to_string(x) + " is not invertible";
      return out;
    }
    m.object_image.push_back(new_index[hit->first]);
    kappa.push_back(std::move(hit->second));
  }
  m.arrow_image = [&](int x, int y, const Code& u) {
    return sub.compose(sub.inverse(kappa[y]), sub.compose(pull_code(u, deg), kappa[x]));
  };
  out.equivalence = equivalent(m);
  out.verdict = verdict_of(out.equivalence.equivalent());
  return out;
}

// --------------------------------------------------------- mapping checks

int SliceCategory::lift(int s, int t, int m) const {
  for (int h : category->hom(s, t)) {
    if (underlying[h] == m) {
      return h;
    }
  }
  return -1;
}

SliceCategory slice_over_pair(const FinCategory& c, int x, int y) {
  SliceCategory out;
  std::vector<std::string> labels;
  for (int a = 0; a < c.object_count(); ++a) {
    for (int f : c.hom(a, x)) {
      for (int g : c.hom(a, y)) {
        labels.push_back("(" + c.object_label(a) + "," + c.morphism(f).label + "," + c.morphism(g).label + ")");
        out.apex.push_back(a);
        out.to_x.push_back(f);
        out.to_y.push_back(g);
      }
    }
  }
  const int n = static_cast<int>(labels.size());
  std::vector<Morphism> morphisms;
  std::map<std::array<int, 3>, int> index;
  std::vector<int> identities(n, -1);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      for (int m : c.hom(out.apex[s], out.apex[t])) {
        if (c.compose(out.to_x[t], m) == out.to_x[s] && c.compose(out.to_y[t], m) == out.to_y[s]) {
          const int id = static_cast<int>(morphisms.size());
          index[{s, t, m}] = id;
          morphisms.push_back({c.morphism(m).label + "@" + labels[s], s, t});
          out.underlying.push_back(m);
          if (s == t && c.is_identity(m)) {
            identities[s] = id;
          }
        }
      }
    }
  }
  std::vector<std::array<int, 3>> triples;
  for (int g = 0; g < static_cast<int>(morphisms.size()); ++g) {
    for (int f = 0; f < static_cast<int>(morphisms.size()); ++f) {
      if (morphisms[f].tgt != morphisms[g].src) {
        continue;
      }
      const int m = c.compose(out.underlying[g], out.underlying[f]);
      triples.push_back({g, f, index.at({morphisms[f].src, morphisms[g].tgt, m})});
    }
  }
  out.category = std::make_shared<const FinCategory>(labels, std::move(morphisms), identities, triples);
  return out;
}

nlohmann::json MappingReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"fiber_classes", fiber_classes},
          {"slice_classes", slice_classes},
          {"equivalence", equivalence.to_json()},
          {"note", note}};
}

MappingReport mapping_category_check(CategoryPtr base, int x, int y, const std::vector<std::size_t>& m, int bound) {
  const FinCategory& c = *base;
  if (x < 0 || x >= c.object_count() || y < 0 || y >= c.object_count()) {
    throw ShapeSpecError("object index out of range");
  }
  MappingReport out;
  std::vector<std::size_t> e_arities{1};
  e_arities.insert(e_arities.end(), m.begin(), m.end());
  std::vector<std::size_t> v_arities = with_arity(e_arities, 0, 0);
  const std::vector<std::size_t> s_arities = m.empty() ? std::vector<std::size_t>{0} : m;

  // only edges whose vertex rows are constant up to isomorphism can meet the point
  const SigmaShape e_shape(e_arities);
  const LambdaShape e_lambda(e_shape);
  auto row = [&](std::size_t lambda_cell) { return e_lambda.cell(lambda_cell)[0]; };
  auto restriction = [&c, &e_lambda, row, x, y](const PartialDiagram& pd) {
    const std::size_t cell = pd.assigned.back();
    const Interval iv = row(cell);
    if (iv.first != iv.second) {
      return false;
    }
    if (!isomorphic(c, pd.diagram.objects[cell], iv.first == 0 ? x : y)) {
      return true;
    }
    for (std::size_t e : e_lambda.poset().covers_from(cell)) {
      if (row(e_lambda.poset().covers()[e].second) == iv && !c.is_iso(pd.diagram.arrows[e])) {
        return true;
      }
    }
    return false;
  };
  const SpanLevel edges(base, e_arities, bound, true, restriction);
  const SpanLevel vertices(base, v_arities, bound, true);
  const VertexMaps vm = vertex_maps(edges, 0, vertices);
  const FinGroupoid& E = edges.groupoid();
  const FinGroupoid& V = vertices.groupoid();
  const FinGroupoid VV = product(V, V);
  const FinGroupoid point = FinGroupoid::point(base);

  auto constant = [&](int o) {
    const Poset& p = vertices.sigma().poset();
    Diagram d{std::vector<int>(p.size(), o), std::vector<int>(p.covers().size(), c.identity(o))};
    auto hit = vertices.classify(d);
    if (!hit) {
      throw ResourceError("object " + c.object_label(o) + " exceeds the bound");
    }
    return *hit;
  };
  const auto [kx, kappa_x] = constant(x);
  const auto [ky, kappa_y] = constant(y);
  const int nv = static_cast<int>(vertices.size());

  GroupoidMap fmap;
  fmap.source = &E;
  fmap.target = &VV;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    fmap.object_image.push_back(vm.s_class[e] * nv + vm.t_class[e]);
  }
  fmap.arrow_image = [&](int a, int b, const Code& u) {
    return concat_codes(vertex_arrow(V, vm, false, a, b, u), vertex_arrow(V, vm, true, a, b, u));
  };
  GroupoidMap pmap;
  pmap.source = &point;
  pmap.target = &VV;
  const int px = static_cast<int>(kx) * nv + static_cast<int>(ky);
  pmap.object_image = {px};
  pmap.arrow_image = [&](int, int, const Code&) { return VV.identity(px); };
  const IsoComma fiber(fmap, pmap, false);
  out.fiber_classes = static_cast<std::size_t>(fiber.groupoid().component_count());

  const SliceCategory slice = slice_over_pair(c, x, y);
  const SpanLevel slice_level(slice.category, s_arities, bound, false);
  out.slice_classes = slice_level.size();
  const SigmaShape& ss = slice_level.sigma();

  // cell of the slice shape under each edge cell
  std::vector<std::size_t> rest(e_shape.size(), 0);
  for (std::size_t i = 0; i < e_shape.size(); ++i) {
    if (!m.empty()) {
      rest[i] = *ss.index_of(Cell(e_shape.cell(i).begin() + 1, e_shape.cell(i).end()));
    }
  }
  const Poset& ep = e_shape.poset();
  auto to_edge_code = [&](const Code& h) {
    Code out_code;
    for (std::size_t i = 0; i < e_shape.size(); ++i) {
      const Interval iv = e_shape.cell(i)[0];
      out_code.push_back(iv.first != iv.second ? slice.underlying[h[rest[i]]] : c.identity(iv.first == 0 ? x : y));
    }
    return out_code;
  };
  auto to_edge_diagram = [&](const Diagram& sd) {
    Diagram d;
    for (std::size_t i = 0; i < e_shape.size(); ++i) {
      const Interval iv = e_shape.cell(i)[0];
      d.objects.push_back(iv.first != iv.second ? slice.apex[sd.objects[rest[i]]] : (iv.first == 0 ? x : y));
    }
    for (const auto& [a, b] : ep.covers()) {
      const Interval ia = e_shape.cell(a)[0];
      const Interval ib = e_shape.cell(b)[0];
      if (ia == ib) {
        if (ia.first != ia.second) {
          const int sm = sd.arrows[*ss.poset().cover_index(rest[a], rest[b])];
          d.arrows.push_back(slice.underlying[sm]);
        } else {
          d.arrows.push_back(c.identity(ia.first == 0 ? x : y));
        }
      } else {
        const int so = sd.objects[rest[a]];
        d.arrows.push_back(ib.first == 0 ? slice.to_x[so] : slice.to_y[so]);
      }
    }
    return d;
  };

  GroupoidMap phi;
  phi.source = &slice_level.groupoid();
  phi.target = &fiber.groupoid();
  std::vector<Code> realize;
  for (std::size_t z = 0; z < slice_level.size(); ++z) {
    const Diagram d = to_edge_diagram(slice_level.diagram(z));
    auto hit = edges.classify(d);
    if (!hit) {
      out.verdict = Verdict::refuted;
      out.equivalence.violation = "slice class " + std::to_string(z) + " has no counterpart among bounded edges";
      return out;
    }
    const auto& [e, tau] = *hit;
    const Code alpha_s = V.compose(V.inverse(kappa_x), V.compose(pull_code(tau, vm.s_cells), vm.s_kappa[e]));
    const Code alpha_t = V.compose(V.inverse(kappa_y), V.compose(pull_code(tau, vm.t_cells), vm.t_kappa[e]));
    const auto [comp, w] = fiber.locate(static_cast<int>(e), 0, concat_codes(alpha_s, alpha_t));
    phi.object_image.push_back(comp);
    realize.push_back(E.compose(tau, w));
  }
  phi.arrow_image = [&](int a, int b, const Code& h) {
    return E.compose(E.inverse(realize[b]), E.compose(to_edge_code(h), realize[a]));
  };
  out.equivalence = equivalent(phi);
  out.verdict = verdict_of(out.equivalence.equivalent());
  if (!c.is_finset() || (c.size(x) && c.size(y) && *c.size(x) * *c.size(y) > c.finset_bound())) {
    out.note = "product of the two objects is not an object of the base; the slice is taken over the pair";
  }
  return out;
}

// ------------------------------------------------------- underlying levels

TwoFoldLevel underlying_2fold_level(const SpanLevel& level) {
  if (level.arities().size() != 2) {
    throw ShapeSpecError("underlying 2-fold levels need two directions");
  }
  const FinCategory& c = level.base();
  const SigmaShape& sh = level.sigma();
  const Poset& p = sh.poset();
  TwoFoldLevel out;
  std::vector<char> keep(level.size(), 0);
  for (std::size_t k = 0; k < level.size(); ++k) {
    bool ok = true;
    for (std::size_t e = 0; e < p.covers().size() && ok; ++e) {
      const auto [a, b] = p.covers()[e];
      const Interval ia = sh.cell(a)[0];
      if (ia.first == ia.second && ia == sh.cell(b)[0]) {
        ok = c.is_iso(level.diagram(k).arrows[e]);
      }
    }
    keep[k] = ok ? 1 : 0;
  }
  std::vector<int> old;
  out.groupoid = std::make_unique<FinGroupoid>(
      level.groupoid().full_subgroupoid([&](int k) { return keep[k] != 0; }, &old));
  out.classes.assign(old.begin(), old.end());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> two_fold_span_profile(const FinCategory& c, int bound) {
  if (!c.is_finset()) {
    throw Error("two_fold_span_profile needs a finite-set base");
  }
  const int b = effective_bound(c, bound);
  // tuple: X Y A B C, a1 a2 b1 b2 c1 c2
  using Tuple = std::array<int, 11>;
  std::set<Tuple> seen;
  std::map<std::size_t, std::size_t> profile;
  for (int X = 0; X <= b; ++X) {
    for (int Y = 0; Y <= b; ++Y) {
      for (int A = 0; A <= b; ++A) {
        for (int B = 0; B <= b; ++B) {
          for (int C = 0; C <= b; ++C) {
            std::vector<std::array<int, 5>> group;
            for (int gx : c.automorphisms(X)) {
              for (int gy : c.automorphisms(Y)) {
                for (int ga : c.automorphisms(A)) {
                  for (int gb : c.automorphisms(B)) {
                    for (int gc : c.automorphisms(C)) {
                      group.push_back({gx, gy, ga, gb, gc});
                    }
                  }
                }
              }
            }
            for (int a1 : c.hom(A, X)) {
              for (int a2 : c.hom(A, Y)) {
                for (int b1 : c.hom(B, X)) {
                  for (int b2 : c.hom(B, Y)) {
                    for (int c1 : c.hom(C, A)) {
                      for (int c2 : c.hom(C, B)) {
                        if (c.compose(a1, c1) != c.compose(b1, c2) || c.compose(a2, c1) != c.compose(b2, c2)) {
                          continue;
                        }
                        const Tuple t{X, Y, A, B, C, a1, a2, b1, b2, c1, c2};
                        if (seen.count(t) != 0) {
                          continue;
                        }
                        std::size_t stab = 0;
                        for (const auto& [gx, gy, ga, gb, gc] : group) {
                          const int ia = c.inverse(ga);
                          const int ib = c.inverse(gb);
                          const int ic = c.inverse(gc);
                          const Tuple moved{X,
                                            Y,
                                            A,
                                            B,
                                            C,
                                            c.compose(gx, c.compose(a1, ia)),
                                            c.compose(gy, c.compose(a2, ia)),
                                            c.compose(gx, c.compose(b1, ib)),
                                            c.compose(gy, c.compose(b2, ib)),
                                            c.compose(ga, c.compose(c1, ic)),
                                            c.compose(gb, c.compose(c2, ic))};
                          stab += moved == t ? 1 : 0;
                          seen.insert(moved);
                        }
                        ++profile[stab];
                      }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return {profile.begin(), profile.end()};
}

} // namespace spanlab
