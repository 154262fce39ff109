#include "spanlab/groupoid.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "spanlab/errors.hpp"

namespace spanlab {

Code compose_codes(const FinCategory& c, const Code& g, const Code& f) {
  Code out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = c.compose(g[i], f[i]);
  }
  return out;
}

Code invert_code(const FinCategory& c, const Code& f) {
  Code out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = c.inverse(f[i]);
  }
  return out;
}

namespace {

Code concat(const Code& a, const Code& b) {
  Code out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

} // namespace

FinGroupoid::FinGroupoid(CategoryPtr base, std::size_t width, std::vector<Object> objects,
                         std::vector<Component> components)
    : base_(std::move(base)), width_(width), objects_(std::move(objects)), components_(std::move(components)) {
  aut_lookup_.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    auto& lookup = aut_lookup_[k];
    const auto& auts = components_[k].automorphisms;
    for (std::size_t i = 0; i < auts.size(); ++i) {
      lookup.emplace_back(auts[i], static_cast<int>(i));
    }
    std::sort(lookup.begin(), lookup.end());
  }
}

Code FinGroupoid::identity(int x) const {
  const Code& t = objects_.at(x).transport;
  return compose(t, inverse(t));
}

int FinGroupoid::aut_index(int k, const Code& g) const {
  const auto& lookup = aut_lookup_.at(k);
  auto it = std::lower_bound(lookup.begin(), lookup.end(), g,
                             [](const std::pair<Code, int>& e, const Code& key) { return e.first < key; });
  if (it == lookup.end() || it->first != g) {
    return -1;
  }
  return it->second;
}

std::vector<Code> FinGroupoid::hom(int x, int y) const {
  std::vector<Code> out;
  if (component_of(x) != component_of(y)) {
    return out;
  }
  const Code tx_inv = inverse(objects_[x].transport);
  for (const Code& g : components_[component_of(x)].automorphisms) {
    out.push_back(compose(objects_[y].transport, compose(g, tx_inv)));
  }
  return out;
}

Code FinGroupoid::to_representative(int x, int y, const Code& arrow) const {
  return compose(inverse(objects_[y].transport), compose(arrow, objects_[x].transport));
}

namespace {

FinGroupoid groupoid_of_isos(CategoryPtr c) {
  const FinCategory& cat = *c;
  const std::vector<int> reps = iso_class_representatives(cat);
  std::vector<FinGroupoid::Object> objects;
  std::vector<FinGroupoid::Component> components;
  for (int r : reps) {
    FinGroupoid::Component comp;
    comp.representative = r;
    comp.automorphisms.push_back({cat.identity(r)});
    for (int f : cat.automorphisms(r)) {
      if (f != cat.identity(r)) {
        comp.automorphisms.push_back({f});
      }
    }
    components.push_back(std::move(comp));
  }
  for (int o = 0; o < cat.object_count(); ++o) {
    FinGroupoid::Object obj;
    obj.label = cat.object_label(o);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      if (reps[k] == o) {
        obj.component = static_cast<int>(k);
        obj.transport = {cat.identity(o)};
        break;
      }
      bool found = false;
      for (int f : cat.hom(reps[k], o)) {
        if (cat.is_iso(f)) {
          obj.component = static_cast<int>(k);
          obj.transport = {f};
          found = true;
          break;
        }
      }
      if (found) {
        break;
      }
    }
    objects.push_back(std::move(obj));
  }
  return FinGroupoid(std::move(c), 1, std::move(objects), std::move(components));
}

} // namespace

FinGroupoid FinGroupoid::core(CategoryPtr c) { return groupoid_of_isos(std::move(c)); }

FinGroupoid FinGroupoid::from_groupoid_category(CategoryPtr g) {
  for (int m = 0; m < g->morphism_count(); ++m) {
    if (!g->is_iso(m)) {
      throw NotGroupoidError("morphism " + g->morphism(m).label + " has no inverse");
    }
  }
  return groupoid_of_isos(std::move(g));
}

FinGroupoid FinGroupoid::point(CategoryPtr base) {
  return FinGroupoid(std::move(base), 0, {{"*", 0, {}}}, {{0, {Code{}}}});
}

FinGroupoid FinGroupoid::skeleton() const {
  std::vector<Object> objects;
  std::vector<Component> components;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const int r = components_[k].representative;
    objects.push_back({objects_[r].label, static_cast<int>(k), identity(r)});
    components.push_back({static_cast<int>(k), components_[k].automorphisms});
  }
  return FinGroupoid(base_, width_, std::move(objects), std::move(components));
}

FinGroupoid FinGroupoid::full_subgroupoid(const std::function<bool(int)>& keep, std::vector<int>* old_components) const {
  std::vector<int> new_index(components_.size(), -1);
  std::vector<Component> components;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (keep(static_cast<int>(k))) {
      new_index[k] = static_cast<int>(components.size());
      components.push_back({-1, components_[k].automorphisms});
      if (old_components != nullptr) {
        old_components->push_back(static_cast<int>(k));
      }
    }
  }
  std::vector<Object> objects;
  for (std::size_t x = 0; x < objects_.size(); ++x) {
    const int k = new_index[objects_[x].component];
    if (k < 0) {
      continue;
    }
    if (components_[objects_[x].component].representative == static_cast<int>(x)) {
      components[k].representative = static_cast<int>(objects.size());
    }
    objects.push_back({objects_[x].label, k, objects_[x].transport});
  }
  return FinGroupoid(base_, width_, std::move(objects), std::move(components));
}

nlohmann::json FinGroupoid::to_json() const {
  nlohmann::json objects = nlohmann::json::array();
  for (const Object& o : objects_) {
    objects.push_back(o.label);
  }
  nlohmann::json components = nlohmann::json::array();
  for (const Component& k : components_) {
    components.push_back({{"representative", objects_[k.representative].label},
                          {"aut_order", k.automorphisms.size()}});
  }
  return {{"objects", std::move(objects)}, {"components", std::move(components)}};
}

ValidationReport validate_map(const GroupoidMap& f) {
  const FinGroupoid& s = *f.source;
  const FinGroupoid& t = *f.target;
  if (static_cast<int>(f.object_image.size()) != s.object_count()) {
    return {false, "object image table has the wrong length"};
  }
  for (int k = 0; k < s.component_count(); ++k) {
    const int r = s.representative(k);
    const int fr = f.object_image[r];
    const auto& auts = s.component(k).automorphisms;
    std::vector<Code> images;
    for (const Code& g : auts) {
      Code image = f.arrow_image(r, r, g);
      if (t.aut_index(t.component_of(fr), t.to_representative(fr, fr, image)) < 0) {
        return {false, "image of an automorphism of " + s.object(r).label + " is not an automorphism"};
      }
      images.push_back(std::move(image));
    }
    if (images[0] != t.identity(fr)) {
      return {false, "identity of " + s.object(r).label + " is not preserved"};
    }
    for (std::size_t i = 0; i < auts.size(); ++i) {
      for (std::size_t j = 0; j < auts.size(); ++j) {
        const Code gh = s.compose(auts[i], auts[j]);
        if (f.arrow_image(r, r, gh) != t.compose(images[i], images[j])) {
          return {false, "composition of automorphisms of " + s.object(r).label + " is not preserved"};
        }
      }
    }
  }
  for (int x = 0; x < s.object_count(); ++x) {
    const int r = s.representative(s.component_of(x));
    const Code image = f.arrow_image(r, x, s.object(x).transport);
    const int fr = f.object_image[r];
    const int fx = f.object_image[x];
    if (t.component_of(fr) != t.component_of(fx)) {
      return {false, "objects " + s.object(r).label + " and " + s.object(x).label +
                         " are isomorphic but their images are not"};
    }
    if (t.aut_index(t.component_of(fr), t.to_representative(fr, fx, image)) < 0) {
      return {false, "transport of " + s.object(x).label + " does not map to an arrow"};
    }
  }
  return {};
}

nlohmann::json EquivalenceReport::to_json() const {
  nlohmann::json j{{"fully_faithful", fully_faithful},
                   {"essentially_surjective", essentially_surjective},
                   {"excluded_components", excluded}};
  if (!violation.empty()) {
    j["violation"] = violation;
  }
  if (equivalent()) {
    j["quasi_inverse"] = quasi_inverse;
  }
  return j;
}

EquivalenceReport equivalent(const GroupoidMap& f, const std::function<bool(int)>& excluded) {
  const FinGroupoid& s = *f.source;
  const FinGroupoid& t = *f.target;
  EquivalenceReport report;
  report.fully_faithful = true;
  report.quasi_inverse.assign(t.component_count(), -1);
  report.component_map.assign(s.component_count(), -1);
  for (int k = 0; k < s.component_count() && report.fully_faithful; ++k) {
    const int r = s.representative(k);
    const int fr = f.object_image.at(r);
    const int d = t.component_of(fr);
    report.component_map[k] = d;
    if (report.quasi_inverse[d] >= 0) {
      report.fully_faithful = false;
      report.violation = "non-isomorphic objects " + s.object(s.representative(report.quasi_inverse[d])).label +
                         " and " + s.object(r).label + " have isomorphic images";
      break;
    }
    report.quasi_inverse[d] = k;
    const auto& auts = s.component(k).automorphisms;
    std::vector<char> hit(t.aut_order(d), 0);
    for (const Code& g : auts) {
      const int idx = t.aut_index(d, t.to_representative(fr, fr, f.arrow_image(r, r, g)));
      if (idx < 0) {
        throw MismatchError("groupoid map sends an automorphism of " + s.object(r).label + " outside its target");
      }
      if (hit[idx] != 0) {
        report.fully_faithful = false;
        report.violation = "not faithful on automorphisms of " + s.object(r).label;
        break;
      }
      hit[idx] = 1;
    }
    if (report.fully_faithful && auts.size() != t.aut_order(d)) {
      report.fully_faithful = false;
      report.violation = "not full at " + s.object(r).label + ": hom-set size " + std::to_string(auts.size()) +
                         " vs " + std::to_string(t.aut_order(d));
    }
  }
  report.essentially_surjective = true;
  for (int d = 0; d < t.component_count(); ++d) {
    if (report.quasi_inverse[d] >= 0) {
      continue;
    }
    if (excluded && excluded(d)) {
      ++report.excluded;
      continue;
    }
    if (report.essentially_surjective) {
      report.essentially_surjective = false;
      if (report.violation.empty()) {
        report.violation = "component of " + t.object(t.representative(d)).label + " is not hit";
      }
    }
  }
  return report;
}

std::vector<std::pair<std::size_t, std::size_t>> pi0_aut_profile(const FinGroupoid& g) {
  std::map<std::size_t, std::size_t> counts;
  for (int k = 0; k < g.component_count(); ++k) {
    ++counts[g.aut_order(k)];
  }
  return {counts.begin(), counts.end()};
}

namespace {

struct GroupTable {
  std::size_t n = 0;
  std::vector<int> mul;
  std::vector<int> order;
};

GroupTable group_table(const FinGroupoid& g, int k) {
  const auto& elems = g.component(k).automorphisms;
  GroupTable t;
  t.n = elems.size();
  t.mul.resize(t.n * t.n);
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = 0; j < t.n; ++j) {
      t.mul[i * t.n + j] = g.aut_index(k, g.compose(elems[i], elems[j]));
    }
  }
  t.order.resize(t.n);
  for (std::size_t i = 0; i < t.n; ++i) {
    int x = static_cast<int>(i);
    int ord = 1;
    while (x != 0) {
      x = t.mul[x * t.n + i];
      ++ord;
    }
    t.order[i] = ord;
  }
  return t;
}

} // namespace

bool groups_isomorphic(const FinGroupoid& g, int gk, const FinGroupoid& h, int hk, std::size_t max_order) {
  const std::size_t n = g.aut_order(gk);
  if (n != h.aut_order(hk)) {
    return false;
  }
  if (n > max_order) {
    throw ResourceError("group of order " + std::to_string(n) + " exceeds the isomorphism search bound " +
                        std::to_string(max_order));
  }
  const GroupTable a = group_table(g, gk);
  const GroupTable b = group_table(h, hk);
  std::vector<int> sa(a.order), sb(b.order);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) {
    return false;
  }
  // greedy generating set of a
  std::vector<int> gens;
  std::vector<char> in_closure(n, 0);
  in_closure[0] = 1;
  for (std::size_t x = 0; x < n; ++x) {
    if (in_closure[x] != 0) {
      continue;
    }
    gens.push_back(static_cast<int>(x));
    std::vector<int> members;
    for (std::size_t y = 0; y < n; ++y) {
      if (in_closure[y] != 0) {
        members.push_back(static_cast<int>(y));
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (int s : gens) {
        const int z = a.mul[members[i] * n + s];
        if (in_closure[z] == 0) {
          in_closure[z] = 1;
          members.push_back(z);
        }
      }
    }
  }
  std::vector<int> choice(gens.size(), 0);
  std::vector<int> phi(n);
  auto try_assignment = [&]() {
    std::fill(phi.begin(), phi.end(), -1);
    phi[0] = 0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const int y = a.mul[x * n + gens[i]];
        const int image = b.mul[phi[x] * n + choice[i]];
        if (phi[y] < 0) {
          phi[y] = image;
          queue.push_back(y);
        } else if (phi[y] != image) {
          return false;
        }
      }
    }
    std::vector<char> used(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (phi[x] < 0 || used[phi[x]] != 0) {
        return false;
      }
      used[phi[x]] = 1;
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (phi[a.mul[x * n + y]] != b.mul[phi[x] * n + phi[y]]) {
          return false;
        }
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t i) {
    if (i == gens.size()) {
      return try_assignment();
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (b.order[y] == a.order[gens[i]]) {
        choice[i] = static_cast<int>(y);
        if (search(i + 1)) {
          return true;
        }
      }
    }
    return false;
  };
  return search(0);
}

bool abstractly_equivalent(const FinGroupoid& g, const FinGroupoid& h, std::size_t max_order) {
  if (pi0_aut_profile(g) != pi0_aut_profile(h)) {
    return false;
  }
  std::vector<char> used(h.component_count(), 0);
  for (int k = 0; k < g.component_count(); ++k) {
    bool matched = false;
    for (int l = 0; l < h.component_count() && !matched; ++l) {
      if (used[l] == 0 && g.aut_order(k) == h.aut_order(l) && groups_isomorphic(g, k, h, l, max_order)) {
        used[l] = 1;
        matched = true;
      }
    }
    if (!matched) {
      return false;
    }
  }
  return true;
}

IsoComma::IsoComma(const GroupoidMap& f, const GroupoidMap& g, bool all_objects)
    : a_(f.source), b_(g.source), k_(f.target), f_(f), g_(g), left_width_(f.source->width()) {
  if (f.target != g.target) {
    throw MismatchError("iso-comma needs two maps into the same groupoid");
  }
  const FinGroupoid& A = *a_;
  const FinGroupoid& B = *b_;
  const FinGroupoid& K = *k_;
  if (A.width() > 0 && B.width() > 0 && A.base_ptr() != B.base_ptr()) {
    throw MismatchError("iso-comma factors must share a base category");
  }
  CategoryPtr base = A.width() > 0 ? A.base_ptr() : B.base_ptr();

  std::vector<FinGroupoid::Component> components;
  std::vector<Triple> reps;
  for (int ca = 0; ca < A.component_count(); ++ca) {
    const int ra = A.representative(ca);
    const int fa = f.object_image.at(ra);
    for (int cb = 0; cb < B.component_count(); ++cb) {
      const int rb = B.representative(cb);
      const int gb = g.object_image.at(rb);
      const int kk = K.component_of(fa);
      if (kk != K.component_of(gb)) {
        continue;
      }
      PairTable t;
      t.k = kk;
      const auto& auts_a = A.component(ca).automorphisms;
      const auto& auts_b = B.component(cb).automorphisms;
      std::vector<Code> left_inv;
      for (const Code& u : auts_a) {
        t.left_images.push_back(f.arrow_image(ra, ra, u));
        left_inv.push_back(K.inverse(t.left_images.back()));
      }
      for (const Code& v : auts_b) {
        t.right_images.push_back(g.arrow_image(rb, rb, v));
      }
      const auto& auts_k = K.component(kk).automorphisms;
      const Code& t_fa = K.object(fa).transport;
      const Code& t_gb = K.object(gb).transport;
      const Code t_fa_inv = K.inverse(t_fa);
      const Code t_gb_inv = K.inverse(t_gb);
      t.entries.assign(auts_k.size(), Entry{});
      for (std::size_t idx = 0; idx < auts_k.size(); ++idx) {
        if (t.entries[idx].component >= 0) {
          continue;
        }
        const int comp = static_cast<int>(components.size());
        const Code alpha = K.compose(t_gb, K.compose(auts_k[idx], t_fa_inv));
        FinGroupoid::Component component;
        component.representative = comp;
        for (std::size_t iu = 0; iu < auts_a.size(); ++iu) {
          const Code alpha_u = K.compose(alpha, left_inv[iu]);
          for (std::size_t iv = 0; iv < auts_b.size(); ++iv) {
            const Code moved = K.compose(t.right_images[iv], alpha_u);
            const int j = K.aut_index(kk, K.compose(t_gb_inv, K.compose(moved, t_fa)));
            if (j < 0) {
              throw MismatchError("iso-comma: arrow images leave the hom-set");
            }
            if (j == static_cast<int>(idx)) {
              component.automorphisms.push_back(concat(auts_a[iu], auts_b[iv]));
            }
            if (t.entries[j].component < 0) {
              t.entries[j] = {comp, static_cast<int>(iu), static_cast<int>(iv)};
            }
          }
        }
        components.push_back(std::move(component));
        reps.push_back({ra, rb, alpha});
      }
      tables_.emplace((static_cast<std::uint64_t>(ca) << 32) | static_cast<std::uint32_t>(cb), std::move(t));
    }
  }

  std::vector<FinGroupoid::Object> objects;
  auto label = [&](const Triple& tr) {
    std::string s = "(" + A.object(tr.a).label + "," + B.object(tr.b).label + ",";
    for (std::size_t i = 0; i < tr.alpha.size(); ++i) {
      s += (i > 0 ? " " : "") + std::to_string(tr.alpha[i]);
    }
    return s + ")";
  };
  if (!all_objects) {
    for (std::size_t c = 0; c < reps.size(); ++c) {
      objects.push_back({label(reps[c]), static_cast<int>(c), concat(A.identity(reps[c].a), B.identity(reps[c].b))});
    }
    triples_ = std::move(reps);
  } else {
    std::vector<int> rep_object(components.size(), -1);
    for (int a = 0; a < A.object_count(); ++a) {
      const int fa = f.object_image.at(a);
      for (int b = 0; b < B.object_count(); ++b) {
        const int gb = g.object_image.at(b);
        for (Code& alpha : K.hom(fa, gb)) {
          auto [comp, transport] = locate(a, b, alpha);
          Triple tr{a, b, std::move(alpha)};
          if (a == reps[comp].a && b == reps[comp].b && tr.alpha == reps[comp].alpha) {
            rep_object[comp] = static_cast<int>(objects.size());
          }
          objects.push_back({label(tr), comp, std::move(transport)});
          triples_.push_back(std::move(tr));
        }
      }
    }
    for (std::size_t c = 0; c < components.size(); ++c) {
      components[c].representative = rep_object[c];
    }
  }
  groupoid_ = std::make_unique<FinGroupoid>(base, A.width() + B.width(), std::move(objects), std::move(components));
}

const IsoComma::PairTable* IsoComma::table(int ca, int cb) const {
  auto it = tables_.find((static_cast<std::uint64_t>(ca) << 32) | static_cast<std::uint32_t>(cb));
  return it == tables_.end() ? nullptr : &it->second;
}

std::pair<int, Code> IsoComma::locate(int a, int b, const Code& alpha) const {
  const FinGroupoid& A = *a_;
  const FinGroupoid& B = *b_;
  const FinGroupoid& K = *k_;
  const int ca = A.component_of(a);
  const int cb = B.component_of(b);
  const int ra = A.representative(ca);
  const int rb = B.representative(cb);
  const PairTable* t = table(ca, cb);
  if (t == nullptr) {
    throw MismatchError("iso-comma: no arrow between the images of " + A.object(a).label + " and " +
                        B.object(b).label);
  }
  const Code& ta = A.object(a).transport;
  const Code& tb = B.object(b).transport;
  const Code f_ta = f_.arrow_image(ra, a, ta);
  const Code g_tb = g_.arrow_image(rb, b, tb);
  const Code normal = K.compose(K.inverse(g_tb), K.compose(alpha, f_ta));
  const int fra = f_.object_image[ra];
  const int grb = g_.object_image[rb];
  const Code in_aut = K.compose(K.inverse(K.object(grb).transport), K.compose(normal, K.object(fra).transport));
  const int idx = K.aut_index(t->k, in_aut);
  if (idx < 0) {
    throw MismatchError("iso-comma: alpha is not an arrow F a -> G b");
  }
  const Entry& e = t->entries[idx];
  const Code u = A.compose(ta, A.component(ca).automorphisms[e.u]);
  const Code v = B.compose(tb, B.component(cb).automorphisms[e.v]);
  return {e.component, concat(u, v)};
}

Code IsoComma::left(const Code& arrow) const { return Code(arrow.begin(), arrow.begin() + left_width_); }

Code IsoComma::right(const Code& arrow) const { return Code(arrow.begin() + left_width_, arrow.end()); }

GroupoidMap IsoComma::left_projection() const {
  GroupoidMap m;
  m.source = groupoid_.get();
  m.target = a_;
  for (const Triple& t : triples_) {
    m.object_image.push_back(t.a);
  }
  const std::size_t w = left_width_;
  m.arrow_image = [w](int, int, const Code& c) { return Code(c.begin(), c.begin() + w); };
  return m;
}

GroupoidMap IsoComma::right_projection() const {
  GroupoidMap m;
  m.source = groupoid_.get();
  m.target = b_;
  for (const Triple& t : triples_) {
    m.object_image.push_back(t.b);
  }
  const std::size_t w = left_width_;
  m.arrow_image = [w](int, int, const Code& c) { return Code(c.begin() + w, c.end()); };
  return m;
}

FinGroupoid product(const FinGroupoid& a, const FinGroupoid& b) {
  if (a.width() > 0 && b.width() > 0 && a.base_ptr() != b.base_ptr()) {
    throw MismatchError("product factors must share a base category");
  }
  std::vector<FinGroupoid::Object> objects;
  std::vector<FinGroupoid::Component> components;
  for (int ka = 0; ka < a.component_count(); ++ka) {
    for (int kb = 0; kb < b.component_count(); ++kb) {
      FinGroupoid::Component comp;
      comp.representative = -1;
      for (const Code& u : a.component(ka).automorphisms) {
        for (const Code& v : b.component(kb).automorphisms) {
          comp.automorphisms.push_back(concat(u, v));
        }
      }
      components.push_back(std::move(comp));
    }
  }
  for (int x = 0; x < a.object_count(); ++x) {
    for (int y = 0; y < b.object_count(); ++y) {
      const int k = a.component_of(x) * b.component_count() + b.component_of(y);
      if (a.representative(a.component_of(x)) == x && b.representative(b.component_of(y)) == y) {
        components[k].representative = static_cast<int>(objects.size());
      }
      objects.push_back({"(" + a.object(x).label + "," + b.object(y).label + ")", k,
                         concat(a.object(x).transport, b.object(y).transport)});
    }
  }
  return FinGroupoid(a.width() > 0 ? a.base_ptr() : b.base_ptr(), a.width() + b.width(), std::move(objects),
                     std::move(components));
}

FinGroupoid groupoid_from_json(const nlohmann::json& j) {
  auto c = std::make_shared<const FinCategory>(category_from_json(j));
  if (j.contains("inverse")) {
    const auto& inv = j["inverse"];
    if (!inv.is_object()) {
      throw SchemaError("\"inverse\" must map morphism ids to morphism ids");
    }
    for (const auto& [key, value] : inv.items()) {
      int m = -1;
      int n = -1;
      for (int i = 0; i < c->morphism_count(); ++i) {
        if (c->morphism(i).label == key) {
          m = i;
        }
        if (value.is_string() && c->morphism(i).label == value.get<std::string>()) {
          n = i;
        }
      }
      if (m < 0 || n < 0) {
        throw SchemaError("inverse table names an unknown morphism: " + key);
      }
      if (c->inverse(m) != n) {
        throw SchemaError("inverse table entry for " + key + " is not a two-sided inverse");
      }
    }
  }
  return FinGroupoid::from_groupoid_category(std::move(c));
}

} // namespace spanlab
