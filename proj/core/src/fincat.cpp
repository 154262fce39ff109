#include "spanlab/fincat.hpp"

#include <fstream>
#include <map>

#include "spanlab/errors.hpp"

namespace spanlab {

FinCategory::FinCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                         std::vector<int> identities, const std::vector<std::array<int, 3>>& compose_triples)
    : objects_(std::move(objects)), morphisms_(std::move(morphisms)), identities_(std::move(identities)) {
  const int o = object_count();
  const int m = morphism_count();
  if (static_cast<int>(identities_.size()) != o) {
    throw SchemaError("identity table has " + std::to_string(identities_.size()) + " entries for " +
                      std::to_string(o) + " objects");
  }
  for (const Morphism& mor : morphisms_) {
    if (mor.src < 0 || mor.src >= o || mor.tgt < 0 || mor.tgt >= o) {
      throw SchemaError("morphism " + mor.label + " has an endpoint out of range");
    }
  }
  for (int id : identities_) {
    if (id < 0 || id >= m) {
      throw SchemaError("identity id out of range");
    }
  }
  compose_.assign(static_cast<std::size_t>(m) * m, -1);
  for (const auto& [g, f, gf] : compose_triples) {
    if (g < 0 || g >= m || f < 0 || f >= m || gf < 0 || gf >= m) {
      throw SchemaError("composition entry out of range");
    }
    compose_[static_cast<std::size_t>(g) * m + f] = gf;
  }
  build_indices();
}

void FinCategory::build_indices() {
  const int o = object_count();
  const int m = morphism_count();
  hom_.assign(static_cast<std::size_t>(o) * o, {});
  for (int i = 0; i < m; ++i) {
    hom_[static_cast<std::size_t>(morphisms_[i].src) * o + morphisms_[i].tgt].push_back(i);
  }
  inverse_.assign(m, -1);
  for (int f = 0; f < m; ++f) {
    for (int g : hom(morphisms_[f].tgt, morphisms_[f].src)) {
      if (compose(g, f) == identities_[morphisms_[f].src] && compose(f, g) == identities_[morphisms_[f].tgt]) {
        inverse_[f] = g;
        break;
      }
    }
  }
  aut_.assign(o, {});
  for (int a = 0; a < o; ++a) {
    for (int f : hom(a, a)) {
      if (inverse_[f] >= 0) {
        aut_[a].push_back(f);
      }
    }
  }
}

namespace {

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
  }
  return r;
}

} // namespace

FinCategory FinCategory::finset(int max_size) {
  if (max_size < 0) {
    throw SchemaError("finset bound must be non-negative");
  }
  if (max_size > 4) {
    throw ResourceError("finset:" + std::to_string(max_size) + " exceeds the supported bound of 4");
  }
  FinCategory c;
  c.finset_bound_ = max_size;
  for (int n = 0; n <= max_size; ++n) {
    c.objects_.push_back(std::to_string(n));
    c.sizes_.push_back(n);
  }
  for (int n = 0; n <= max_size; ++n) {
    for (int k = 0; k <= max_size; ++k) {
      const int count = ipow(k, n);
      for (int code = 0; code < count; ++code) {
        std::vector<int> values(n);
        int rest = code;
        for (int i = n - 1; i >= 0; --i) {
          values[i] = rest % k;
          rest /= k;
        }
        std::string label = std::to_string(n) + "->" + std::to_string(k) + ":";
        for (int v : values) {
          label += std::to_string(v);
        }
        c.morphisms_.push_back({label, n, k});
        c.functions_.push_back(std::move(values));
      }
    }
  }
  for (int n = 0; n <= max_size; ++n) {
    std::vector<int> values(n);
    for (int i = 0; i < n; ++i) {
      values[i] = i;
    }
    c.identities_.push_back(c.from_function(n, n, values));
  }
  const int m = c.morphism_count();
  c.compose_.assign(static_cast<std::size_t>(m) * m, -1);
  for (int f = 0; f < m; ++f) {
    const auto& fv = c.functions_[f];
    for (int g = 0; g < m; ++g) {
      if (c.morphisms_[g].src != c.morphisms_[f].tgt) {
        continue;
      }
      const auto& gv = c.functions_[g];
      std::vector<int> values(fv.size());
      for (std::size_t i = 0; i < fv.size(); ++i) {
        values[i] = gv[fv[i]];
      }
      c.compose_[static_cast<std::size_t>(g) * m + f] =
          c.from_function(c.morphisms_[f].src, c.morphisms_[g].tgt, values);
    }
  }
  c.build_indices();
  return c;
}

int FinCategory::from_function(int n, int k, const std::vector<int>& values) const {
  if (finset_bound_ < 0) {
    throw SchemaError("category is not a finite-set skeleton");
  }
  int offset = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= finset_bound_; ++b) {
      offset += ipow(b, a);
    }
  }
  for (int b = 0; b < k; ++b) {
    offset += ipow(b, n);
  }
  int code = 0;
  for (int v : values) {
    code = code * k + v;
  }
  return offset + code;
}

std::optional<int> FinCategory::find_object(const std::string& label) const {
  for (int i = 0; i < object_count(); ++i) {
    if (objects_[i] == label) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<int> FinCategory::size(int o) const {
  if (sizes_.empty()) {
    return std::nullopt;
  }
  return sizes_.at(o);
}

ValidationReport validate_category(const FinCategory& c) {
  const int m = c.morphism_count();
  auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };
  for (int o = 0; o < c.object_count(); ++o) {
    const Morphism& id = c.morphism(c.identity(o));
    if (id.src != o || id.tgt != o) {
      return fail("identity of " + c.object_label(o) + " is not an endomorphism of it");
    }
  }
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      const int gf = c.compose(g, f);
      const bool composable = c.src(g) == c.tgt(f);
      if (composable && gf < 0) {
        return fail("composite " + c.morphism(g).label + " o " + c.morphism(f).label + " is missing");
      }
      if (!composable && gf >= 0) {
        return fail("composite " + c.morphism(g).label + " o " + c.morphism(f).label +
                    " is defined on a non-composable pair");
      }
      if (composable && (c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g))) {
        return fail("composite " + c.morphism(g).label + " o " + c.morphism(f).label + " = " +
                    c.morphism(gf).label + " has the wrong type");
      }
    }
  }
  for (int f = 0; f < m; ++f) {
    if (c.compose(c.identity(c.tgt(f)), f) != f || c.compose(f, c.identity(c.src(f))) != f) {
      return fail("unit law fails at " + c.morphism(f).label);
    }
  }
  for (int f = 0; f < m; ++f) {
    for (int b = 0; b < c.object_count(); ++b) {
      for (int g : c.hom(c.tgt(f), b)) {
        const int gf = c.compose(g, f);
        for (int d = 0; d < c.object_count(); ++d) {
          for (int h : c.hom(b, d)) {
            if (c.compose(h, gf) != c.compose(c.compose(h, g), f)) {
              return fail("associativity fails on (" + c.morphism(h).label + ", " + c.morphism(g).label + ", " +
                          c.morphism(f).label + ")");
            }
          }
        }
      }
    }
  }
  return {};
}

std::vector<int> iso_class_representatives(const FinCategory& c) {
  std::vector<int> reps;
  for (int o = 0; o < c.object_count(); ++o) {
    bool fresh = true;
    for (int r : reps) {
      for (int f : c.hom(r, o)) {
        if (c.is_iso(f)) {
          fresh = false;
          break;
        }
      }
      if (!fresh) {
        break;
      }
    }
    if (fresh) {
      reps.push_back(o);
    }
  }
  return reps;
}

Functor::Functor(CategoryPtr source, CategoryPtr target, std::vector<int> object_map, std::vector<int> morphism_map)
    : source_(std::move(source)), target_(std::move(target)), object_map_(std::move(object_map)),
      morphism_map_(std::move(morphism_map)) {
  if (static_cast<int>(object_map_.size()) != source_->object_count() ||
      static_cast<int>(morphism_map_.size()) != source_->morphism_count()) {
    throw SchemaError("functor tables do not cover the source category");
  }
  for (int o : object_map_) {
    if (o < 0 || o >= target_->object_count()) {
      throw SchemaError("functor object image out of range");
    }
  }
  for (int m : morphism_map_) {
    if (m < 0 || m >= target_->morphism_count()) {
      throw SchemaError("functor morphism image out of range");
    }
  }
}

ValidationReport validate_functor(const Functor& f) {
  const FinCategory& s = f.source();
  const FinCategory& t = f.target();
  for (int m = 0; m < s.morphism_count(); ++m) {
    const int im = f.on_morphism(m);
    if (t.src(im) != f.on_object(s.src(m)) || t.tgt(im) != f.on_object(s.tgt(m))) {
      return {false, "image of " + s.morphism(m).label + " has the wrong endpoints"};
    }
  }
  for (int o = 0; o < s.object_count(); ++o) {
    if (f.on_morphism(s.identity(o)) != t.identity(f.on_object(o))) {
      return {false, "identity of " + s.object_label(o) + " is not preserved"};
    }
  }
  for (int g = 0; g < s.morphism_count(); ++g) {
    for (int fm = 0; fm < s.morphism_count(); ++fm) {
      const int gf = s.compose(g, fm);
      if (gf >= 0 && f.on_morphism(gf) != t.compose(f.on_morphism(g), f.on_morphism(fm))) {
        return {false, "composite " + s.morphism(g).label + " o " + s.morphism(fm).label + " is not preserved"};
      }
    }
  }
  return {};
}

namespace {

std::string label_of(const nlohmann::json& j) {
  if (j.is_string()) {
    return j.get<std::string>();
  }
  if (j.is_number_integer()) {
    return std::to_string(j.get<long long>());
  }
  throw SchemaError("labels must be strings or integers, got " + j.dump());
}

} // namespace

FinCategory category_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchemaError("category must be a JSON object");
  }
  for (const char* key : {"objects", "morphisms", "identities", "compose"}) {
    if (!j.contains(key)) {
      throw SchemaError(std::string("category is missing \"") + key + "\"");
    }
  }
  if (!j["objects"].is_array() || !j["morphisms"].is_array() || !j["identities"].is_object() ||
      !j["compose"].is_array()) {
    throw SchemaError("category fields have the wrong JSON types");
  }
  std::vector<std::string> objects;
  std::map<std::string, int> object_index;
  for (const auto& o : j["objects"]) {
    std::string label = label_of(o);
    if (object_index.count(label) != 0) {
      throw SchemaError("duplicate object " + label);
    }
    object_index[label] = static_cast<int>(objects.size());
    objects.push_back(label);
  }
  auto object_of = [&](const nlohmann::json& v) {
    auto it = object_index.find(label_of(v));
    if (it == object_index.end()) {
      throw SchemaError("unknown object " + v.dump());
    }
    return it->second;
  };
  std::vector<Morphism> morphisms;
  std::map<std::string, int> morphism_index;
  for (const auto& m : j["morphisms"]) {
    if (!m.is_object() || !m.contains("id") || !m.contains("src") || !m.contains("tgt")) {
      throw SchemaError("morphism entries need id, src and tgt: " + m.dump());
    }
    std::string label = label_of(m["id"]);
    if (morphism_index.count(label) != 0) {
      throw SchemaError("duplicate morphism " + label);
    }
    morphism_index[label] = static_cast<int>(morphisms.size());
    morphisms.push_back({label, object_of(m["src"]), object_of(m["tgt"])});
  }
  auto morphism_of = [&](const nlohmann::json& v) {
    auto it = morphism_index.find(label_of(v));
    if (it == morphism_index.end()) {
      throw SchemaError("unknown morphism " + v.dump());
    }
    return it->second;
  };
  std::vector<int> identities(objects.size(), -1);
  for (const auto& [key, value] : j["identities"].items()) {
    auto it = object_index.find(key);
    if (it == object_index.end()) {
      throw SchemaError("identity given for unknown object " + key);
    }
    identities[it->second] = morphism_of(value);
  }
  for (std::size_t i = 0; i < identities.size(); ++i) {
    if (identities[i] < 0) {
      throw SchemaError("object " + objects[i] + " has no identity");
    }
  }
  std::vector<std::array<int, 3>> triples;
  for (const auto& t : j["compose"]) {
    if (!t.is_array() || t.size() != 3) {
      throw SchemaError("compose entries must be [g, f, gf] triples: " + t.dump());
    }
    triples.push_back({morphism_of(t[0]), morphism_of(t[1]), morphism_of(t[2])});
  }
  return FinCategory(std::move(objects), std::move(morphisms), std::move(identities), triples);
}

nlohmann::json to_json(const FinCategory& c) {
  nlohmann::json j;
  j["objects"] = c.object_labels();
  nlohmann::json morphisms = nlohmann::json::array();
  for (int m = 0; m < c.morphism_count(); ++m) {
    morphisms.push_back({{"id", c.morphism(m).label},
                         {"src", c.object_label(c.src(m))},
                         {"tgt", c.object_label(c.tgt(m))}});
  }
  j["morphisms"] = std::move(morphisms);
  nlohmann::json ids = nlohmann::json::object();
  for (int o = 0; o < c.object_count(); ++o) {
    ids[c.object_label(o)] = c.morphism(c.identity(o)).label;
  }
  j["identities"] = std::move(ids);
  nlohmann::json comp = nlohmann::json::array();
  for (int g = 0; g < c.morphism_count(); ++g) {
    for (int f = 0; f < c.morphism_count(); ++f) {
      const int gf = c.compose(g, f);
      if (gf >= 0) {
        comp.push_back({c.morphism(g).label, c.morphism(f).label, c.morphism(gf).label});
      }
    }
  }
  j["compose"] = std::move(comp);
  return j;
}

FinCategory load_base(const std::string& spec) {
  const std::string prefix = "finset:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) {
      throw SchemaError("malformed base spec " + spec);
    }
    return FinCategory::finset(std::stoi(rest));
  }
  std::ifstream in(spec);
  if (!in) {
    throw SchemaError("cannot open base category file " + spec);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("base category file " + spec + " is not valid JSON: " + e.what());
  }
  return category_from_json(j);
}

} // namespace spanlab
