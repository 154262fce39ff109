#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "spanlab/duality.hpp"
#include "spanlab/errors.hpp"
#include "spanlab/fincat.hpp"
#include "spanlab/lagrangian.hpp"
#include "spanlab/locsys.hpp"
#include "spanlab/shapes.hpp"
#include "spanlab/spans.hpp"

#ifndef SPANLAB_VERSION
#define SPANLAB_VERSION "0.0.0"
#endif

namespace spanlab::cli {

using nlohmann::json;

const char* tool_version() { return SPANLAB_VERSION; }

namespace {

enum class Kind { integer, boolean, string, sizes, labels, object, any };

struct Field {
  Kind kind;
  bool required = false;
};

using Schema = std::map<std::string, Field>;

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table = [] {
    const Schema common{{"check", {Kind::string, true}}, {"seed", {Kind::integer}}, {"id", {Kind::string}}};
    auto with = [&](Schema extra) {
      extra.insert(common.begin(), common.end());
      return extra;
    };
    const Field base{Kind::string, true};
    const Field bound{Kind::integer};
    std::map<std::string, Schema> t;
    t["shapes"] = with({{"kind", {Kind::string, true}}, {"arities", {Kind::sizes, true}}});
    t["level"] = with({{"base", base}, {"arities", {Kind::sizes, true}}, {"bound", bound}, {"objects", {Kind::boolean}}});
    t["segal"] = with({{"base", base}, {"arities", {Kind::sizes, true}}, {"bound", bound}, {"corrupt", {Kind::boolean}}});
    t["complete"] = with({{"base", base}, {"bound", bound}});
    t["invertible"] = with({{"base", base}, {"bound", bound}});
    t["mapping"] = with({{"base", base},
                         {"bound", bound},
                         {"x", {Kind::string}},
                         {"y", {Kind::string}},
                         {"m", {Kind::sizes}}});
    t["adjoint"] = with({{"base", base}, {"bound", bound}, {"span", {Kind::object}}, {"samples", {Kind::integer}}});
    t["dual"] = with({{"base", base}, {"object", {Kind::string}}});
    t["locsys"] = with({{"base", base},
                        {"bound", bound},
                        {"coefficients", {Kind::any, true}},
                        {"property", {Kind::string, true}},
                        {"arity", {Kind::integer}},
                        {"x", {Kind::integer}},
                        {"y", {Kind::integer}},
                        {"xi", {Kind::sizes}},
                        {"eta", {Kind::sizes}},
                        {"span", {Kind::object}},
                        {"samples", {Kind::integer}}});
    t["lag"] = with({{"property", {Kind::string, true}},
                     {"input", {Kind::object}},
                     {"dims", {Kind::sizes}},
                     {"samples", {Kind::integer}},
                     {"max_total_dim", {Kind::integer}}});
    return t;
  }();
  return table;
}

// Literals built in code arrive signed, parsed text unsigned.
bool non_negative(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

bool has_kind(const json& v, Kind k) {
  switch (k) {
  case Kind::integer:
    return v.is_number_integer();
  case Kind::boolean:
    return v.is_boolean();
  case Kind::string:
    return v.is_string();
  case Kind::sizes:
    return v.is_array() && std::all_of(v.begin(), v.end(), non_negative);
  case Kind::labels:
    return v.is_array();
  case Kind::object:
    return v.is_object();
  case Kind::any:
    return true;
  }
  return false;
}

// --------------------------------------------------------------- params

struct Params {
  const json& j;

  bool has(const char* key) const { return j.contains(key); }
  int integer(const char* key, int fallback) const { return has(key) ? j.at(key).get<int>() : fallback; }
  bool flag(const char* key) const { return has(key) && j.at(key).get<bool>(); }
  std::string str(const char* key, const std::string& fallback = {}) const {
    return has(key) ? j.at(key).get<std::string>() : fallback;
  }
  std::vector<std::size_t> sizes(const char* key) const {
    return has(key) ? j.at(key).get<std::vector<std::size_t>>() : std::vector<std::size_t>{};
  }
  std::vector<int> ints(const char* key) const {
    return has(key) ? j.at(key).get<std::vector<int>>() : std::vector<int>{};
  }
  std::uint64_t seed() const { return has("seed") ? j.at("seed").get<std::uint64_t>() : default_seed; }
};

CategoryPtr load_checked(const std::string& spec) {
  auto c = std::make_shared<const FinCategory>(load_base(spec));
  const auto v = validate_category(*c);
  if (!v.ok) {
    throw SchemaError("base category is not a category: " + v.violation);
  }
  return c;
}

int object_of(const FinCategory& c, const std::string& label) {
  const auto o = c.find_object(label);
  if (!o) {
    throw SchemaError("unknown object '" + label + "'");
  }
  return *o;
}

int morphism_of(const FinCategory& c, const json& v, int from, int to) {
  if (v.is_array()) {
    if (!c.is_finset()) {
      throw SchemaError("value lists need a finite-set base");
    }
    return c.from_function(from, to, v.get<std::vector<int>>());
  }
  if (v.is_string()) {
    for (int m = 0; m < c.morphism_count(); ++m) {
      if (c.morphism(m).label == v.get<std::string>()) {
        if (c.src(m) != from || c.tgt(m) != to) {
          throw SchemaError("morphism " + c.morphism(m).label + " has the wrong endpoints for this span");
        }
        return m;
      }
    }
  }
  throw SchemaError("unknown morphism " + v.dump());
}

int object_field(const FinCategory& c, const json& j, const char* key) {
  if (!j.contains(key)) {
    throw SchemaError(std::string("span is missing '") + key + "'");
  }
  const json& v = j.at(key);
  if (v.is_number_integer()) {
    return object_of(c, std::to_string(v.get<int>()));
  }
  if (v.is_string()) {
    return object_of(c, v.get<std::string>());
  }
  throw SchemaError(std::string("span field '") + key + "' must name an object");
}

Span span_from_json(const FinCategory& c, const json& j) {
  const int x = object_field(c, j, "left");
  const int a = object_field(c, j, "apex");
  const int y = object_field(c, j, "right");
  if (!j.contains("to_left") || !j.contains("to_right")) {
    throw SchemaError("span needs 'to_left' and 'to_right'");
  }
  return make_span(c, morphism_of(c, j.at("to_left"), a, x), morphism_of(c, j.at("to_right"), a, y));
}

json span_json(const FinCategory& c, const Span& s) {
  return {{"left", c.object_label(s.left)},
          {"apex", c.object_label(s.apex)},
          {"right", c.object_label(s.right)},
          {"to_left", c.morphism(s.to_left).label},
          {"to_right", c.morphism(s.to_right).label}};
}

std::shared_ptr<const InternalCategory> coefficients_of(const json& v) {
  InternalCategory k;
  if (v.is_object()) {
    k = internal_from_json(v);
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    auto arg = [&](const std::string& prefix) -> std::optional<int> {
      if (s.rfind(prefix, 0) != 0) {
        return std::nullopt;
      }
      const std::string rest = s.substr(prefix.size());
      if (rest.empty() || rest.size() > 3 || rest.find_first_not_of("0123456789") != std::string::npos) {
        throw SchemaError("malformed coefficient spec " + s);
      }
      return std::stoi(rest);
    };
    if (s == "arrow") {
      k = InternalCategory::walking_arrow();
    } else if (s == "terminal") {
      k = InternalCategory::discrete(1);
    } else if (auto n = arg("discrete:")) {
      k = InternalCategory::discrete(*n);
    } else if (auto n = arg("cyclic:")) {
      if (*n < 1) {
        throw SchemaError("cyclic groups need order at least 1");
      }
      k = InternalCategory::cyclic_group(*n);
    } else {
      k = internal_from_json(load_json_file(s));
    }
  } else {
    throw SchemaError("coefficients must be a name, a file or an internal category object");
  }
  const auto v2 = validate_internal(k);
  if (!v2.ok) {
    throw SchemaError("coefficients are not an internal category: " + v2.violation);
  }
  return std::make_shared<const InternalCategory>(std::move(k));
}

// Portable Fisher-Yates, so that samples do not depend on the library's
// shuffle algorithm.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = i;
  }
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng() % i]);
  }
  idx.resize(std::min(n, k));
  return idx;
}

struct Outcome {
  Verdict verdict = Verdict::error;
  json witness;
  std::optional<int> bound;
  std::optional<int> effective;
  std::string note;
};

// ------------------------------------------------------------- checks

Outcome run_shapes(const Params& p) {
  const std::string kind = p.str("kind");
  const auto ar = p.sizes("arities");
  Outcome out;
  if (kind == "sigma") {
    out.witness = to_json(SigmaShape(ar));
  } else if (kind == "lambda") {
    out.witness = to_json(LambdaShape(SigmaShape(ar)));
  } else if (kind == "wedge") {
    if (ar.size() != 1) {
      throw SchemaError("wedge takes a single n");
    }
    const auto w = lambda_wedge_check(ar[0]);
    out.witness = {{"n", ar[0]},
                   {"holds", w.holds},
                   {"glued_size", w.glued_size},
                   {"lambda_size", w.lambda_size},
                   {"witness", w.witness},
                   {"mismatch", w.mismatch}};
    out.verdict = verdict_of(w.holds);
    return out;
  } else {
    throw SchemaError("shape kind must be sigma, lambda or wedge");
  }
  out.verdict = Verdict::verified;
  return out;
}

Outcome run_level(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.bound = p.integer("bound", 3);
  out.effective = effective_bound(*c, *out.bound);
  const SpanLevel level(c, p.sizes("arities"), *out.bound);
  out.witness = level.to_json(p.flag("objects"));
  out.verdict = Verdict::verified;
  return out;
}

Outcome run_segal(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.bound = p.integer("bound", 3);
  out.effective = effective_bound(*c, *out.bound);
  const auto r = segal_check(c, p.sizes("arities"), *out.bound, p.flag("corrupt"));
  out.verdict = r.verdict;
  out.witness = r.to_json();
  return out;
}

Outcome run_complete(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.bound = p.integer("bound", 3);
  out.effective = effective_bound(*c, *out.bound);
  const auto r = completeness_check(c, *out.bound);
  out.verdict = r.verdict;
  out.witness = r.to_json();
  return out;
}

Outcome run_invertible(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.bound = p.integer("bound", 3);
  out.effective = effective_bound(*c, *out.bound);
  const auto r = invertible_span_check(*c, *out.bound);
  out.verdict = r.verdict;
  out.witness = r.to_json();
  return out;
}

Outcome run_mapping(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.bound = p.integer("bound", 3);
  out.effective = effective_bound(*c, *out.bound);
  const auto m = p.sizes("m");
  std::vector<std::pair<int, int>> pairs;
  if (p.has("x") || p.has("y")) {
    if (!p.has("x") || !p.has("y")) {
      throw SchemaError("mapping needs both x and y, or neither");
    }
    pairs.emplace_back(object_of(*c, p.str("x")), object_of(*c, p.str("y")));
  } else {
    for (int x = 0; x < c->object_count(); ++x) {
      for (int y = 0; y < c->object_count(); ++y) {
        pairs.emplace_back(x, y);
      }
    }
  }
  out.verdict = Verdict::verified;
  json cases = json::array();
  for (const auto& [x, y] : pairs) {
    const auto r = mapping_category_check(c, x, y, m, *out.bound);
    out.verdict = worst(out.verdict, r.verdict);
    json w = r.to_json();
    w["x"] = c->object_label(x);
    w["y"] = c->object_label(y);
    cases.push_back(std::move(w));
  }
  out.witness = {{"m", m}, {"pairs", cases}};
  return out;
}

Outcome run_adjoint(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  std::vector<Span> spans;
  if (p.has("span")) {
    spans.push_back(span_from_json(*c, p.j.at("span")));
  } else {
    out.bound = p.integer("bound", 3);
    out.effective = effective_bound(*c, *out.bound);
    const auto all = all_spans(*c, *out.bound);
    std::mt19937_64 rng(p.seed());
    for (std::size_t i : sample_indices(all.size(), static_cast<std::size_t>(p.integer("samples", 50)), rng)) {
      spans.push_back(all[i]);
    }
  }
  out.verdict = Verdict::verified;
  std::size_t corruptions = 0;
  std::size_t refuted = 0;
  json cases = json::array();
  for (const Span& s : spans) {
    const auto w = build_adjunction(*c, s);
    const auto t = triangle_check(*c, w);
    out.verdict = worst(out.verdict, t.verdict);
    json cs{{"span", span_json(*c, s)}, {"triangles", t.to_json(*c)}};
    if (spans.size() == 1) {
      cs["witness"] = w.to_json(*c);
    } else {
      cs["unit_target_size"] = w.unit_target_size ? json(*w.unit_target_size) : json(nullptr);
      cs["counit_target_size"] = w.counit_target_size ? json(*w.counit_target_size) : json(nullptr);
    }
    json corrupted = json::array();
    for (const auto& bad : {corrupt_unit(*c, w), corrupt_counit(*c, w)}) {
      if (!bad) {
        continue;
      }
      ++corruptions;
      const auto tb = triangle_check(*c, *bad);
      refuted += tb.verdict == Verdict::refuted ? 1 : 0;
      if (tb.verdict != Verdict::refuted) {
        out.verdict = worst(out.verdict, Verdict::refuted);
      }
      corrupted.push_back({{"verdict", to_string(tb.verdict)}, {"violation", tb.violation}});
    }
    cs["corruptions"] = corrupted;
    cases.push_back(std::move(cs));
  }
  out.witness = {{"spans", spans.size()}, {"corruptions", corruptions}, {"corruptions_refuted", refuted}, {"cases", cases}};
  return out;
}

Outcome run_dual(const Params& p) {
  const auto c = load_checked(p.str("base"));
  Outcome out;
  out.verdict = Verdict::verified;
  std::vector<int> objects;
  if (p.has("object")) {
    objects.push_back(object_of(*c, p.str("object")));
  } else {
    for (int x = 0; x < c->object_count(); ++x) {
      objects.push_back(x);
    }
  }
  json cases = json::array();
  for (int x : objects) {
    const auto d = object_duality_check(*c, x);
    out.verdict = worst(out.verdict, d.verdict);
    cases.push_back(d.to_json(*c));
  }
  out.witness = {{"objects", cases}};
  return out;
}

// ------------------------------------------------------------- locsys

bool locsys_composable(const LocalSystemSpan& s, const LocalSystemSpan& t) {
  return s.span.right == t.span.left && s.right_label == t.left_label;
}

Outcome locsys_composition(const CategoryPtr& c, const InternalCategory& k, int bound, std::size_t samples,
                           std::uint64_t seed) {
  Outcome out;
  const auto spans = all_locsys_spans(*c, k, bound);
  std::size_t unit_cases = 0;
  std::size_t assoc_cases = 0;
  std::size_t skipped = 0;
  std::string failure;
  for (const auto& s : spans) {
    const auto il = identity_locsys(*c, k, s.span.left, s.left_label);
    const auto ir = identity_locsys(*c, k, s.span.right, s.right_label);
    ++unit_cases;
    if (!locsys_iso(*c, compose_locsys(*c, k, il, s), s) || !locsys_iso(*c, compose_locsys(*c, k, s, ir), s)) {
      if (failure.empty()) {
        failure = "unit law fails for " + to_json(*c, s).dump();
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t n = 0; n < samples && !spans.empty(); ++n) {
    const auto& s = spans[rng() % spans.size()];
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (locsys_composable(s, spans[i])) {
        next.push_back(i);
      }
    }
    const auto& t = spans[next[rng() % next.size()]];
    next.clear();
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (locsys_composable(t, spans[i])) {
        next.push_back(i);
      }
    }
    const auto& u = spans[next[rng() % next.size()]];
    try {
      const auto left = compose_locsys(*c, k, compose_locsys(*c, k, s, t), u);
      const auto right = compose_locsys(*c, k, s, compose_locsys(*c, k, t, u));
      ++assoc_cases;
      if (!locsys_iso(*c, left, right) && failure.empty()) {
        failure = "associativity fails for " + json::array({to_json(*c, s), to_json(*c, t), to_json(*c, u)}).dump();
      }
    } catch (const NoLimitError&) {
      ++skipped;
    }
  }
  out.verdict = verdict_of(failure.empty() && assoc_cases > 0);
  out.witness = {{"spans", spans.size()},
                 {"unit_cases", unit_cases},
                 {"associativity_cases", assoc_cases},
                 {"skipped_out_of_base", skipped},
                 {"failure", failure}};
  return out;
}

Outcome run_locsys(const Params& p) {
  const auto c = load_checked(p.str("base"));
  const auto k = coefficients_of(p.j.at("coefficients"));
  const std::string prop = p.str("property");
  Outcome out;
  out.bound = p.integer("bound", 1);
  out.effective = effective_bound(*c, *out.bound);
  if (prop == "composition") {
    Outcome r = locsys_composition(c, *k, *out.bound, static_cast<std::size_t>(p.integer("samples", 100)), p.seed());
    r.bound = out.bound;
    r.effective = out.effective;
    return r;
  }
  if (prop == "segal") {
    const auto r = locsys_segal_check(c, k, static_cast<std::size_t>(p.integer("arity", 2)), *out.bound);
    out.verdict = r.verdict;
    out.witness = r.to_json();
  } else if (prop == "equivalence") {
    const auto r = locsys_equivalence_check(c, k, *out.bound);
    out.verdict = r.verdict;
    out.witness = r.to_json();
  } else if (prop == "mapping") {
    std::vector<std::tuple<int, std::vector<int>, int, std::vector<int>>> cases;
    if (p.has("x")) {
      cases.emplace_back(p.integer("x", 0), p.ints("xi"), p.integer("y", 0), p.ints("eta"));
    } else {
      // every pair of labelled objects within the bound
      std::vector<std::pair<int, std::vector<int>>> objs;
      for (int n = 0; n <= *out.effective; ++n) {
        std::vector<int> lab(static_cast<std::size_t>(n), 0);
        while (true) {
          objs.emplace_back(n, lab);
          int i = n - 1;
          while (i >= 0 && lab[i] == k->c0 - 1) {
            lab[i--] = 0;
          }
          if (i < 0) {
            break;
          }
          ++lab[i];
        }
      }
      for (const auto& a : objs) {
        for (const auto& b : objs) {
          cases.emplace_back(a.first, a.second, b.first, b.second);
        }
      }
    }
    out.verdict = Verdict::verified;
    json list = json::array();
    for (const auto& [x, xi, y, eta] : cases) {
      const auto r = locsys_mapping_check(c, k, x, xi, y, eta, *out.bound);
      out.verdict = worst(out.verdict, r.verdict);
      json w = r.to_json();
      w["x"] = x;
      w["xi"] = xi;
      w["y"] = y;
      w["eta"] = eta;
      list.push_back(std::move(w));
    }
    out.witness = {{"cases", list}};
  } else if (prop == "dual") {
    std::vector<LocalSystemSpan> spans;
    if (p.has("span")) {
      spans.push_back(locsys_from_json(*c, p.j.at("span")));
    } else {
      spans = all_locsys_spans(*c, *k, *out.bound);
    }
    out.verdict = Verdict::verified;
    json list = json::array();
    for (const auto& s : spans) {
      const auto v = locsys_violation(*c, *k, s);
      if (!v.empty()) {
        throw SchemaError("labelled span is inconsistent: " + v);
      }
      const auto r = locsys_dual(*c, *k, s);
      out.verdict = worst(out.verdict, r.verdict);
      if (spans.size() == 1) {
        list.push_back(r.to_json(*c));
      } else {
        list.push_back({{"span", to_json(*c, s)}, {"verdict", to_string(r.verdict)}, {"violation", r.violation}});
      }
    }
    out.witness = {{"spans", spans.size()}, {"cases", list}};
  } else {
    throw SchemaError("locsys property must be composition, segal, equivalence, mapping or dual");
  }
  return out;
}

// ---------------------------------------------------------- lagrangian

Outcome run_lag(const Params& p) {
  const std::string prop = p.str("property");
  Outcome out;
  if (prop == "certify" || prop == "compose") {
    if (!p.has("input")) {
      throw SchemaError("lag " + prop + " needs an input document");
    }
    const json& in = p.j.at("input");
    if (prop == "certify") {
      const auto l = correspondence_from_json(in);
      for (const auto* s : {&l.source, &l.target}) {
        if (!is_symplectic(s->omega)) {
          throw SchemaError("form is not symplectic (antisymmetric and non-degenerate)");
        }
      }
      const auto r = is_lagrangian(l);
      out.verdict = r.verdict;
      out.witness = {{"report", r.to_json()}, {"basis", l.basis.to_json()}};
    } else {
      if (!in.contains("compose") || !in.at("compose").is_array() || in.at("compose").size() != 2) {
        throw SchemaError("compose input needs a 'compose' array of two correspondences");
      }
      const auto l1 = correspondence_from_json(in.at("compose")[0]);
      const auto l2 = correspondence_from_json(in.at("compose")[1]);
      const auto l = compose_lagrangian(l1, l2);
      const auto r = is_lagrangian(l);
      out.verdict = r.verdict;
      out.witness = {{"composite", to_json(l)},
                     {"report", r.to_json()},
                     {"inputs_lagrangian", is_lagrangian(l1).verdict == Verdict::verified &&
                                               is_lagrangian(l2).verdict == Verdict::verified}};
    }
  } else if (prop == "closure") {
    const auto r = composition_closure(p.seed(), static_cast<std::size_t>(p.integer("samples", 100)),
                                       static_cast<std::size_t>(p.integer("max_total_dim", 12)));
    out.verdict = r.verdict;
    out.witness = r.to_json();
  } else if (prop == "zigzag") {
    auto dims = p.sizes("dims");
    if (dims.empty()) {
      dims = {2, 4, 6};
    }
    out.verdict = Verdict::verified;
    json list = json::array();
    for (std::size_t d : dims) {
      if (d % 2 != 0) {
        throw SchemaError("symplectic dimensions are even");
      }
      const auto r = duality_zigzag_check(SymplecticSpace::standard(d));
      out.verdict = worst(out.verdict, r.verdict);
      list.push_back(r.to_json());
    }
    out.witness = {{"spaces", list}};
  } else {
    throw SchemaError("lag property must be certify, compose, closure or zigzag");
  }
  return out;
}

Outcome dispatch(const json& request) {
  const Params p{request};
  const std::string check = p.str("check");
  if (check == "shapes") {
    return run_shapes(p);
  }
  if (check == "level") {
    return run_level(p);
  }
  if (check == "segal") {
    return run_segal(p);
  }
  if (check == "complete") {
    return run_complete(p);
  }
  if (check == "invertible") {
    return run_invertible(p);
  }
  if (check == "mapping") {
    return run_mapping(p);
  }
  if (check == "adjoint") {
    return run_adjoint(p);
  }
  if (check == "dual") {
    return run_dual(p);
  }
  if (check == "locsys") {
    return run_locsys(p);
  }
  return run_lag(p);
}

} // namespace

void validate_request(const json& request) {
  if (!request.is_object()) {
    throw SchemaError("request must be a JSON object");
  }
  if (!request.contains("check") || !request.at("check").is_string()) {
    throw SchemaError("request needs a string 'check'");
  }
  const auto name = request.at("check").get<std::string>();
  const auto it = schemas().find(name);
  if (it == schemas().end()) {
    throw SchemaError("unknown check '" + name + "'");
  }
  for (const auto& [key, value] : request.items()) {
    const auto f = it->second.find(key);
    if (f == it->second.end()) {
      throw SchemaError("check '" + name + "' does not take '" + key + "'");
    }
    if (!has_kind(value, f->second.kind)) {
      throw SchemaError("field '" + key + "' has the wrong type");
    }
  }
  for (const auto& [key, field] : it->second) {
    if (field.required && !request.contains(key)) {
      throw SchemaError("check '" + name + "' needs '" + key + "'");
    }
  }
  if (request.contains("bound") && request.at("bound").get<int>() < 0) {
    throw SchemaError("bound must be non-negative");
  }
  if (request.contains("seed") && !non_negative(request.at("seed"))) {
    throw SchemaError("seed must be a non-negative integer");
  }
}

json run(const json& request) {
  const auto start = std::chrono::steady_clock::now();
  json report{{"schema_version", schema_version}, {"tool_version", tool_version()}, {"request", request}};
  Outcome out;
  try {
    validate_request(request);
    report["check"] = request.at("check");
    out = dispatch(request);
  } catch (const ResourceError& e) {
    out.verdict = Verdict::inconclusive;
    out.note = e.what();
  } catch (const Error& e) {
    out.verdict = Verdict::error;
    out.note = e.what();
  } catch (const nlohmann::json::exception& e) {
    out.verdict = Verdict::error;
    out.note = std::string("malformed JSON input: ") + e.what();
  } catch (const std::exception& e) {
    out.verdict = Verdict::error;
    out.note = e.what();
  }
  if (!report.contains("check")) {
    report["check"] = nullptr;
  }
  const Params p{request.is_object() ? request : json::object()};
  report["seed"] = request.is_object() && request.contains("seed") && non_negative(request.at("seed"))
                       ? p.seed()
                       : default_seed;
  report["verdict"] = to_string(out.verdict);
  report["exit_code"] = exit_code(out.verdict);
  report["witness"] = out.witness;
  report["bound"] = out.bound ? json(*out.bound) : json(nullptr);
  report["effective_bound"] = out.effective ? json(*out.effective) : json(nullptr);
  report["max_cells"] = max_cells_from_env();
  if (!out.note.empty()) {
    report["diagnostic"] = out.note;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report["timing_ms"] = std::round(ms * 1000.0) / 1000.0;
  return report;
}

Verdict report_verdict(const json& report) {
  const auto code = report.value("exit_code", 3);
  return code >= 0 && code <= 3 ? static_cast<Verdict>(code) : Verdict::error;
}

json without_timing(json report) {
  if (report.is_object()) {
    report.erase("timing_ms");
  }
  return report;
}

SuiteResult run_suite(const json& config, unsigned workers) {
  json requests;
  if (config.is_array()) {
    requests = config;
  } else if (config.is_object() && config.contains("requests") && config.at("requests").is_array()) {
    requests = config.at("requests");
  } else if (config.is_object() && config.empty()) {
    requests = json::array();
  } else {
    throw SchemaError("suite config must be an array of requests or an object with 'requests'");
  }
  SuiteResult out;
  out.reports.resize(requests.size());
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, requests.size())));
  const auto start = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      json r = run(requests[i]);
      std::lock_guard lock(mu);
      out.reports[i] = std::move(r);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  for (auto& t : pool) {
    t.join();
  }
  json entries = json::array();
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    const auto& r = out.reports[i];
    out.verdict = worst(out.verdict, report_verdict(r));
    counts[r.at("verdict").get<std::string>()] += 1;
    const json& req = requests[i];
    entries.push_back({{"index", i},
                       {"id", req.is_object() && req.contains("id") ? req.at("id") : json(nullptr)},
                       {"check", r.at("check")},
                       {"verdict", r.at("verdict")}});
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.summary = {{"schema_version", schema_version},
                 {"tool_version", tool_version()},
                 {"requests", requests.size()},
                 {"counts", counts},
                 {"entries", entries},
                 {"verdict", to_string(out.verdict)},
                 {"exit_code", exit_code(out.verdict)},
                 {"timing_ms", std::round(ms * 1000.0) / 1000.0}};
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + " is not valid JSON: " + e.what());
  }
}

std::string dump(const json& report) { return report.dump(2) + "\n"; }

} // namespace spanlab::cli
