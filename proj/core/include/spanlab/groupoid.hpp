#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spanlab/fincat.hpp"

namespace spanlab {

/// An arrow of a groupoid: a tuple of isomorphisms of the base category,
/// composed and inverted entrywise.
using Code = std::vector<int>;

Code compose_codes(const FinCategory& c, const Code& g, const Code& f);
Code invert_code(const FinCategory& c, const Code& f);

/// A finite groupoid in presented form. Each connected component has a
/// representative and its automorphism group; every object carries a
/// transport arrow from its component representative, so
/// hom(x, y) = { t_y . g . t_x^-1 : g in Aut(rep) }.
class FinGroupoid {
public:
  struct Object {
    std::string label;
    int component = 0;
    Code transport;
  };
  struct Component {
    int representative = 0;
    /// Automorphisms of the representative; entry 0 is the identity.
    std::vector<Code> automorphisms;
  };

  FinGroupoid(CategoryPtr base, std::size_t width, std::vector<Object> objects, std::vector<Component> components);

  /// The groupoid of isomorphisms of a category.
  static FinGroupoid core(CategoryPtr c);
  /// Interprets an explicit category as a groupoid; throws NotGroupoidError
  /// when some morphism is not invertible.
  static FinGroupoid from_groupoid_category(CategoryPtr g);
  /// One object, trivial automorphism group.
  static FinGroupoid point(CategoryPtr base);

  const FinCategory& base() const { return *base_; }
  const CategoryPtr& base_ptr() const noexcept { return base_; }
  std::size_t width() const noexcept { return width_; }
  int object_count() const noexcept { return static_cast<int>(objects_.size()); }
  int component_count() const noexcept { return static_cast<int>(components_.size()); }
  const Object& object(int x) const { return objects_.at(x); }
  const Component& component(int k) const { return components_.at(k); }
  int component_of(int x) const { return objects_.at(x).component; }
  int representative(int k) const { return components_.at(k).representative; }
  std::size_t aut_order(int k) const { return components_.at(k).automorphisms.size(); }

  Code compose(const Code& g, const Code& f) const { return compose_codes(*base_, g, f); }
  Code inverse(const Code& f) const { return invert_code(*base_, f); }
  Code identity(int x) const;

  /// Position of an automorphism of the component representative, or -1.
  int aut_index(int k, const Code& g) const;
  std::vector<Code> hom(int x, int y) const;
  /// Conjugates an arrow x -> y (same component) back to Aut(rep).
  Code to_representative(int x, int y, const Code& arrow) const;

  /// The full subgroupoid on component representatives.
  FinGroupoid skeleton() const;
  /// The full subgroupoid on the components for which keep(k) holds.
  FinGroupoid full_subgroupoid(const std::function<bool(int)>& keep, std::vector<int>* old_components = nullptr) const;

  nlohmann::json to_json() const;

private:
  CategoryPtr base_;
  std::size_t width_;
  std::vector<Object> objects_;
  std::vector<Component> components_;
  std::vector<std::vector<std::pair<Code, int>>> aut_lookup_;
};

/// A functor between presented groupoids. arrow_image(x, y, f) sends an
/// arrow x -> y of the source to an arrow F x -> F y of the target.
struct GroupoidMap {
  const FinGroupoid* source = nullptr;
  const FinGroupoid* target = nullptr;
  std::vector<int> object_image;
  std::function<Code(int, int, const Code&)> arrow_image;
};

/// Functoriality on every pair of automorphisms of representatives and on
/// transports.
ValidationReport validate_map(const GroupoidMap& f);

struct EquivalenceReport {
  bool fully_faithful = false;
  bool essentially_surjective = false;
  /// Target components skipped by the exclusion predicate.
  std::size_t excluded = 0;
  std::string violation;
  /// Source component for each target component (-1 when unhit).
  std::vector<int> quasi_inverse;
  /// Target component of each source component.
  std::vector<int> component_map;

  bool equivalent() const { return fully_faithful && essentially_surjective; }
  nlohmann::json to_json() const;
};

/// Decides whether F is fully faithful and essentially surjective.
/// Target components for which `excluded` returns true are not required
/// to be hit.
EquivalenceReport equivalent(const GroupoidMap& f, const std::function<bool(int)>& excluded = {});

/// Sorted (automorphism group order, number of components) pairs.
std::vector<std::pair<std::size_t, std::size_t>> pi0_aut_profile(const FinGroupoid& g);

/// Brute-force isomorphism of two finite groups given as arrow lists of
/// presented groupoids. Orders above `max_order` raise ResourceError.
bool groups_isomorphic(const FinGroupoid& g, int gk, const FinGroupoid& h, int hk, std::size_t max_order = 24);

/// Equivalence of groupoids without a given functor: equal profiles and a
/// matching of components with isomorphic automorphism groups.
bool abstractly_equivalent(const FinGroupoid& g, const FinGroupoid& h, std::size_t max_order = 24);

/// Homotopy pullback of F : A -> K and G : B -> K. Objects are triples
/// (a, b, alpha : F a -> G b); an arrow (u, v) is stored as the code of u
/// followed by the code of v.
class IsoComma {
public:
  struct Triple {
    int a = 0;
    int b = 0;
    Code alpha;
  };

  /// With `all_objects` false only one object per component is built.
  IsoComma(const GroupoidMap& f, const GroupoidMap& g, bool all_objects = true);

  const FinGroupoid& groupoid() const { return *groupoid_; }
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t left_width() const noexcept { return left_width_; }
  Code left(const Code& arrow) const;
  Code right(const Code& arrow) const;

  /// Component of (a, b, alpha) and an arrow from its representative to it.
  std::pair<int, Code> locate(int a, int b, const Code& alpha) const;

  GroupoidMap left_projection() const;
  GroupoidMap right_projection() const;

private:
  struct Entry {
    int component = -1;
    int u = 0;
    int v = 0;
  };
  struct PairTable {
    int k = -1;
    std::vector<Code> left_images;
    std::vector<Code> right_images;
    std::vector<Entry> entries;
  };

  const PairTable* table(int ca, int cb) const;

  const FinGroupoid* a_;
  const FinGroupoid* b_;
  const FinGroupoid* k_;
  GroupoidMap f_;
  GroupoidMap g_;
  std::size_t left_width_ = 0;
  std::unordered_map<std::uint64_t, PairTable> tables_;
  std::vector<Triple> triples_;
  std::unique_ptr<FinGroupoid> groupoid_;
};

/// Product groupoid; arrow codes are concatenated.
FinGroupoid product(const FinGroupoid& a, const FinGroupoid& b);

FinGroupoid groupoid_from_json(const nlohmann::json& j);

} // namespace spanlab
