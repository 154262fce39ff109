#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spanlab {

struct Morphism {
  std::string label;
  int src = 0;
  int tgt = 0;
};

/// A finite category given by explicit tables. Construction checks that
/// every id is in range; the category axioms are checked by validate_category.
class FinCategory {
public:
  FinCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms, std::vector<int> identities,
              const std::vector<std::array<int, 3>>& compose_triples);

  /// The skeleton of finite sets {0,...,n-1} for n <= max_size. Morphisms of
  /// a hom-set are listed in lexicographic order of their value lists.
  static FinCategory finset(int max_size);

  int object_count() const noexcept { return static_cast<int>(objects_.size()); }
  int morphism_count() const noexcept { return static_cast<int>(morphisms_.size()); }
  const std::string& object_label(int o) const { return objects_.at(o); }
  const std::vector<std::string>& object_labels() const noexcept { return objects_; }
  std::optional<int> find_object(const std::string& label) const;
  const Morphism& morphism(int m) const { return morphisms_.at(m); }
  int src(int m) const { return morphisms_[m].src; }
  int tgt(int m) const { return morphisms_[m].tgt; }
  int identity(int o) const { return identities_[o]; }
  bool is_identity(int m) const { return identities_[morphisms_[m].src] == m; }

  /// g after f, or -1 when the table has no entry.
  int compose(int g, int f) const { return compose_[static_cast<std::size_t>(g) * morphisms_.size() + f]; }
  const std::vector<int>& hom(int a, int b) const { return hom_[static_cast<std::size_t>(a) * objects_.size() + b]; }
  /// Inverse of m, or -1 when m is not invertible.
  int inverse(int m) const { return inverse_[m]; }
  bool is_iso(int m) const { return inverse_[m] >= 0; }
  /// Isomorphisms a -> a.
  const std::vector<int>& automorphisms(int a) const { return aut_[a]; }

  /// Cardinality of an object when the category carries sizes (finite sets).
  std::optional<int> size(int o) const;
  bool has_sizes() const noexcept { return !sizes_.empty(); }

  bool is_finset() const noexcept { return finset_bound_ >= 0; }
  int finset_bound() const noexcept { return finset_bound_; }
  /// Value list of a morphism of finite sets.
  const std::vector<int>& function(int m) const { return functions_.at(m); }
  /// Morphism id of a function n -> k given by its value list.
  int from_function(int n, int k, const std::vector<int>& values) const;

private:
  FinCategory() = default;
  void build_indices();

  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<int> identities_;
  std::vector<int> compose_;
  std::vector<std::vector<int>> hom_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> aut_;
  std::vector<int> sizes_;
  int finset_bound_ = -1;
  std::vector<std::vector<int>> functions_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

struct ValidationReport {
  bool ok = true;
  std::string violation;
};

ValidationReport validate_category(const FinCategory& c);

/// Representatives of the isomorphism classes of objects, in index order.
std::vector<int> iso_class_representatives(const FinCategory& c);

class Functor {
public:
  Functor(CategoryPtr source, CategoryPtr target, std::vector<int> object_map, std::vector<int> morphism_map);

  const FinCategory& source() const { return *source_; }
  const FinCategory& target() const { return *target_; }
  int on_object(int o) const { return object_map_.at(o); }
  int on_morphism(int m) const { return morphism_map_.at(m); }

private:
  CategoryPtr source_;
  CategoryPtr target_;
  std::vector<int> object_map_;
  std::vector<int> morphism_map_;
};

ValidationReport validate_functor(const Functor& f);

FinCategory category_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FinCategory& c);

/// Resolves "finset:N" or a path to a JSON category file.
FinCategory load_base(const std::string& spec);

} // namespace spanlab
