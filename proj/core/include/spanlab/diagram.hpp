#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spanlab/fincat.hpp"
#include "spanlab/shapes.hpp"

namespace spanlab {

/// A functor from a finite poset into a FinCategory: one object per element
/// and one morphism per cover relation (indexed like Poset::covers()).
struct Diagram {
  std::vector<int> objects;
  std::vector<int> arrows;

  bool operator==(const Diagram&) const = default;
  auto operator<=>(const Diagram&) const = default;
};

/// D(a -> b) for every a <= b, as a dense size x size table (-1 off the order).
class PathTable {
public:
  PathTable() = default;
  PathTable(std::size_t size, std::vector<int> table) : size_(size), table_(std::move(table)) {}
  int operator()(std::size_t a, std::size_t b) const { return table_[a * size_ + b]; }

private:
  std::size_t size_ = 0;
  std::vector<int> table_;
};

/// Checks typing of every cover arrow and that all paths between two
/// elements compose to the same morphism.
ValidationReport check_functorial(const FinCategory& c, const Poset& p, const Diagram& d);

/// Path table of a functorial diagram; nullopt when some square fails to commute.
std::optional<PathTable> path_table(const FinCategory& c, const Poset& p, const Diagram& d);

/// Composite along the first chain of covers from a to b (a <= b required).
int path_map(const FinCategory& c, const Poset& p, const Diagram& d, std::size_t a, std::size_t b);

/// The full subposet on `elements` (given as indices into p, increasing).
Poset subposet(const Poset& p, const std::vector<std::size_t>& elements);
/// Restriction of d to the full subposet on `elements`.
Diagram restrict_diagram(const FinCategory& c, const Poset& p, const Diagram& d,
                         const std::vector<std::size_t>& elements);

/// Pulls a diagram back along an order-preserving map of shapes.
Diagram pull_back(const FinCategory& c, const Poset& target_poset, const Diagram& d, const Poset& source_poset,
                  const std::vector<std::size_t>& map);

struct Cone {
  int apex = -1;
  std::vector<int> legs;

  bool operator==(const Cone&) const = default;
};

/// A limit cone. For finite-set bases `families` lists, for each apex
/// element, its image in every diagram object (the canonical construction).
struct Limit {
  Cone cone;
  std::vector<std::vector<int>> families;
};

bool is_cone(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone);

/// All cones over `apex`, as full leg lists, in enumeration order of the
/// legs at the minimal elements.
std::vector<std::vector<int>> cones_over(const FinCategory& c, const Poset& p, const Diagram& d, int apex);

/// Canonical limit in a finite-set skeleton, cone search otherwise.
/// Throws NoLimitError when no universal cone exists.
Limit limit(const FinCategory& c, const Poset& p, const Diagram& d);

/// Number of elements of the limit in a finite-set skeleton, even when it
/// exceeds the skeleton; nullopt on other bases.
std::optional<std::size_t> limit_cardinality(const FinCategory& c, const Poset& p, const Diagram& d);

/// Exhaustive search: first apex (in object order) carrying a universal cone.
Cone limit_by_search(const FinCategory& c, const Poset& p, const Diagram& d);

/// Universality of a cone. In a finite-set skeleton this compares with the
/// canonical limit; otherwise h |-> cone o h is checked to be a bijection
/// hom(o, apex) -> Cones(o, D) for every object o.
bool is_limit(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone);

/// Same universality test by cone counting, for any base.
bool is_limit_by_counting(const FinCategory& c, const Poset& p, const Diagram& d, const Cone& cone);

/// The unique h with lim.legs o h = other.legs.
int factor(const FinCategory& c, const Poset& p, const Diagram& d, const Limit& lim, const Cone& other);

/// The poset a -> x <- b used for pullbacks: elements 0 = a, 1 = b, 2 = x.
const Poset& cospan_poset();
Diagram cospan_diagram(const FinCategory& c, int f, int g);

/// Limit cone of A -f-> X <-g- B; legs are (to A, to B, to X).
Limit pullback(const FinCategory& c, int f, int g);

} // namespace spanlab
