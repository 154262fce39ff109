#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "spanlab/diagram.hpp"
#include "spanlab/groupoid.hpp"

namespace spanlab {

/// Enumeration ceiling for partial diagrams; SPANLAB_MAX_CELLS overrides it.
std::size_t max_cells_from_env(std::size_t fallback = 2'000'000);

/// A partially assigned diagram handed to pruning callbacks. Unassigned
/// objects and arrows are -1; `assigned` lists elements in the order
/// they were filled.
struct PartialDiagram {
  const Diagram& diagram;
  const std::vector<std::size_t>& assigned;
};

/// Enumerates isomorphism classes of diagrams of a fixed poset shape with
/// object sizes at most `bound`, by orderly generation: cells are added
/// one at a time, and the candidate cones at each step are reduced to
/// orbits of the automorphism group of the partial representative times
/// the automorphism group of the new object. The same pass yields the
/// automorphism group of every class.
class DiagramClassifier {
public:
  struct Options {
    /// Maximum object size, ignored when the base carries no sizes.
    int bound = 0;
    /// Keep orbit tables so that arbitrary diagrams can be classified.
    bool keep_tables = false;
    /// Allowed objects per element (empty: all class representatives).
    std::function<bool(std::size_t, int)> object_filter;
    /// Called after each cell is filled; returning true discards the subtree.
    /// Must be invariant under isomorphism of partial diagrams.
    std::function<bool(const PartialDiagram&)> prune;
    std::size_t max_nodes = 0;
  };

  DiagramClassifier(CategoryPtr base, Poset poset, Options options);
  ~DiagramClassifier();
  DiagramClassifier(DiagramClassifier&&) noexcept;
  DiagramClassifier& operator=(DiagramClassifier&&) noexcept;

  const Poset& poset() const noexcept;
  const FinCategory& base() const noexcept;
  std::size_t class_count() const noexcept;
  const Diagram& representative(std::size_t k) const;
  /// Automorphisms of the representative, identity first; codes are
  /// indexed by poset element.
  const std::vector<Code>& automorphisms(std::size_t k) const;
  std::size_t nodes_visited() const noexcept;
  const std::vector<std::size_t>& fill_order() const noexcept;

  /// Class of d and an isomorphism from its representative to d, or nullopt
  /// when d lies outside the enumerated (bounded, unpruned) range.
  std::optional<std::pair<std::size_t, Code>> classify(const Diagram& d) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// The order in which the classifier fills cells: depth-first from each
/// element in index order, targets of covers before their sources.
std::vector<std::size_t> fill_order(const Poset& p);

} // namespace spanlab
