#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "spanlab/fincat.hpp"
#include "spanlab/spans.hpp"
#include "spanlab/verdict.hpp"

namespace spanlab {

/// Unit id_X => right o left: apex U with U -> X and the pair of maps
/// (u1, u2) : U -> A that factors through A x_Y A.
struct UnitCell {
  int apex = 0;
  int to_foot = 0;
  int first = 0;
  int second = 0;
};

/// Counit left o right => id_Y: apex V with (v1, v2) : V -> A through
/// A x_X A and V -> Y.
struct CounitCell {
  int apex = 0;
  int first = 0;
  int second = 0;
  int to_foot = 0;
};

struct AdjunctionWitness {
  Span left;
  Span right;
  UnitCell unit;
  CounitCell counit;
  /// |A x_Y A| and |A x_X A| on finite-set bases (they may exceed the skeleton).
  std::optional<std::size_t> unit_target_size;
  std::optional<std::size_t> counit_target_size;
  /// The pullbacks and the diagonals into them, when the base has them.
  std::optional<int> unit_target;
  std::optional<int> unit_diagonal;
  std::optional<int> counit_target;
  std::optional<int> counit_diagonal;

  nlohmann::json to_json(const FinCategory& c) const;
};

/// Unit and counit given by diagonals.
AdjunctionWitness build_adjunction(const FinCategory& c, const Span& s);

/// Equations making unit and counit maps of spans over the feet; empty
/// string when they hold.
std::string adjunction_data_violation(const FinCategory& c, const AdjunctionWitness& w);

/// A non-identity endomorphism of A over both feet, if one exists.
std::optional<int> fiber_swap(const FinCategory& c, const Span& s);

/// Replace the diagonal by (id, sigma) with sigma from fiber_swap; nullopt
/// when every fiber of A -> X x Y has at most one element.
std::optional<AdjunctionWitness> corrupt_unit(const FinCategory& c, const AdjunctionWitness& w);
std::optional<AdjunctionWitness> corrupt_counit(const FinCategory& c, const AdjunctionWitness& w);

/// A 2-cell s => s given by its apex and the two legs to the apex of s.
struct TwoCell {
  int apex = -1;
  int to_source = -1;
  int to_target = -1;
  /// Isomorphism to the identity 2-cell, when there is one.
  std::optional<int> comparison;

  nlohmann::json to_json(const FinCategory& c) const;
};

struct TriangleReport {
  Verdict verdict = Verdict::error;
  /// (epsilon o s) . (s o eta) and (right o epsilon) . (eta o right).
  TwoCell left_triangle;
  TwoCell right_triangle;
  std::string violation;

  nlohmann::json to_json(const FinCategory& c) const;
};

/// Both composites are computed as a single limit over the two cell
/// apexes, which is the iterated pullback of whiskered cells with every
/// intermediate object flattened away.
TriangleReport triangle_check(const FinCategory& c, const AdjunctionWitness& w);

struct DualityWitness {
  int object = 0;
  Verdict verdict = Verdict::error;
  /// |X x X| on finite-set bases.
  std::optional<std::size_t> square_size;
  /// Composite spans X <- P -> X of the two zigzags.
  Span first_zigzag;
  Span second_zigzag;
  std::optional<int> first_comparison;
  std::optional<int> second_comparison;
  std::string violation;

  nlohmann::json to_json(const FinCategory& c) const;
};

/// Self-duality of X for the cartesian product: ev : X x X <- X -> 1 and
/// coev : 1 <- X -> X x X through the diagonal. The zigzags are computed as
/// flat limits over copies of X, so X x X need not be an object of the base.
DualityWitness object_duality_check(const FinCategory& c, int x);

} // namespace spanlab
