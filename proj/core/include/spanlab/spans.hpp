#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spanlab/classify.hpp"
#include "spanlab/diagram.hpp"
#include "spanlab/groupoid.hpp"
#include "spanlab/shapes.hpp"
#include "spanlab/verdict.hpp"

namespace spanlab {

// ---------------------------------------------------------------- spans

/// X <- A -> Y.
struct Span {
  int left = 0;
  int apex = 0;
  int right = 0;
  int to_left = 0;
  int to_right = 0;

  bool operator==(const Span&) const = default;
};

Span make_span(const FinCategory& c, int to_left, int to_right);
Span identity_span(const FinCategory& c, int x);
Span reverse_span(const Span& s);

struct SpanComposite {
  Span span;
  /// Limit of A -> Y <- B; legs are (to A, to B, to Y).
  Limit pullback;
};

/// s : X <- A -> Y followed by t : Y <- B -> Z, apex the canonical pullback.
/// Throws MismatchError when the shared foot differs.
SpanComposite compose_spans(const FinCategory& c, const Span& s, const Span& t);

/// An apex isomorphism s.apex -> t.apex commuting with both legs.
std::optional<int> span_iso(const FinCategory& c, const Span& s, const Span& t);

/// The one-direction span diagram on Sigma^1 (cells (0,0), (0,1), (1,1)).
Diagram span_diagram(const Span& s);
Span span_from_diagram(const Diagram& d);

/// All spans X <- A -> Y with every object of size at most `bound`.
std::vector<Span> all_spans(const FinCategory& c, int bound);

// ----------------------------------------------------- Cartesian diagrams

struct CartesianCertificate {
  struct Entry {
    std::size_t cell = 0;
    Cone cone;
  };
  std::vector<Entry> entries;

  nlohmann::json to_json(const SigmaShape& sigma) const;
};

struct KanExtension {
  Diagram diagram;
  CartesianCertificate certificate;
};

/// Restriction of a Sigma diagram to its lambda cells.
Diagram lambda_part(const FinCategory& c, const SigmaShape& sigma, const Diagram& d);

/// Extends data on the lambda cells (indexed like LambdaShape) to a
/// Cartesian diagram on the full shape. Cells are filled shortest
/// intervals first so that every arrow between filled cells factors
/// through an existing limit. Throws NoLimitError naming the first cell
/// without a limit.
KanExtension kan_extend(const FinCategory& c, const SigmaShape& sigma, const Diagram& lambda_data);

struct CartesianReport {
  bool cartesian = false;
  std::optional<std::size_t> failing_cell;
  std::string reason;
  CartesianCertificate certificate;
};

CartesianReport is_cartesian(const FinCategory& c, const SigmaShape& sigma, const Diagram& d);

/// Extends an isomorphism given on the lambda cells (lambda-indexed code)
/// between two Cartesian diagrams to all cells; nullopt when some cell has
/// no compatible isomorphism.
std::optional<Code> extend_iso(const FinCategory& c, const SigmaShape& sigma, const Diagram& from, const Diagram& to,
                               const Code& lambda_iso);

/// Number of isomorphisms on all cells restricting to the given one on
/// lambda cells (brute force, for uniqueness checks).
std::size_t count_extensions(const FinCategory& c, const SigmaShape& sigma, const Diagram& from, const Diagram& to,
                             const Code& lambda_iso);

/// Moves a diagram along cellwise isomorphisms: cell x becomes the target
/// of iso[x] and arrows are conjugated.
Diagram transport(const FinCategory& c, const Poset& p, const Diagram& d, const Code& iso);

/// Replaces the object at `cell` by a strictly larger one mapping onto it
/// (first element doubled). Finite-set bases only.
Diagram inflate_cell(const FinCategory& c, const Poset& p, const Diagram& d, std::size_t cell);

// ------------------------------------------------------------ span levels

/// The groupoid of Cartesian diagrams of a given shape with all objects
/// of size at most the bound, in skeletal form: one object per
/// isomorphism class, automorphism groups computed exactly.
class SpanLevel {
public:
  /// `restriction` is an extra isomorphism-invariant pruning rule on partial
  /// lambda data (indexed like LambdaShape).
  SpanLevel(CategoryPtr base, std::vector<std::size_t> arities, int bound, bool keep_tables = false,
            std::function<bool(const PartialDiagram&)> restriction = {});

  const FinCategory& base() const { return *base_; }
  const CategoryPtr& base_ptr() const noexcept { return base_; }
  const std::vector<std::size_t>& arities() const noexcept { return sigma_.arities(); }
  const SigmaShape& sigma() const noexcept { return sigma_; }
  const LambdaShape& lambda() const noexcept { return lambda_; }
  int bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return diagrams_.size(); }
  const Diagram& diagram(std::size_t k) const { return diagrams_.at(k); }
  const FinGroupoid& groupoid() const { return *groupoid_; }
  std::size_t nodes_visited() const noexcept { return nodes_; }

  /// Class of a Cartesian diagram and an isomorphism from the class
  /// representative to it; nullopt when out of bound. Needs keep_tables.
  std::optional<std::pair<std::size_t, Code>> classify(const Diagram& d) const;

  /// Replaces a representative (used to build corrupted levels in tests).
  void replace_diagram(std::size_t k, Diagram d);

  nlohmann::json to_json(bool with_objects = false) const;

private:
  CategoryPtr base_;
  SigmaShape sigma_;
  LambdaShape lambda_;
  int bound_;
  std::unique_ptr<DiagramClassifier> classifier_;
  std::vector<int> lambda_to_level_;
  std::vector<Diagram> diagrams_;
  std::unique_ptr<FinGroupoid> groupoid_;
  std::size_t nodes_ = 0;
};

/// Inflates the top cell of the first class where that is possible and
/// returns the class; the level then holds a non-Cartesian diagram.
std::optional<std::size_t> corrupt_level(SpanLevel& level);

/// min(bound, N) on finset:N, the bound itself otherwise.
int effective_bound(const FinCategory& c, int bound);

/// Cell map of the shape map that applies `phi` in direction r and the
/// identity in every other direction.
std::vector<std::size_t> direction_map(const SigmaShape& source, std::size_t r, const SimplexMap& phi);

// ---------------------------------------------------------------- checks

struct SegalDirectionReport {
  std::size_t direction = 0;
  Verdict verdict = Verdict::error;
  std::size_t level_classes = 0;
  std::size_t target_classes = 0;
  std::size_t target_in_bound = 0;
  std::size_t excluded = 0;
  EquivalenceReport equivalence;
  std::string witness;

  nlohmann::json to_json() const;
};

struct SegalReport {
  Verdict verdict = Verdict::error;
  std::vector<SegalDirectionReport> directions;
  std::string note;

  nlohmann::json to_json() const;
};

/// Compares `level` with the iterated homotopy fiber product of `edges`
/// over `vertices` in direction r. `edges` and `vertices` must carry
/// classification tables.
SegalDirectionReport segal_check_direction(const SpanLevel& level, std::size_t r, const SpanLevel& edges,
                                           const SpanLevel& vertices);

/// Resource exhaustion yields an inconclusive verdict. With `corrupt` the
/// level is first damaged by corrupt_level.
SegalReport segal_check(CategoryPtr base, const std::vector<std::size_t>& arities, int bound, bool corrupt = false);

/// Search for t : Y <- B -> X with t o s and s o t isomorphic to identities.
std::optional<Span> find_inverse_span(const FinCategory& c, const Span& s, int bound);

struct InvertibleReport {
  Verdict verdict = Verdict::error;
  std::size_t spans = 0;
  std::size_t invertible = 0;
  std::string witness;

  nlohmann::json to_json() const;
};

InvertibleReport invertible_span_check(const FinCategory& c, int bound);

struct CompletenessReport {
  Verdict verdict = Verdict::error;
  std::size_t object_classes = 0;
  std::size_t span_classes = 0;
  std::size_t invertible_classes = 0;
  EquivalenceReport equivalence;

  nlohmann::json to_json() const;
};

CompletenessReport completeness_check(CategoryPtr base, int bound);

/// C over the pair (X, Y): objects (A, A -> X, A -> Y), morphisms the maps
/// of apexes commuting with both legs. Agrees with C over X x Y whenever
/// the product exists, and is defined even when it does not.
struct SliceCategory {
  CategoryPtr category;
  std::vector<int> apex;
  std::vector<int> to_x;
  std::vector<int> to_y;
  std::vector<int> underlying;

  /// Slice morphism s -> t over the base morphism m, or -1.
  int lift(int s, int t, int m) const;
};

SliceCategory slice_over_pair(const FinCategory& c, int x, int y);

struct MappingReport {
  Verdict verdict = Verdict::error;
  std::size_t fiber_classes = 0;
  std::size_t slice_classes = 0;
  EquivalenceReport equivalence;
  std::string note;

  nlohmann::json to_json() const;
};

/// Fiber of Level(1, m) -> Level(0, m)^2 over the constant diagrams at
/// (X, Y) against the level m of the slice over (X, Y). An empty m
/// compares with the core of the slice.
MappingReport mapping_category_check(CategoryPtr base, int x, int y, const std::vector<std::size_t>& m, int bound);

struct TwoFoldLevel {
  std::vector<std::size_t> classes;
  std::unique_ptr<FinGroupoid> groupoid;
};

/// Classes of level (p, q) whose second-direction arrows over every vertex
/// of the first direction are invertible.
TwoFoldLevel underlying_2fold_level(const SpanLevel& level);

/// Direct count of 2-fold spans (spans of spans with common feet), grouped
/// by automorphism order, by brute-force orbit computation. Finite-set
/// bases only.
std::vector<std::pair<std::size_t, std::size_t>> two_fold_span_profile(const FinCategory& c, int bound);

} // namespace spanlab
