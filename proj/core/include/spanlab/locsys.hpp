#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spanlab/duality.hpp"
#include "spanlab/fincat.hpp"
#include "spanlab/groupoid.hpp"
#include "spanlab/spans.hpp"
#include "spanlab/verdict.hpp"

namespace spanlab {

/// A strict category object in finite sets: objects 0..c0-1, morphisms
/// 0..c1-1, composition defined on pairs (g, f) with src g = tgt f.
struct InternalCategory {
  int c0 = 0;
  int c1 = 0;
  std::vector<int> src;
  std::vector<int> tgt;
  std::vector<int> ident;
  /// Dense c1 x c1 table, g * c1 + f -> g o f, -1 when undefined.
  std::vector<int> comp;
  std::optional<std::vector<int>> inv;

  int compose(int g, int f) const { return comp[static_cast<std::size_t>(g) * c1 + f]; }
  bool composable(int g, int f) const { return src[g] == tgt[f]; }

  static InternalCategory discrete(int n);
  /// One object, the cyclic group of order n, with its inverse table.
  static InternalCategory cyclic_group(int n);
  /// Objects 0, 1 and one non-identity morphism 0 -> 1 (id_0 = 0, id_1 = 1, m = 2).
  static InternalCategory walking_arrow();
};

/// Checks typing, unit and associativity laws, and the inverse table when
/// present.
ValidationReport validate_internal(const InternalCategory& k);

InternalCategory internal_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InternalCategory& k);

/// Two-sided inverse by search.
std::optional<int> internal_inverse(const InternalCategory& k, int m);
bool is_internal_groupoid(const InternalCategory& k);
/// Every invertible morphism is an identity.
bool only_trivial_isos(const InternalCategory& k);

/// X <- A -> Y over finite sets with xi : X -> C0, eta : Y -> C0 and
/// a : A -> C1 such that src a = xi f and tgt a = eta g.
struct LocalSystemSpan {
  Span span;
  std::vector<int> left_label;
  std::vector<int> apex_label;
  std::vector<int> right_label;

  bool operator==(const LocalSystemSpan&) const = default;
};

/// Empty string when the labels are compatible with the legs.
std::string locsys_violation(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s);

LocalSystemSpan identity_locsys(const FinCategory& c, const InternalCategory& k, int x, const std::vector<int>& xi);

/// Pullback apex labelled by composites. Throws MismatchError when the
/// shared foot or its labels differ.
LocalSystemSpan compose_locsys(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s,
                               const LocalSystemSpan& t);

/// Apex isomorphism commuting with legs and labels.
std::optional<int> locsys_iso(const FinCategory& c, const LocalSystemSpan& s, const LocalSystemSpan& t);

/// Every labelled span with feet and apex of size at most `bound`.
std::vector<LocalSystemSpan> all_locsys_spans(const FinCategory& c, const InternalCategory& k, int bound);

nlohmann::json to_json(const FinCategory& c, const LocalSystemSpan& s);
LocalSystemSpan locsys_from_json(const FinCategory& c, const nlohmann::json& j);

/// A Sigma^n diagram with one label per element of every cell: C0 on
/// vertices, C1 on longer intervals (the composite along the chain).
struct LabeledDiagram {
  Diagram diagram;
  std::vector<std::vector<int>> labels;

  bool operator==(const LabeledDiagram&) const = default;
  auto operator<=>(const LabeledDiagram&) const = default;
};

/// Labels on longer cells recomputed from the edge labels.
std::vector<std::vector<int>> complete_labels(const FinCategory& c, const InternalCategory& k, const SigmaShape& sigma,
                                              const Diagram& d, const std::vector<std::vector<int>>& labels);

/// Empty string when labels are typed and compatible along every cover.
std::string label_violation(const FinCategory& c, const InternalCategory& k, const SigmaShape& sigma,
                            const LabeledDiagram& d);

/// Pull back along a cell map of one-direction shapes, inserting identities
/// where an interval collapses.
LabeledDiagram pull_labeled(const FinCategory& c, const InternalCategory& k, const SigmaShape& from,
                            const LabeledDiagram& d, const SigmaShape& to, const std::vector<std::size_t>& map);

/// Cell x becomes the target of iso[x]; labels move along.
LabeledDiagram transport_labeled(const FinCategory& c, const SigmaShape& sigma, const LabeledDiagram& d,
                                 const Code& iso);

/// Cartesian Sigma^n diagrams of finite sets of size at most the bound with
/// compatible labels, up to label-preserving isomorphism. Built from the
/// plain level: each class contributes the orbits of its automorphism
/// group on the compatible labellings, stabilizers as automorphisms.
class LocalSystemLevel {
public:
  LocalSystemLevel(CategoryPtr base, std::shared_ptr<const InternalCategory> coefficients, std::size_t n, int bound);
  ~LocalSystemLevel();
  LocalSystemLevel(LocalSystemLevel&&) noexcept;

  const FinCategory& base() const { return plain_->base(); }
  const InternalCategory& coefficients() const { return *k_; }
  const SigmaShape& sigma() const { return plain_->sigma(); }
  int bound() const { return plain_->bound(); }
  std::size_t size() const noexcept { return data_.size(); }
  const LabeledDiagram& datum(std::size_t k) const { return data_.at(k); }
  const FinGroupoid& groupoid() const { return *groupoid_; }
  const SpanLevel& plain() const { return *plain_; }
  /// Plain class underlying a labelled class.
  std::size_t plain_class(std::size_t k) const { return plain_of_.at(k); }

  std::optional<std::pair<std::size_t, Code>> classify(const LabeledDiagram& d) const;

  nlohmann::json to_json(bool with_objects = false) const;

private:
  struct Table;
  CategoryPtr base_;
  std::shared_ptr<const InternalCategory> k_;
  std::unique_ptr<SpanLevel> plain_;
  std::vector<LabeledDiagram> data_;
  std::vector<std::size_t> plain_of_;
  std::unique_ptr<Table> table_;
  std::unique_ptr<FinGroupoid> groupoid_;
};

LabeledDiagram labeled_span_diagram(const LocalSystemSpan& s);

SegalDirectionReport locsys_segal_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k, std::size_t n,
                                        int bound);

std::optional<LocalSystemSpan> find_locsys_inverse(const FinCategory& c, const InternalCategory& k,
                                                   const LocalSystemSpan& s, int bound);

struct LocsysEquivalenceReport {
  Verdict verdict = Verdict::error;
  std::size_t spans = 0;
  std::size_t invertible = 0;
  /// Invertibility agrees with bijective legs plus invertible labels.
  bool classification_agrees = false;
  std::string classification_witness;
  /// Degeneracy level 0 -> invertible part of level 1.
  bool rezk_equivalent = false;
  /// Expected Rezk outcome: C has no non-identity isomorphisms.
  bool coefficients_complete = false;
  EquivalenceReport equivalence;

  nlohmann::json to_json() const;
};

LocsysEquivalenceReport locsys_equivalence_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k,
                                                 int bound);

struct LocsysDualReport {
  Verdict verdict = Verdict::error;
  LocalSystemSpan dual;
  AdjunctionWitness adjunction;
  TriangleReport triangles;
  /// The same check with the dual as the left adjoint.
  TriangleReport mirror_triangles;
  std::string violation;

  nlohmann::json to_json(const FinCategory& c) const;
};

/// Reversed span with inverted labels; the diagonal unit and counit carry
/// identity labels. Throws NotGroupoidError unless C is a groupoid.
LocsysDualReport locsys_dual(const FinCategory& c, const InternalCategory& k, const LocalSystemSpan& s);

/// C_{xi,eta}: triples (x, y, m) with src m = xi(x), tgt m = eta(y).
std::vector<std::array<int, 3>> comma_object(const InternalCategory& k, const std::vector<int>& xi,
                                             const std::vector<int>& eta);

struct LocsysMappingReport {
  Verdict verdict = Verdict::error;
  std::size_t comma_size = 0;
  std::size_t fiber_classes = 0;
  std::size_t slice_classes = 0;
  EquivalenceReport equivalence;

  nlohmann::json to_json() const;
};

/// Fiber of level 1 -> level 0 x level 0 over ((X, xi), (Y, eta)) against
/// the core of finite sets over C_{xi,eta}.
LocsysMappingReport locsys_mapping_check(CategoryPtr base, std::shared_ptr<const InternalCategory> k, int x,
                                         const std::vector<int>& xi, int y, const std::vector<int>& eta, int bound);

} // namespace spanlab
