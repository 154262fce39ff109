#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace spanlab {

/// A weakly monotone map [n] -> [m] of totally ordered sets.
class SimplexMap {
public:
  /// Throws ShapeSpecError unless `values` has n+1 entries, is weakly
  /// increasing, and is bounded by `target_size`.
  SimplexMap(std::size_t source_size, std::size_t target_size, std::vector<std::size_t> values);

  static SimplexMap identity(std::size_t n);
  /// Every monotone map [n] -> [m], in lexicographic order of value lists.
  static std::vector<SimplexMap> all(std::size_t n, std::size_t m);

  std::size_t source_size() const noexcept { return source_size_; }
  std::size_t target_size() const noexcept { return target_size_; }
  const std::vector<std::size_t>& values() const noexcept { return values_; }
  std::size_t operator()(std::size_t i) const { return values_.at(i); }

  /// The composite `next` after `*this`.
  SimplexMap then(const SimplexMap& next) const;

  /// Inert maps are inclusions of subintervals: phi(i) = phi(0) + i.
  bool is_inert() const noexcept;

  bool operator==(const SimplexMap&) const = default;

private:
  std::size_t source_size_;
  std::size_t target_size_;
  std::vector<std::size_t> values_;
};

using Interval = std::pair<std::size_t, std::size_t>;
using Cell = std::vector<Interval>;

std::string to_string(const Cell& cell);

/// A finite poset on {0,...,size-1}. An element a with a <= b is read as
/// an arrow a -> b; diagrams send it to a morphism D(a) -> D(b).
class Poset {
public:
  Poset() = default;
  Poset(std::size_t size, const std::function<bool(std::size_t, std::size_t)>& leq);

  std::size_t size() const noexcept { return size_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size_ + b] != 0; }

  /// Hasse diagram edges (a, b) with a < b and nothing strictly between.
  const std::vector<std::pair<std::size_t, std::size_t>>& covers() const noexcept { return covers_; }
  /// Indices into covers() of the edges leaving a.
  const std::vector<std::size_t>& covers_from(std::size_t a) const { return out_[a]; }
  std::optional<std::size_t> cover_index(std::size_t a, std::size_t b) const;

  /// Elements ordered so that every b > a appears before a.
  const std::vector<std::size_t>& targets_first() const noexcept { return targets_first_; }

  /// Elements b with a <= b, in increasing index order.
  std::vector<std::size_t> up_set(std::size_t a) const;

private:
  std::size_t size_ = 0;
  std::vector<char> leq_;
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> targets_first_;
};

/// The poset of k-tuples of subintervals (i_r, j_r) of [n_r], ordered by
/// (i,j) <= (i',j') iff i <= i' and j' <= j in every direction.
class SigmaShape {
public:
  /// Throws ShapeSpecError on an empty arity list.
  explicit SigmaShape(std::vector<std::size_t> arities);

  const std::vector<std::size_t>& arities() const noexcept { return arities_; }
  std::size_t directions() const noexcept { return arities_.size(); }
  std::size_t size() const noexcept { return cells_.size(); }
  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::optional<std::size_t> index_of(const Cell& cell) const;
  const Poset& poset() const noexcept { return poset_; }

  /// True when j_r - i_r <= 1 in every direction.
  bool in_lambda(std::size_t i) const;

  /// Cells whose component in `direction` equals `interval`, in index order.
  std::vector<std::size_t> slice(std::size_t direction, Interval interval) const;

  bool operator==(const SigmaShape& other) const { return arities_ == other.arities_; }

private:
  std::vector<std::size_t> arities_;
  std::vector<Cell> cells_;
  Poset poset_;
};

/// The full subposet of a SigmaShape on cells with all intervals of length <= 1.
class LambdaShape {
public:
  explicit LambdaShape(const SigmaShape& parent);

  const std::vector<std::size_t>& arities() const noexcept { return arities_; }
  std::size_t size() const noexcept { return to_parent_.size(); }
  std::size_t to_parent(std::size_t i) const { return to_parent_.at(i); }
  const std::vector<std::size_t>& parent_indices() const noexcept { return to_parent_; }
  std::optional<std::size_t> from_parent(std::size_t parent_index) const;
  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  const Poset& poset() const noexcept { return poset_; }

private:
  std::vector<std::size_t> arities_;
  std::vector<std::size_t> to_parent_;
  std::vector<std::optional<std::size_t>> from_parent_;
  std::vector<Cell> cells_;
  Poset poset_;
};

/// An order-preserving map between two shapes, given by cell indices.
struct PosetMap {
  std::vector<std::size_t> source_arities;
  std::vector<std::size_t> target_arities;
  std::vector<std::size_t> image;

  std::size_t operator()(std::size_t i) const { return image.at(i); }
  bool operator==(const PosetMap&) const = default;
};

/// (i,j) |-> (phi(i), phi(j)) on a one-direction shape.
PosetMap sigma_map(const SimplexMap& phi, const SigmaShape& source);
/// One simplex map per direction.
PosetMap sigma_map(std::span<const SimplexMap> phis, const SigmaShape& source);

/// Composite of poset maps: `second` after `first`.
PosetMap compose(const PosetMap& first, const PosetMap& second);

/// True when the map sends every lambda cell of its source to a lambda cell.
bool preserves_lambda(const PosetMap& map);

struct WedgeCheck {
  bool holds = false;
  std::size_t glued_size = 0;
  std::size_t lambda_size = 0;
  /// Image in the lambda shape of each element of the glued poset.
  std::vector<std::size_t> witness;
  std::string mismatch;
};

/// Glues n copies of the one-edge span poset end to end and compares the
/// strict colimit with the lambda shape of [n].
WedgeCheck lambda_wedge_check(std::size_t n);

nlohmann::json to_json(const SigmaShape& shape);
nlohmann::json to_json(const LambdaShape& shape);

} // namespace spanlab
