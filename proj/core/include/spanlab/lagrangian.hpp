#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "spanlab/verdict.hpp"

namespace spanlab {

using Rational = mpq_class;

/// Parses "3", "-3/2" (an ASCII or U+2212 minus). Throws SchemaError.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::vector<Rational> row(std::size_t i) const;

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalMatrix operator-() const;
  bool operator==(const RationalMatrix& other) const;

  /// Columns [from, from + count).
  RationalMatrix columns(std::size_t from, std::size_t count) const;
  /// Block diagonal sum.
  static RationalMatrix direct_sum(const RationalMatrix& a, const RationalMatrix& b);

  nlohmann::json to_json() const;
  static RationalMatrix from_json(const nlohmann::json& j);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form with zero rows dropped: the canonical basis of
/// the row space.
RationalMatrix row_reduce(const RationalMatrix& m);
std::size_t rank(const RationalMatrix& m);
/// Basis (as rows) of { v : m v = 0 }.
RationalMatrix null_space(const RationalMatrix& m);
Rational determinant(const RationalMatrix& m);

struct SymplecticSpace {
  RationalMatrix omega;

  std::size_t dim() const { return omega.rows(); }
  /// Same space with the negated form.
  SymplecticSpace bar() const { return {-omega}; }
  /// dim/2 copies of [[0, 1], [-1, 0]] on the diagonal.
  static SymplecticSpace standard(std::size_t dim);
  bool operator==(const SymplecticSpace& other) const { return omega == other.omega; }
};

bool is_symplectic(const RationalMatrix& omega);
SymplecticSpace direct_sum(const SymplecticSpace& a, const SymplecticSpace& b);

/// A subspace of source + target given by its row-reduced basis.
struct LagrangianCorrespondence {
  SymplecticSpace source;
  SymplecticSpace target;
  RationalMatrix basis;

  /// Equal as subspaces between equal spaces.
  bool operator==(const LagrangianCorrespondence& other) const;
};

/// Row-reduces the given spanning rows.
LagrangianCorrespondence make_correspondence(SymplecticSpace source, SymplecticSpace target, const RationalMatrix& rows);

struct LagrangianReport {
  Verdict verdict = Verdict::error;
  bool isotropic = false;
  bool half_dimension = false;
  std::size_t dimension = 0;
  std::string violation;

  nlohmann::json to_json() const;
};

/// Isotropy under omega_X + (-omega_Y) and dim L = (dim X + dim Y) / 2.
/// Throws MismatchError when the basis has the wrong width.
LagrangianReport is_lagrangian(const RationalMatrix& basis, const SymplecticSpace& x, const SymplecticSpace& y);
LagrangianReport is_lagrangian(const LagrangianCorrespondence& l);

/// { (x, z) : (x, y) in l1 and (y, z) in l2 for some y }. Throws
/// MismatchError when the middle spaces differ.
LagrangianCorrespondence compose_lagrangian(const LagrangianCorrespondence& l1, const LagrangianCorrespondence& l2);

/// Direct sum of correspondences, coordinates (x1, x2, y1, y2).
LagrangianCorrespondence tensor_lagrangian(const LagrangianCorrespondence& l1, const LagrangianCorrespondence& l2);

/// { (x, p x) } for a linear map p acting on column vectors.
LagrangianCorrespondence graph(const SymplecticSpace& x, const SymplecticSpace& y, const RationalMatrix& p);
LagrangianCorrespondence diagonal(const SymplecticSpace& x);

/// x |-> x + c omega(v, x) v.
RationalMatrix transvection(const SymplecticSpace& x, const std::vector<Rational>& v, const Rational& c);

/// Product of `steps` transvections with small seeded parameters.
RationalMatrix random_symplectic(const SymplecticSpace& x, std::mt19937_64& rng, int steps = 4);

/// Image of the standard Lagrangian of X + Ybar under a random symplectic map.
LagrangianCorrespondence random_lagrangian(const SymplecticSpace& x, const SymplecticSpace& y, std::mt19937_64& rng);

struct ZigzagReport {
  Verdict verdict = Verdict::error;
  std::size_t dim = 0;
  bool first = false;
  bool second = false;
  bool ev_lagrangian = false;
  bool coev_lagrangian = false;

  nlohmann::json to_json() const;
};

/// ev : Xbar + X -> 0 and coev : 0 -> X + Xbar are diagonals;
/// (id x ev)(coev x id) on X and (ev x id)(id x coev) on Xbar are compared
/// with the diagonal.
ZigzagReport duality_zigzag_check(const SymplecticSpace& x);

struct ClosureReport {
  Verdict verdict = Verdict::error;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t certified = 0;
  std::size_t transverse = 0;
  std::size_t max_total_dim = 0;
  std::string witness;

  nlohmann::json to_json() const;
};

/// Random composable pairs X -> Y -> Z with dim X + dim Y + dim Z at most
/// max_total_dim; every composite must certify Lagrangian.
ClosureReport composition_closure(std::uint64_t seed, std::size_t samples, std::size_t max_total_dim);

nlohmann::json to_json(const LagrangianCorrespondence& l);
LagrangianCorrespondence correspondence_from_json(const nlohmann::json& j);

} // namespace spanlab
