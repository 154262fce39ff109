#include "spanlab/lagrangian.hpp"

#include <utility>

#include "spanlab/errors.hpp"

namespace spanlab {

namespace {

// Standard Lagrangian of a space with block-diagonal standard-shaped form:
// the first coordinate of every 2x2 block.
RationalMatrix standard_lagrangian(std::size_t dim) {
  RationalMatrix out(dim / 2, dim);
  for (std::size_t i = 0; i < dim / 2; ++i) {
    out.at(i, 2 * i) = 1;
  }
  return out;
}

long small(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  // U+2212
  const std::string minus = "\xE2\x88\x92";
  for (auto pos = s.find(minus); pos != std::string::npos; pos = s.find(minus)) {
    s.replace(pos, minus.size(), "-");
  }
  if (s.empty() || s.find_first_not_of("-+0123456789/") != std::string::npos) {
    throw SchemaError("not a fraction: '" + text + "'");
  }
  Rational q;
  if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0 || q.get_den() == 0) {
    throw SchemaError("not a fraction: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

// ------------------------------------------------------------ matrices

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.at(i, i) = 1;
  }
  return out;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
  RationalMatrix out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw MismatchError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " entries, expected " +
                          std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out.at(i, j) = rows[i][j];
    }
  }
  return out;
}

std::vector<Rational> RationalMatrix::row(std::size_t i) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out.at(j, i) = at(i, j);
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  if (cols_ != other.rows_) {
    throw MismatchError("matrix product of " + std::to_string(rows_) + "x" + std::to_string(cols_) + " and " +
                        std::to_string(other.rows_) + "x" + std::to_string(other.cols_));
  }
  RationalMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k) == 0) {
        continue;
      }
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out.at(i, j) += at(i, k) * other.at(k, j);
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator-() const {
  RationalMatrix out(*this);
  for (auto& q : out.data_) {
    q = -q;
  }
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

RationalMatrix RationalMatrix::columns(std::size_t from, std::size_t count) const {
  RationalMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      out.at(i, j) = at(i, from + j);
    }
  }
  return out;
}

RationalMatrix RationalMatrix::direct_sum(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix out(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) {
      out.at(i, j) = a.at(i, j);
    }
  }
  for (std::size_t i = 0; i < b.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      out.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
    }
  }
  return out;
}

nlohmann::json RationalMatrix::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < rows_; ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < cols_; ++j) {
      r.push_back(spanlab::to_string(at(i, j)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

RationalMatrix RationalMatrix::from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw SchemaError("matrix must be an array of rows");
  }
  std::vector<std::vector<Rational>> rows;
  std::size_t cols = 0;
  for (const auto& r : j) {
    if (!r.is_array()) {
      throw SchemaError("matrix rows must be arrays");
    }
    std::vector<Rational> row;
    for (const auto& e : r) {
      if (e.is_string()) {
        row.push_back(parse_rational(e.get<std::string>()));
      } else if (e.is_number_integer()) {
        row.push_back(Rational(e.get<long>()));
      } else {
        throw SchemaError("matrix entries must be fraction strings or integers");
      }
    }
    if (!rows.empty() && row.size() != cols) {
      throw SchemaError("matrix rows have different lengths");
    }
    cols = row.size();
    rows.push_back(std::move(row));
  }
  return from_rows(rows, cols);
}

RationalMatrix row_reduce(const RationalMatrix& m) {
  RationalMatrix a = m;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < a.rows() && a.at(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == a.rows()) {
      continue;
    }
    if (pivot != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::swap(a.at(pivot, j), a.at(r, j));
      }
    }
    const Rational inv = 1 / a.at(r, col);
    for (std::size_t j = col; j < a.cols(); ++j) {
      a.at(r, j) *= inv;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, col) == 0) {
        continue;
      }
      const Rational f = a.at(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) {
        a.at(i, j) -= f * a.at(r, j);
      }
    }
    ++r;
  }
  RationalMatrix out(r, a.cols());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.at(i, j) = a.at(i, j);
    }
  }
  return out;
}

std::size_t rank(const RationalMatrix& m) { return row_reduce(m).rows(); }

RationalMatrix null_space(const RationalMatrix& m) {
  const RationalMatrix r = row_reduce(m);
  std::vector<std::size_t> pivots;
  std::vector<char> is_pivot(m.cols(), 0);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t j = 0;
    while (r.at(i, j) == 0) {
      ++j;
    }
    pivots.push_back(j);
    is_pivot[j] = 1;
  }
  std::vector<std::vector<Rational>> rows;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) {
      continue;
    }
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = -r.at(i, free);
    }
    rows.push_back(std::move(v));
  }
  return RationalMatrix::from_rows(rows, m.cols());
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) {
    throw MismatchError("determinant of a non-square matrix");
  }
  RationalMatrix a = m;
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0) {
      ++pivot;
    }
    if (pivot == n) {
      return 0;
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
      }
      det = -det;
    }
    det *= a.at(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a.at(i, col) == 0) {
        continue;
      }
      const Rational f = a.at(i, col) / a.at(col, col);
      for (std::size_t j = col; j < n; ++j) {
        a.at(i, j) -= f * a.at(col, j);
      }
    }
  }
  return det;
}

// ------------------------------------------------------------ spaces

SymplecticSpace SymplecticSpace::standard(std::size_t dim) {
  if (dim % 2 != 0) {
    throw MismatchError("standard symplectic spaces have even dimension");
  }
  RationalMatrix w(dim, dim);
  for (std::size_t i = 0; i < dim; i += 2) {
    w.at(i, i + 1) = 1;
    w.at(i + 1, i) = -1;
  }
  return {w};
}

bool is_symplectic(const RationalMatrix& omega) {
  if (omega.rows() != omega.cols() || omega.rows() % 2 != 0) {
    return false;
  }
  if (!(omega.transpose() == -omega)) {
    return false;
  }
  return determinant(omega) != 0;
}

SymplecticSpace direct_sum(const SymplecticSpace& a, const SymplecticSpace& b) {
  return {RationalMatrix::direct_sum(a.omega, b.omega)};
}

bool LagrangianCorrespondence::operator==(const LagrangianCorrespondence& other) const {
  return source == other.source && target == other.target && basis == other.basis;
}

LagrangianCorrespondence make_correspondence(SymplecticSpace source, SymplecticSpace target, const RationalMatrix& rows) {
  if (rows.cols() != source.dim() + target.dim()) {
    throw MismatchError("basis vectors have " + std::to_string(rows.cols()) + " coordinates, expected " +
                        std::to_string(source.dim() + target.dim()));
  }
  return {std::move(source), std::move(target), row_reduce(rows)};
}

nlohmann::json LagrangianReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"isotropic", isotropic},
          {"half_dimension", half_dimension},
          {"dimension", dimension},
          {"violation", violation}};
}

LagrangianReport is_lagrangian(const RationalMatrix& basis, const SymplecticSpace& x, const SymplecticSpace& y) {
  const std::size_t n = x.dim() + y.dim();
  if (basis.cols() != n) {
    throw MismatchError("basis vectors have " + std::to_string(basis.cols()) + " coordinates, expected " +
                        std::to_string(n));
  }
  LagrangianReport out;
  const RationalMatrix b = row_reduce(basis);
  const RationalMatrix form = RationalMatrix::direct_sum(x.omega, -y.omega);
  const RationalMatrix gram = b * form * b.transpose();
  out.isotropic = gram == RationalMatrix(b.rows(), b.rows());
  out.dimension = b.rows();
  out.half_dimension = 2 * b.rows() == n;
  if (!out.isotropic) {
    out.violation = "form does not vanish on the subspace";
  } else if (!out.half_dimension) {
    out.violation = "subspace has dimension " + std::to_string(b.rows()) + ", expected " + std::to_string(n / 2);
  }
  out.verdict = verdict_of(out.violation.empty());
  return out;
}

LagrangianReport is_lagrangian(const LagrangianCorrespondence& l) { return is_lagrangian(l.basis, l.source, l.target); }

LagrangianCorrespondence compose_lagrangian(const LagrangianCorrespondence& l1, const LagrangianCorrespondence& l2) {
  if (!(l1.target == l2.source)) {
    throw MismatchError("middle spaces differ (dimensions " + std::to_string(l1.target.dim()) + " and " +
                        std::to_string(l2.source.dim()) + ")");
  }
  const std::size_t dx = l1.source.dim();
  const std::size_t dy = l1.target.dim();
  const std::size_t dz = l2.target.dim();
  const std::size_t k1 = l1.basis.rows();
  const std::size_t k2 = l2.basis.rows();
  // (lambda, mu) with lambda B1_Y = mu B2_Y
  RationalMatrix m(dy, k1 + k2);
  for (std::size_t j = 0; j < dy; ++j) {
    for (std::size_t i = 0; i < k1; ++i) {
      m.at(j, i) = l1.basis.at(i, dx + j);
    }
    for (std::size_t i = 0; i < k2; ++i) {
      m.at(j, k1 + i) = -l2.basis.at(i, j);
    }
  }
  const RationalMatrix kernel = null_space(m);
  RationalMatrix rows(kernel.rows(), dx + dz);
  for (std::size_t r = 0; r < kernel.rows(); ++r) {
    for (std::size_t i = 0; i < k1; ++i) {
      if (kernel.at(r, i) == 0) {
        continue;
      }
      for (std::size_t j = 0; j < dx; ++j) {
        rows.at(r, j) += kernel.at(r, i) * l1.basis.at(i, j);
      }
    }
    for (std::size_t i = 0; i < k2; ++i) {
      if (kernel.at(r, k1 + i) == 0) {
        continue;
      }
      for (std::size_t j = 0; j < dz; ++j) {
        rows.at(r, dx + j) += kernel.at(r, k1 + i) * l2.basis.at(i, dy + j);
      }
    }
  }
  return make_correspondence(l1.source, l2.target, rows);
}

LagrangianCorrespondence tensor_lagrangian(const LagrangianCorrespondence& l1, const LagrangianCorrespondence& l2) {
  const std::size_t x1 = l1.source.dim();
  const std::size_t x2 = l2.source.dim();
  const std::size_t y1 = l1.target.dim();
  const std::size_t y2 = l2.target.dim();
  RationalMatrix rows(l1.basis.rows() + l2.basis.rows(), x1 + x2 + y1 + y2);
  for (std::size_t i = 0; i < l1.basis.rows(); ++i) {
    for (std::size_t j = 0; j < x1; ++j) {
      rows.at(i, j) = l1.basis.at(i, j);
    }
    for (std::size_t j = 0; j < y1; ++j) {
      rows.at(i, x1 + x2 + j) = l1.basis.at(i, x1 + j);
    }
  }
  const std::size_t o = l1.basis.rows();
  for (std::size_t i = 0; i < l2.basis.rows(); ++i) {
    for (std::size_t j = 0; j < x2; ++j) {
      rows.at(o + i, x1 + j) = l2.basis.at(i, j);
    }
    for (std::size_t j = 0; j < y2; ++j) {
      rows.at(o + i, x1 + x2 + y1 + j) = l2.basis.at(i, x2 + j);
    }
  }
  return make_correspondence(direct_sum(l1.source, l2.source), direct_sum(l1.target, l2.target), rows);
}

LagrangianCorrespondence graph(const SymplecticSpace& x, const SymplecticSpace& y, const RationalMatrix& p) {
  if (p.rows() != y.dim() || p.cols() != x.dim()) {
    throw MismatchError("map has the wrong shape for its spaces");
  }
  RationalMatrix rows(x.dim(), x.dim() + y.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    rows.at(i, i) = 1;
    for (std::size_t j = 0; j < y.dim(); ++j) {
      rows.at(i, x.dim() + j) = p.at(j, i);
    }
  }
  return make_correspondence(x, y, rows);
}

LagrangianCorrespondence diagonal(const SymplecticSpace& x) { return graph(x, x, RationalMatrix::identity(x.dim())); }

RationalMatrix transvection(const SymplecticSpace& x, const std::vector<Rational>& v, const Rational& c) {
  const std::size_t n = x.dim();
  RationalMatrix col(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    col.at(i, 0) = v.at(i);
  }
  // I + c v v^T omega
  RationalMatrix t = col * (col.transpose() * x.omega);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t.at(i, j) *= c;
    }
    t.at(i, i) += 1;
  }
  return t;
}

RationalMatrix random_symplectic(const SymplecticSpace& x, std::mt19937_64& rng, int steps) {
  RationalMatrix out = RationalMatrix::identity(x.dim());
  for (int s = 0; s < steps; ++s) {
    std::vector<Rational> v(x.dim());
    for (auto& q : v) {
      q = small(rng, -2, 2);
    }
    Rational c(small(rng, -3, 3), small(rng, 1, 3));
    c.canonicalize();
    out = transvection(x, v, c) * out;
  }
  return out;
}

LagrangianCorrespondence random_lagrangian(const SymplecticSpace& x, const SymplecticSpace& y, std::mt19937_64& rng) {
  const SymplecticSpace w = direct_sum(x, y.bar());
  const RationalMatrix t = random_symplectic(w, rng, static_cast<int>(w.dim()) + 2);
  return make_correspondence(x, y, standard_lagrangian(w.dim()) * t.transpose());
}

nlohmann::json ZigzagReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)},
          {"dim", dim},
          {"first_zigzag_is_identity", first},
          {"second_zigzag_is_identity", second},
          {"ev_lagrangian", ev_lagrangian},
          {"coev_lagrangian", coev_lagrangian}};
}

ZigzagReport duality_zigzag_check(const SymplecticSpace& x) {
  ZigzagReport out;
  out.dim = x.dim();
  const SymplecticSpace xb = x.bar();
  const SymplecticSpace zero{RationalMatrix(0, 0)};
  const std::size_t n = x.dim();
  RationalMatrix diag_rows(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    diag_rows.at(i, i) = 1;
    diag_rows.at(i, n + i) = 1;
  }
  const auto ev = make_correspondence(direct_sum(xb, x), zero, diag_rows);
  const auto coev = make_correspondence(zero, direct_sum(x, xb), diag_rows);
  out.ev_lagrangian = is_lagrangian(ev).verdict == Verdict::verified;
  out.coev_lagrangian = is_lagrangian(coev).verdict == Verdict::verified;

  const auto id_x = diagonal(x);
  const auto id_xb = diagonal(xb);
  // X = 0 + X -> X + Xbar + X -> X + 0 = X
  const auto first = compose_lagrangian(tensor_lagrangian(coev, id_x), tensor_lagrangian(id_x, ev));
  // Xbar = Xbar + 0 -> Xbar + X + Xbar -> 0 + Xbar = Xbar
  const auto second = compose_lagrangian(tensor_lagrangian(id_xb, coev), tensor_lagrangian(ev, id_xb));
  out.first = first == id_x;
  out.second = second == id_xb;
  out.verdict = verdict_of(out.first && out.second && out.ev_lagrangian && out.coev_lagrangian);
  return out;
}

nlohmann::json ClosureReport::to_json() const {
  return {{"verdict", spanlab::to_string(verdict)}, {"seed", seed},           {"samples", samples},
          {"certified", certified},                 {"transverse", transverse}, {"max_total_dim", max_total_dim},
          {"witness", witness}};
}

ClosureReport composition_closure(std::uint64_t seed, std::size_t samples, std::size_t max_total_dim) {
  ClosureReport out;
  out.seed = seed;
  out.max_total_dim = max_total_dim;
  std::mt19937_64 rng(seed);
  const long half = static_cast<long>(max_total_dim / 2);
  for (std::size_t s = 0; s < samples; ++s) {
    // half-dimensions a + b + c <= half, middle space nonzero
    long a = 0;
    long b = 0;
    long c = 0;
    do {
      a = small(rng, 0, half);
      b = small(rng, 1, half);
      c = small(rng, 0, half);
    } while (a + b + c > half);
    const auto x = SymplecticSpace::standard(2 * static_cast<std::size_t>(a));
    const auto y = SymplecticSpace::standard(2 * static_cast<std::size_t>(b));
    const auto z = SymplecticSpace::standard(2 * static_cast<std::size_t>(c));
    const auto l1 = random_lagrangian(x, y, rng);
    const auto l2 = random_lagrangian(y, z, rng);
    const auto l = compose_lagrangian(l1, l2);
    ++out.samples;
    // transverse when the two projections jointly span Y
    RationalMatrix both(y.dim(), l1.basis.rows() + l2.basis.rows());
    for (std::size_t j = 0; j < y.dim(); ++j) {
      for (std::size_t i = 0; i < l1.basis.rows(); ++i) {
        both.at(j, i) = l1.basis.at(i, x.dim() + j);
      }
      for (std::size_t i = 0; i < l2.basis.rows(); ++i) {
        both.at(j, l1.basis.rows() + i) = l2.basis.at(i, j);
      }
    }
    out.transverse += rank(both) == y.dim() ? 1 : 0;
    if (is_lagrangian(l).verdict == Verdict::verified) {
      ++out.certified;
    } else if (out.witness.empty()) {
      out.witness = "sample " + std::to_string(s) + ": " + is_lagrangian(l).violation;
    }
  }
  out.verdict = verdict_of(out.certified == out.samples);
  return out;
}

nlohmann::json to_json(const LagrangianCorrespondence& l) {
  return {{"source", l.source.omega.to_json()}, {"target", l.target.omega.to_json()}, {"basis", l.basis.to_json()}};
}

LagrangianCorrespondence correspondence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("basis")) {
    throw SchemaError("correspondence needs 'source', 'target' and 'basis'");
  }
  SymplecticSpace x{RationalMatrix::from_json(j.at("source"))};
  SymplecticSpace y{RationalMatrix::from_json(j.at("target"))};
  const RationalMatrix rows = RationalMatrix::from_json(j.at("basis"));
  if (rows.rows() > 0 && rows.cols() != x.dim() + y.dim()) {
    throw MismatchError("basis vectors have " + std::to_string(rows.cols()) + " coordinates, expected " +
                        std::to_string(x.dim() + y.dim()));
  }
  return make_correspondence(std::move(x), std::move(y),
                             rows.rows() == 0 ? RationalMatrix(0, x.dim() + y.dim()) : rows);
}

} // namespace spanlab
