#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "spanlab/errors.hpp"
#include "spanlab/lagrangian.hpp"

using namespace spanlab;

namespace {

using Rows = std::vector<std::vector<Rational>>;

RationalMatrix mat(const Rows& rows, std::size_t cols) { return RationalMatrix::from_rows(rows, cols); }

// Plain fraction elimination, kept separate from the library.
std::size_t naive_rank(Rows m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) {
      ++p;
    }
    if (p == m.size()) {
      continue;
    }
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        m[i][j] -= f * m[r][j];
      }
    }
    ++r;
  }
  return r;
}

Rows rows_of(const RationalMatrix& m) {
  Rows out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out.push_back(m.row(i));
  }
  return out;
}

// omega_X(u, v) - omega_Y(u, v) summed by hand.
Rational pair_form(const SymplecticSpace& x, const SymplecticSpace& y, const std::vector<Rational>& u,
                   const std::vector<Rational>& v) {
  Rational s = 0;
  const std::size_t dx = x.dim();
  for (std::size_t i = 0; i < dx; ++i) {
    for (std::size_t j = 0; j < dx; ++j) {
      s += u[i] * x.omega.at(i, j) * v[j];
    }
  }
  for (std::size_t i = 0; i < y.dim(); ++i) {
    for (std::size_t j = 0; j < y.dim(); ++j) {
      s -= u[dx + i] * y.omega.at(i, j) * v[dx + j];
    }
  }
  return s;
}

bool lagrangian_oracle(const LagrangianCorrespondence& l) {
  const auto rows = rows_of(l.basis);
  for (const auto& u : rows) {
    for (const auto& v : rows) {
      if (pair_form(l.source, l.target, u, v) != 0) {
        return false;
      }
    }
  }
  return 2 * naive_rank(rows) == l.source.dim() + l.target.dim();
}

Rational leibniz(const RationalMatrix& m) {
  Rational d = 0;
  for (const auto& p : oracle::permutations(static_cast<int>(m.rows()))) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        inversions += p[i] > p[j] ? 1 : 0;
      }
    }
    Rational t = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      t *= m.at(i, static_cast<std::size_t>(p[i]));
    }
    d += t;
  }
  return d;
}

SymplecticSpace std_space(std::size_t d) { return SymplecticSpace::standard(d); }

} // namespace

TEST_CASE("Lagrangian subspaces of the plane") {
  const auto x = std_space(2);
  const auto zero = std_space(0);
  const auto e1 = make_correspondence(x, zero, mat({{1, 0}}, 2));
  CHECK(is_lagrangian(e1).verdict == Verdict::verified);
  CHECK(lagrangian_oracle(e1));

  const auto whole = is_lagrangian(RationalMatrix::identity(2), x, zero);
  CHECK(whole.verdict == Verdict::refuted);
  CHECK_FALSE(whole.isotropic);
  CHECK_FALSE(whole.half_dimension);

  CHECK_THROWS_AS(is_lagrangian(mat({{1, 0, 0}}, 3), x, zero), MismatchError);
}

TEST_CASE("diagonals are identities") {
  for (std::size_t d = 0; d <= 6; d += 2) {
    const auto x = std_space(d);
    const auto id = diagonal(x);
    CHECK(is_lagrangian(id).verdict == Verdict::verified);
    CHECK(lagrangian_oracle(id));
  }
  const auto x = std_space(2);
  const auto e1 = make_correspondence(std_space(0), x, mat({{1, 0}}, 2));
  CHECK(compose_lagrangian(e1, diagonal(x)) == e1);
}

TEST_CASE("composition of graphs is the graph of the product") {
  std::mt19937_64 rng(17);
  for (std::size_t d = 2; d <= 6; d += 2) {
    const auto x = std_space(d);
    const auto p = random_symplectic(x, rng);
    const auto q = random_symplectic(x, rng);
    CHECK(p.transpose() * x.omega * p == x.omega);
    const auto gp = graph(x, x, p);
    CHECK(lagrangian_oracle(gp));
    CHECK(compose_lagrangian(gp, graph(x, x, q)) == graph(x, x, q * p));
  }
}

TEST_CASE("non-transverse composite") {
  const auto x = std_space(2);
  const auto zero = std_space(0);
  const auto in = make_correspondence(zero, x, mat({{1, 0}}, 2));
  const auto out = make_correspondence(x, zero, mat({{1, 0}}, 2));
  const auto c = compose_lagrangian(in, out);
  CHECK(c.basis.rows() == 0);
  CHECK(is_lagrangian(c).verdict == Verdict::verified);
  CHECK_THROWS_AS(compose_lagrangian(in, diagonal(std_space(4))), MismatchError);
}

TEST_CASE("symplectic forms") {
  CHECK(is_symplectic(std_space(4).omega));
  CHECK_FALSE(is_symplectic(RationalMatrix(2, 2)));
  CHECK_FALSE(is_symplectic(RationalMatrix(1, 1)));
  CHECK_FALSE(is_symplectic(mat({{0, 1}, {1, 0}}, 2)));
  CHECK_FALSE(is_symplectic(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}, 3)));
  CHECK(direct_sum(std_space(2), std_space(2)) == std_space(4));
}

TEST_CASE("composition is associative and lands in Lagrangians") {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> half(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = std_space(2 * static_cast<std::size_t>(half(rng)));
    const auto b = std_space(2 * static_cast<std::size_t>(half(rng)));
    const auto c = std_space(2 * static_cast<std::size_t>(half(rng)));
    const auto d = std_space(2 * static_cast<std::size_t>(half(rng)));
    const auto l1 = random_lagrangian(a, b, rng);
    const auto l2 = random_lagrangian(b, c, rng);
    const auto l3 = random_lagrangian(c, d, rng);
    CHECK(lagrangian_oracle(l1));
    const auto l12 = compose_lagrangian(l1, l2);
    CHECK(lagrangian_oracle(l12));
    CHECK(compose_lagrangian(l12, l3) == compose_lagrangian(l1, compose_lagrangian(l2, l3)));
  }
}

TEST_CASE("tensor product is compatible with composition") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = std_space(2);
    const auto y = std_space(2 * (1 + trial % 2));
    const auto z = std_space(2);
    const auto a = random_lagrangian(x, y, rng);
    const auto b = random_lagrangian(y, z, rng);
    const auto c = random_lagrangian(z, x, rng);
    const auto d = random_lagrangian(x, z, rng);
    const auto lhs = compose_lagrangian(tensor_lagrangian(a, c), tensor_lagrangian(b, d));
    const auto rhs = tensor_lagrangian(compose_lagrangian(a, b), compose_lagrangian(c, d));
    CHECK(lhs == rhs);
    CHECK(lagrangian_oracle(lhs));
  }
}

TEST_CASE("zigzag identities") {
  for (std::size_t d = 0; d <= 6; d += 2) {
    const auto r = duality_zigzag_check(std_space(d));
    CHECK(r.verdict == Verdict::verified);
    CHECK(r.first);
    CHECK(r.second);
    CHECK(r.ev_lagrangian);
    CHECK(r.coev_lagrangian);
  }
}

TEST_CASE("seeded closure sampling") {
  const auto r = composition_closure(20260101, 50, 12);
  CHECK(r.verdict == Verdict::verified);
  CHECK(r.samples == 50);
  CHECK(r.certified == 50);
  CHECK(composition_closure(20260101, 50, 12).to_json() == r.to_json());
}

TEST_CASE("rationals and linear algebra") {
  CHECK(parse_rational("−3/2") == Rational(-3, 2));
  CHECK(parse_rational("-3/2") == Rational(-3, 2));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("x"), SchemaError);
  CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
  CHECK(to_string(Rational(-3, 2)) == "-3/2");

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    RationalMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        m.at(i, j) = static_cast<int>(rng() % 5) - 2;
      }
    }
    CHECK(determinant(m) == leibniz(m));
    CHECK(rank(m) == naive_rank(rows_of(m)));
    const auto k = null_space(m);
    CHECK(k.rows() + rank(m) == 4);
    if (k.rows() > 0) {
      const auto prod = m * k.transpose();
      CHECK(prod == RationalMatrix(4, k.rows()));
    }
  }
}

TEST_CASE("correspondence JSON") {
  std::mt19937_64 rng(1);
  const auto l = random_lagrangian(std_space(2), std_space(4), rng);
  CHECK(correspondence_from_json(to_json(l)) == l);
  CHECK_THROWS_AS(correspondence_from_json(nlohmann::json::object()), SchemaError);
}
