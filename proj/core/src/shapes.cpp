#include "spanlab/shapes.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "spanlab/errors.hpp"

namespace spanlab {

SimplexMap::SimplexMap(std::size_t source_size, std::size_t target_size, std::vector<std::size_t> values)
    : source_size_(source_size), target_size_(target_size), values_(std::move(values)) {
  if (values_.size() != source_size_ + 1) {
    throw ShapeSpecError("simplex map [" + std::to_string(source_size_) + "] -> [" +
                         std::to_string(target_size_) + "] needs " + std::to_string(source_size_ + 1) +
                         " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > target_size_) {
      throw ShapeSpecError("simplex map value " + std::to_string(values_[i]) + " exceeds target size " +
                           std::to_string(target_size_));
    }
    if (i > 0 && values_[i] < values_[i - 1]) {
      throw ShapeSpecError("simplex map values are not weakly increasing");
    }
  }
}

SimplexMap SimplexMap::identity(std::size_t n) {
  std::vector<std::size_t> values(n + 1);
  std::iota(values.begin(), values.end(), std::size_t{0});
  return SimplexMap(n, n, std::move(values));
}

std::vector<SimplexMap> SimplexMap::all(std::size_t n, std::size_t m) {
  std::vector<SimplexMap> out;
  std::vector<std::size_t> values(n + 1, 0);
  while (true) {
    out.emplace_back(n, m, values);
    // next weakly increasing sequence in lexicographic order
    std::size_t pos = n + 1;
    while (pos > 0 && values[pos - 1] == m) {
      --pos;
    }
    if (pos == 0) {
      break;
    }
    ++values[pos - 1];
    for (std::size_t k = pos; k <= n; ++k) {
      values[k] = values[pos - 1];
    }
  }
  return out;
}

SimplexMap SimplexMap::then(const SimplexMap& next) const {
  if (next.source_size_ != target_size_) {
    throw ShapeSpecError("cannot compose simplex maps: target [" + std::to_string(target_size_) +
                         "] differs from source [" + std::to_string(next.source_size_) + "]");
  }
  std::vector<std::size_t> values(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values[i] = next(values_[i]);
  }
  return SimplexMap(source_size_, next.target_size_, std::move(values));
}

bool SimplexMap::is_inert() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != values_[0] + i) {
      return false;
    }
  }
  return true;
}

std::string to_string(const Cell& cell) {
  std::ostringstream os;
  os << '(';
  for (std::size_t r = 0; r < cell.size(); ++r) {
    if (r > 0) {
      os << ';';
    }
    os << cell[r].first << ',' << cell[r].second;
  }
  os << ')';
  return os.str();
}

Poset::Poset(std::size_t size, const std::function<bool(std::size_t, std::size_t)>& leq)
    : size_(size), leq_(size * size, 0), out_(size) {
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      leq_[a * size + b] = leq(a, b) ? 1 : 0;
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b || !this->leq(a, b)) {
        continue;
      }
      bool covered = true;
      for (std::size_t c = 0; c < size && covered; ++c) {
        if (c != a && c != b && this->leq(a, c) && this->leq(c, b)) {
          covered = false;
        }
      }
      if (covered) {
        out_[a].push_back(covers_.size());
        covers_.emplace_back(a, b);
      }
    }
  }
  std::vector<std::size_t> above(size, 0);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if (a != b && this->leq(a, b)) {
        ++above[a];
      }
    }
  }
  targets_first_.resize(size);
  std::iota(targets_first_.begin(), targets_first_.end(), std::size_t{0});
  std::stable_sort(targets_first_.begin(), targets_first_.end(),
                   [&](std::size_t x, std::size_t y) { return above[x] < above[y]; });
}

std::optional<std::size_t> Poset::cover_index(std::size_t a, std::size_t b) const {
  for (std::size_t e : out_.at(a)) {
    if (covers_[e].second == b) {
      return e;
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> Poset::up_set(std::size_t a) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < size_; ++b) {
    if (leq(a, b)) {
      out.push_back(b);
    }
  }
  return out;
}

namespace {

bool interval_leq(const Interval& x, const Interval& y) { return x.first <= y.first && y.second <= x.second; }

bool cell_leq(const Cell& x, const Cell& y) {
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (!interval_leq(x[r], y[r])) {
      return false;
    }
  }
  return true;
}

std::vector<Interval> intervals(std::size_t n) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      out.emplace_back(i, j);
    }
  }
  return out;
}

} // namespace

SigmaShape::SigmaShape(std::vector<std::size_t> arities) : arities_(std::move(arities)) {
  if (arities_.empty()) {
    throw ShapeSpecError("a shape needs at least one arity");
  }
  std::vector<std::vector<Interval>> factors;
  for (std::size_t n : arities_) {
    factors.push_back(intervals(n));
  }
  std::vector<std::size_t> digit(arities_.size(), 0);
  while (true) {
    Cell cell(arities_.size());
    for (std::size_t r = 0; r < arities_.size(); ++r) {
      cell[r] = factors[r][digit[r]];
    }
    cells_.push_back(std::move(cell));
    std::size_t r = arities_.size();
    while (r > 0) {
      --r;
      if (++digit[r] < factors[r].size()) {
        break;
      }
      digit[r] = 0;
      if (r == 0) {
        r = arities_.size() + 1;
        break;
      }
    }
    if (r == arities_.size() + 1) {
      break;
    }
  }
  poset_ = Poset(cells_.size(), [this](std::size_t a, std::size_t b) { return cell_leq(cells_[a], cells_[b]); });
}

std::optional<std::size_t> SigmaShape::index_of(const Cell& cell) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), cell);
  if (it == cells_.end() || *it != cell) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - cells_.begin());
}

bool SigmaShape::in_lambda(std::size_t i) const {
  for (const auto& [lo, hi] : cells_.at(i)) {
    if (hi - lo > 1) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> SigmaShape::slice(std::size_t direction, Interval interval) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].at(direction) == interval) {
      out.push_back(i);
    }
  }
  return out;
}

LambdaShape::LambdaShape(const SigmaShape& parent)
    : arities_(parent.arities()), from_parent_(parent.size()) {
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (parent.in_lambda(i)) {
      from_parent_[i] = to_parent_.size();
      to_parent_.push_back(i);
      cells_.push_back(parent.cell(i));
    }
  }
  poset_ = Poset(to_parent_.size(), [&](std::size_t a, std::size_t b) {
    return parent.poset().leq(to_parent_[a], to_parent_[b]);
  });
}

std::optional<std::size_t> LambdaShape::from_parent(std::size_t parent_index) const {
  return from_parent_.at(parent_index);
}

PosetMap sigma_map(const SimplexMap& phi, const SigmaShape& source) {
  return sigma_map(std::span<const SimplexMap>(&phi, 1), source);
}

PosetMap sigma_map(std::span<const SimplexMap> phis, const SigmaShape& source) {
  if (phis.size() != source.directions()) {
    throw ShapeSpecError("expected " + std::to_string(source.directions()) + " simplex maps, got " +
                         std::to_string(phis.size()));
  }
  std::vector<std::size_t> targets;
  for (std::size_t r = 0; r < phis.size(); ++r) {
    if (phis[r].source_size() != source.arities()[r]) {
      throw ShapeSpecError("simplex map source [" + std::to_string(phis[r].source_size()) +
                           "] does not match arity " + std::to_string(source.arities()[r]));
    }
    targets.push_back(phis[r].target_size());
  }
  SigmaShape target(targets);
  PosetMap map{source.arities(), targets, {}};
  map.image.reserve(source.size());
  for (const Cell& cell : source.cells()) {
    Cell out(cell.size());
    for (std::size_t r = 0; r < cell.size(); ++r) {
      out[r] = {phis[r](cell[r].first), phis[r](cell[r].second)};
    }
    map.image.push_back(*target.index_of(out));
  }
  return map;
}

PosetMap compose(const PosetMap& first, const PosetMap& second) {
  if (first.target_arities != second.source_arities) {
    throw ShapeSpecError("poset maps are not composable");
  }
  PosetMap out{first.source_arities, second.target_arities, {}};
  for (std::size_t i : first.image) {
    out.image.push_back(second.image.at(i));
  }
  return out;
}

bool preserves_lambda(const PosetMap& map) {
  SigmaShape source(map.source_arities);
  SigmaShape target(map.target_arities);
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source.in_lambda(i) && !target.in_lambda(map.image[i])) {
      return false;
    }
  }
  return true;
}

WedgeCheck lambda_wedge_check(std::size_t n) {
  if (n == 0) {
    throw ShapeSpecError("the wedge decomposition needs n >= 1");
  }
  // Copy c contributes (0,0), (0,1), (1,1) as elements 3c, 3c+1, 3c+2;
  // its (1,1) is identified with the (0,0) of copy c+1.
  const std::size_t raw = 3 * n;
  std::vector<std::size_t> parent(raw);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t c = 0; c + 1 < n; ++c) {
    std::size_t a = find(3 * c + 2);
    std::size_t b = find(3 * (c + 1));
    parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> cls(raw);
  std::vector<std::size_t> roots;
  for (std::size_t x = 0; x < raw; ++x) {
    std::size_t r = find(x);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      cls[x] = roots.size();
      roots.push_back(r);
    } else {
      cls[x] = static_cast<std::size_t>(it - roots.begin());
    }
  }
  const std::size_t glued = roots.size();
  // generating relations of each copy: (0,1) <= (0,0), (0,1) <= (1,1)
  std::vector<char> rel(glued * glued, 0);
  for (std::size_t x = 0; x < glued; ++x) {
    rel[x * glued + x] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    rel[cls[3 * c + 1] * glued + cls[3 * c]] = 1;
    rel[cls[3 * c + 1] * glued + cls[3 * c + 2]] = 1;
  }
  for (std::size_t k = 0; k < glued; ++k) {
    for (std::size_t i = 0; i < glued; ++i) {
      for (std::size_t j = 0; j < glued; ++j) {
        if (rel[i * glued + k] && rel[k * glued + j]) {
          rel[i * glued + j] = 1;
        }
      }
    }
  }

  SigmaShape sigma({n});
  LambdaShape lambda(sigma);
  WedgeCheck result;
  result.glued_size = glued;
  result.lambda_size = lambda.size();
  result.witness.assign(glued, 0);
  // induced map from the inert inclusions rho_c : [1] -> [n]
  std::vector<char> assigned(glued, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const Interval images[3] = {{c, c}, {c, c + 1}, {c + 1, c + 1}};
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t target = *lambda.from_parent(*sigma.index_of(Cell{images[k]}));
      std::size_t x = cls[3 * c + k];
      if (assigned[x] && result.witness[x] != target) {
        result.mismatch = "glued element " + std::to_string(x) + " has two images";
        return result;
      }
      assigned[x] = 1;
      result.witness[x] = target;
    }
  }
  if (glued != lambda.size()) {
    result.mismatch = "glued poset has " + std::to_string(glued) + " elements, lambda shape has " +
                      std::to_string(lambda.size());
    return result;
  }
  std::vector<char> hit(glued, 0);
  for (std::size_t x = 0; x < glued; ++x) {
    if (hit[result.witness[x]]) {
      result.mismatch = "cell " + to_string(lambda.cell(result.witness[x])) + " is hit twice";
      return result;
    }
    hit[result.witness[x]] = 1;
  }
  for (std::size_t x = 0; x < glued; ++x) {
    for (std::size_t y = 0; y < glued; ++y) {
      bool lhs = rel[x * glued + y] != 0;
      bool rhs = lambda.poset().leq(result.witness[x], result.witness[y]);
      if (lhs != rhs) {
        result.mismatch = "order differs at " + to_string(lambda.cell(result.witness[x])) + " <= " +
                          to_string(lambda.cell(result.witness[y]));
        return result;
      }
    }
  }
  result.holds = true;
  return result;
}

namespace {

nlohmann::json cells_json(const std::vector<Cell>& cells) {
  nlohmann::json objects = nlohmann::json::array();
  for (const Cell& cell : cells) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& [i, j] : cell) {
      c.push_back({i, j});
    }
    objects.push_back(std::move(c));
  }
  return objects;
}

nlohmann::json covers_json(const Poset& poset) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [a, b] : poset.covers()) {
    out.push_back({a, b});
  }
  return out;
}

} // namespace

nlohmann::json to_json(const SigmaShape& shape) {
  return {{"arities", shape.arities()}, {"objects", cells_json(shape.cells())},
          {"cover_relations", covers_json(shape.poset())}};
}

nlohmann::json to_json(const LambdaShape& shape) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    cells.push_back(shape.cell(i));
  }
  return {{"arities", shape.arities()}, {"objects", cells_json(cells)},
          {"cover_relations", covers_json(shape.poset())}};
}

} // namespace spanlab
