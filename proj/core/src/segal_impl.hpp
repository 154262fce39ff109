#pragma once

// Segal comparison shared by plain and labelled levels. A level type L
// provides size(), sigma(), base(), bound(), groupoid() and classify(Datum);
// LevelOps<L> supplies the data operations.

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>

#include "spanlab/errors.hpp"
#include "spanlab/spans.hpp"

namespace spanlab::detail {

template <class L>
struct LevelOps;

inline Code concat_codes(const Code& a, const Code& b) {
  Code out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Code block(const Code& c, std::size_t i, std::size_t width) {
  return Code(c.begin() + static_cast<std::ptrdiff_t>(i * width),
              c.begin() + static_cast<std::ptrdiff_t>((i + 1) * width));
}

inline Code pull_code(const Code& code, const std::vector<std::size_t>& map) {
  Code out;
  out.reserve(map.size());
  for (std::size_t i : map) {
    out.push_back(code[i]);
  }
  return out;
}

inline Code identity_code(const FinCategory& c, const Diagram& d) {
  Code out;
  for (int o : d.objects) {
    out.push_back(c.identity(o));
  }
  return out;
}

inline std::vector<std::size_t> with_arity(std::vector<std::size_t> a, std::size_t r, std::size_t n) {
  a[r] = n;
  return a;
}

inline bool within_bound(const FinCategory& c, const Diagram& d, int bound) {
  if (!c.has_sizes()) {
    return true;
  }
  return std::all_of(d.objects.begin(), d.objects.end(), [&](int o) { return *c.size(o) <= bound; });
}

// Source and target vertex functors E -> V in one direction.
struct VertexMaps {
  std::vector<std::size_t> s_cells;
  std::vector<std::size_t> t_cells;
  std::vector<int> s_class;
  std::vector<int> t_class;
  std::vector<Code> s_kappa;
  std::vector<Code> t_kappa;
};

template <class L>
VertexMaps vertex_maps(const L& edges, std::size_t r, const L& vertices) {
  using Ops = LevelOps<L>;
  VertexMaps m;
  m.s_cells = direction_map(vertices.sigma(), r, SimplexMap(0, 1, {0}));
  m.t_cells = direction_map(vertices.sigma(), r, SimplexMap(0, 1, {1}));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int side = 0; side < 2; ++side) {
      const auto& cells = side == 0 ? m.s_cells : m.t_cells;
      auto hit = vertices.classify(Ops::pull(edges, Ops::datum(edges, e), vertices.sigma(), cells));
      if (!hit) {
        throw Error("a vertex of edge class " + std::to_string(e) + " lies outside the vertex level");
      }
      (side == 0 ? m.s_class : m.t_class).push_back(static_cast<int>(hit->first));
      (side == 0 ? m.s_kappa : m.t_kappa).push_back(std::move(hit->second));
    }
  }
  return m;
}

inline Code vertex_arrow(const FinGroupoid& v, const VertexMaps& m, bool target, int x, int y, const Code& u) {
  const auto& kappa = target ? m.t_kappa : m.s_kappa;
  return v.compose(v.inverse(kappa[y]), v.compose(pull_code(u, target ? m.t_cells : m.s_cells), kappa[x]));
}

template <class L>
GroupoidMap vertex_functor(const L& edges, const L& vertices, const VertexMaps& m, bool target) {
  GroupoidMap g;
  g.source = &edges.groupoid();
  g.target = &vertices.groupoid();
  g.object_image = target ? m.t_class : m.s_class;
  const FinGroupoid* v = &vertices.groupoid();
  const VertexMaps* mp = &m;
  g.arrow_image = [v, mp, target](int x, int y, const Code& u) { return vertex_arrow(*v, *mp, target, x, y, u); };
  return g;
}

// Glues a chain of edge diagrams, agreeing on shared vertices, into lambda
// data of the shape with j edges in direction r.
class ChainGluer {
public:
  ChainGluer(const SigmaShape& edge_shape, std::size_t r, std::size_t j)
      : shape_(with_arity(edge_shape.arities(), r, j)), lambda_(shape_) {
    for (std::size_t i = 0; i < j; ++i) {
      maps_.push_back(direction_map(edge_shape, r, SimplexMap(1, j, {i, i + 1})));
    }
    where_.assign(lambda_.size(), {0, 0});
    for (std::size_t i = 0; i < j; ++i) {
      for (std::size_t y = 0; y < maps_[i].size(); ++y) {
        if (auto l = lambda_.from_parent(maps_[i][y])) {
          where_[*l] = {i, y};
        }
      }
    }
    const Poset& lp = lambda_.poset();
    const Poset& ep = edge_shape.poset();
    for (const auto& [a, b] : lp.covers()) {
      bool found = false;
      for (std::size_t i = 0; i < j && !found; ++i) {
        const auto& mp = maps_[i];
        auto ia = std::find(mp.begin(), mp.end(), lambda_.to_parent(a));
        auto ib = std::find(mp.begin(), mp.end(), lambda_.to_parent(b));
        if (ia != mp.end() && ib != mp.end()) {
          const auto e =
              ep.cover_index(static_cast<std::size_t>(ia - mp.begin()), static_cast<std::size_t>(ib - mp.begin()));
          if (e) {
            cover_where_.push_back({i, *e});
            found = true;
          }
        }
      }
      if (!found) {
        throw Error("chain gluing: a lambda cover lies in no edge");
      }
    }
  }

  const SigmaShape& shape() const { return shape_; }

  Diagram glue(const std::vector<const Diagram*>& chain) const {
    Diagram out;
    for (const auto& [i, y] : where_) {
      out.objects.push_back(chain[i]->objects[y]);
    }
    for (const auto& [i, e] : cover_where_) {
      out.arrows.push_back(chain[i]->arrows[e]);
    }
    return out;
  }

private:
  SigmaShape shape_;
  LambdaShape lambda_;
  std::vector<std::vector<std::size_t>> maps_;
  std::vector<std::pair<std::size_t, std::size_t>> where_;
  std::vector<std::pair<std::size_t, std::size_t>> cover_where_;
};

// Iterated homotopy fiber products of edges over vertices, keeping only
// chains whose Kan extension stays within the bound.
template <class Datum>
struct ChainLevel {
  std::unique_ptr<IsoComma> comma;
  std::unique_ptr<FinGroupoid> kept;
  const FinGroupoid* groupoid = nullptr;
  std::vector<int> to_kept;
  std::vector<int> last_edge;
  std::vector<std::vector<Code>> psi;
  std::vector<std::vector<Datum>> chain;
  std::size_t total = 0;
};

template <class L>
SegalDirectionReport segal_direction(const L& level, std::size_t r, const L& edges, const L& vertices) {
  using Ops = LevelOps<L>;
  using Datum = typename Ops::Datum;
  const FinCategory& c = level.base();
  const std::size_t n = level.sigma().arities().at(r);
  SegalDirectionReport out;
  out.direction = r;
  out.level_classes = level.size();

  for (std::size_t k = 0; k < level.size(); ++k) {
    const CartesianReport cart = is_cartesian(c, level.sigma(), Ops::underlying(Ops::datum(level, k)));
    if (!cart.cartesian) {
      out.verdict = Verdict::refuted;
      out.witness = "level class " + std::to_string(k) + ": " + cart.reason;
      return out;
    }
  }
  if (n < 2) {
    out.verdict = Verdict::verified;
    out.witness = "direction has fewer than two edges";
    return out;
  }

  const FinGroupoid& E = edges.groupoid();
  const FinGroupoid& V = vertices.groupoid();
  const std::size_t we = edges.sigma().size();
  const VertexMaps vm = vertex_maps(edges, r, vertices);
  const GroupoidMap s_map = vertex_functor(edges, vertices, vm, false);

  std::vector<ChainLevel<Datum>> chains(n);
  {
    auto& t1 = chains[0];
    t1.groupoid = &E;
    t1.total = edges.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      Datum d = Ops::datum(edges, e);
      t1.to_kept.push_back(static_cast<int>(e));
      t1.last_edge.push_back(static_cast<int>(e));
      t1.psi.push_back({identity_code(c, Ops::underlying(d))});
      t1.chain.push_back({std::move(d)});
    }
  }
  std::vector<GroupoidMap> f_maps(n);
  for (std::size_t j = 2; j <= n; ++j) {
    auto& prev = chains[j - 2];
    auto& cur = chains[j - 1];
    GroupoidMap& f = f_maps[j - 1];
    f.source = prev.groupoid;
    f.target = &V;
    for (int e : prev.last_edge) {
      f.object_image.push_back(vm.t_class[e]);
    }
    {
      const std::vector<int>* last = &prev.last_edge;
      const VertexMaps* mp = &vm;
      const FinGroupoid* vp = &V;
      const std::size_t offset = j - 2;
      f.arrow_image = [last, mp, vp, offset, we](int x, int y, const Code& w) {
        return vertex_arrow(*vp, *mp, true, (*last)[x], (*last)[y], block(w, offset, we));
      };
    }
    cur.comma = std::make_unique<IsoComma>(f, s_map, false);
    const FinGroupoid& T = cur.comma->groupoid();
    cur.total = static_cast<std::size_t>(T.component_count());
    const ChainGluer gluer(edges.sigma(), r, j);

    std::vector<char> keep(cur.total, 0);
    std::vector<std::vector<Code>> psi(cur.total);
    std::vector<std::vector<Datum>> chain(cur.total);
    for (std::size_t comp = 0; comp < cur.total; ++comp) {
      const IsoComma::Triple& tr = cur.comma->triples()[comp];
      const Code& prev_last = prev.psi[tr.a].back();
      const Code via = V.compose(
          pull_code(prev_last, vm.t_cells),
          V.compose(vm.t_kappa[prev.last_edge[tr.a]], V.compose(V.inverse(tr.alpha), V.inverse(vm.s_kappa[tr.b]))));
      const Datum next = Ops::datum(edges, tr.b);
      Code beta = identity_code(c, Ops::underlying(next));
      for (std::size_t i = 0; i < vm.s_cells.size(); ++i) {
        beta[vm.s_cells[i]] = via[i];
      }
      chain[comp] = prev.chain[tr.a];
      chain[comp].push_back(Ops::transport(edges, next, beta));
      psi[comp] = prev.psi[tr.a];
      psi[comp].push_back(std::move(beta));
      std::vector<const Diagram*> parts;
      for (const Datum& d : chain[comp]) {
        parts.push_back(&Ops::underlying(d));
      }
      try {
        const KanExtension ext = kan_extend(c, gluer.shape(), gluer.glue(parts));
        keep[comp] = within_bound(c, ext.diagram, level.bound()) ? 1 : 0;
      } catch (const NoLimitError&) {
        keep[comp] = 0;
      }
    }
    std::vector<int> old;
    cur.kept = std::make_unique<FinGroupoid>(T.full_subgroupoid([&](int k) { return keep[k] != 0; }, &old));
    cur.groupoid = cur.kept.get();
    cur.to_kept.assign(cur.total, -1);
    for (std::size_t i = 0; i < old.size(); ++i) {
      cur.to_kept[old[i]] = static_cast<int>(i);
      cur.last_edge.push_back(cur.comma->triples()[old[i]].b);
      cur.psi.push_back(std::move(psi[old[i]]));
      cur.chain.push_back(std::move(chain[old[i]]));
    }
  }

  const auto& top = chains[n - 1];
  out.target_classes = top.total;
  out.target_in_bound = static_cast<std::size_t>(top.groupoid->component_count());
  out.excluded = out.target_classes - out.target_in_bound;

  // the comparison functor
  std::vector<std::vector<std::size_t>> rho;
  for (std::size_t j = 0; j < n; ++j) {
    rho.push_back(direction_map(edges.sigma(), r, SimplexMap(1, n, {j, j + 1})));
  }
  GroupoidMap seg;
  seg.source = &level.groupoid();
  seg.target = top.groupoid;
  std::vector<std::vector<Code>> realize(level.size());
  for (std::size_t k = 0; k < level.size(); ++k) {
    const Datum dk = Ops::datum(level, k);
    std::vector<std::pair<std::size_t, Code>> parts;
    for (std::size_t j = 0; j < n; ++j) {
      auto hit = edges.classify(Ops::pull(level, dk, edges.sigma(), rho[j]));
      if (!hit) {
        out.verdict = Verdict::refuted;
        out.witness = "edge " + std::to_string(j + 1) + " of level class " + std::to_string(k) +
                      " lies outside the edge level";
        return out;
      }
      parts.push_back(std::move(*hit));
    }
    int a = static_cast<int>(parts[0].first);
    std::vector<Code> R{parts[0].second};
    for (std::size_t j = 2; j <= n; ++j) {
      const auto& prev = chains[j - 2];
      const auto& cur = chains[j - 1];
      const auto& [ej, tau] = parts[j - 1];
      const Code alpha = V.compose(
          V.inverse(vm.s_kappa[ej]),
          V.compose(V.inverse(pull_code(tau, vm.s_cells)),
                    V.compose(pull_code(R.back(), vm.t_cells), vm.t_kappa[prev.last_edge[a]])));
      const auto [comp, w] = cur.comma->locate(a, static_cast<int>(ej), alpha);
      if (cur.to_kept[comp] < 0) {
        out.verdict = Verdict::refuted;
        out.witness = "level class " + std::to_string(k) + " maps to a chain whose extension leaves the bound";
        return out;
      }
      for (std::size_t i = 0; i + 1 < j; ++i) {
        R[i] = E.compose(R[i], block(w, i, we));
      }
      R.push_back(E.compose(tau, block(w, j - 1, we)));
      a = cur.to_kept[comp];
    }
    seg.object_image.push_back(a);
    realize[k] = std::move(R);
  }
  seg.arrow_image = [&](int x, int y, const Code& g) {
    Code out_code;
    for (std::size_t j = 0; j < n; ++j) {
      const Code gj = pull_code(g, rho[j]);
      const Code part = E.compose(E.inverse(realize[y][j]), E.compose(gj, realize[x][j]));
      out_code.insert(out_code.end(), part.begin(), part.end());
    }
    return out_code;
  };
  out.equivalence = equivalent(seg);
  out.verdict = verdict_of(out.equivalence.equivalent());
  if (!out.equivalence.equivalent()) {
    out.witness = out.equivalence.violation;
  }
  return out;
}

} // namespace spanlab::detail
