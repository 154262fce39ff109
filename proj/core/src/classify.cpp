#include "spanlab/classify.hpp"

#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>

#include "spanlab/errors.hpp"

namespace spanlab {

std::size_t max_cells_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("SPANLAB_MAX_CELLS")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw SchemaError(std::string("SPANLAB_MAX_CELLS is not a number: ") + env);
    }
  }
  return fallback;
}

std::vector<std::size_t> fill_order(const Poset& p) {
  std::vector<std::size_t> order;
  std::vector<char> done(p.size(), 0);
  std::function<void(std::size_t)> visit = [&](std::size_t x) {
    if (done[x] != 0) {
      return;
    }
    done[x] = 1;
    for (std::size_t e : p.covers_from(x)) {
      visit(p.covers()[e].second);
    }
    order.push_back(x);
  };
  for (std::size_t x = 0; x < p.size(); ++x) {
    visit(x);
  }
  return order;
}

namespace {

struct Entry {
  int child = -2;  // -2: not a valid cone, -1: pruned
  int p = 0;
  int h = 0;
};

struct Table {
  std::vector<int> p_first;
  std::vector<int> radix;
  std::vector<Entry> dense;
  std::unordered_map<long long, Entry> sparse;
  bool use_dense = true;

  const Entry* find(long long idx) const {
    if (use_dense) {
      return dense[static_cast<std::size_t>(idx)].child == -2 ? nullptr : &dense[static_cast<std::size_t>(idx)];
    }
    auto it = sparse.find(idx);
    return it == sparse.end() ? nullptr : &it->second;
  }
};

struct TreeNode {
  std::vector<Code> stab;
  std::map<int, Table> tables;
  int class_id = -1;
};

struct Step {
  std::size_t cell = 0;
  std::vector<std::size_t> cover_ids;
  std::vector<std::size_t> targets;
  // pairs of legs (j, l) that must agree after mapping into z
  std::vector<std::array<std::size_t, 3>> constraints;
};

} // namespace

struct DiagramClassifier::Impl {
  CategoryPtr base;
  Poset poset;
  Options opt;
  std::vector<std::size_t> order;
  std::vector<Step> steps;
  std::vector<int> candidates;
  std::vector<std::vector<int>> auts;  // identity first
  std::vector<int> hom_pos;
  FinGroupoid core;
  std::vector<Diagram> reps;
  std::vector<std::vector<Code>> rep_auts;
  std::vector<TreeNode> tree;
  std::size_t nodes = 0;
  std::size_t max_nodes = 0;

  Impl(CategoryPtr b, Poset p, Options o)
      : base(std::move(b)), poset(std::move(p)), opt(std::move(o)), core(FinGroupoid::core(base)) {}

  int path(const Diagram& d, std::size_t a, std::size_t z) const { return path_map(*base, poset, d, a, z); }

  void expand(std::size_t depth, Diagram& d, std::vector<std::size_t>& assigned, const std::vector<Code>& stab,
              int tree_id);
};

void DiagramClassifier::Impl::expand(std::size_t depth, Diagram& d, std::vector<std::size_t>& assigned,
                                     const std::vector<Code>& stab, int tree_id) {
  if (++nodes > max_nodes) {
    throw ResourceError("diagram enumeration exceeded " + std::to_string(max_nodes) +
                        " partial diagrams (raise SPANLAB_MAX_CELLS)");
  }
  if (depth == order.size()) {
    const int k = static_cast<int>(reps.size());
    reps.push_back(d);
    rep_auts.push_back(stab);
    if (tree_id >= 0) {
      tree[tree_id].class_id = k;
    }
    return;
  }
  const FinCategory& c = *base;
  const Step& step = steps[depth];
  const std::size_t m = step.targets.size();

  // projection of the stabilizer onto the cover targets
  std::map<std::vector<int>, int> p_index;
  std::vector<std::vector<int>> p_list;
  std::vector<std::vector<int>> p_members;
  for (std::size_t s = 0; s < stab.size(); ++s) {
    std::vector<int> proj(m);
    for (std::size_t j = 0; j < m; ++j) {
      proj[j] = stab[s][step.targets[j]];
    }
    auto [it, fresh] = p_index.emplace(proj, static_cast<int>(p_list.size()));
    if (fresh) {
      p_list.push_back(proj);
      p_members.emplace_back();
    }
    p_members[it->second].push_back(static_cast<int>(s));
  }
  std::vector<std::array<int, 2>> constraint_paths;
  for (const auto& [j, l, z] : step.constraints) {
    constraint_paths.push_back({path(d, step.targets[j], z), path(d, step.targets[l], z)});
  }

  for (int o : candidates) {
    if (opt.object_filter && !opt.object_filter(step.cell, o)) {
      continue;
    }
    std::vector<const std::vector<int>*> homs(m);
    long long product = 1;
    std::vector<int> radix(m);
    for (std::size_t j = m; j-- > 0;) {
      homs[j] = &c.hom(o, d.objects[step.targets[j]]);
      radix[j] = static_cast<int>(product);
      product *= static_cast<long long>(homs[j]->size());
    }
    if (product == 0) {
      continue;
    }
    // valid cones, in radix order
    std::vector<std::vector<int>> cones;
    std::vector<long long> cone_index;
    {
      std::vector<int> digit(m, 0);
      while (true) {
        std::vector<int> legs(m);
        for (std::size_t j = 0; j < m; ++j) {
          legs[j] = (*homs[j])[digit[j]];
        }
        bool ok = true;
        for (std::size_t q = 0; q < step.constraints.size() && ok; ++q) {
          const auto& [j, l, z] = step.constraints[q];
          ok = c.compose(constraint_paths[q][0], legs[j]) == c.compose(constraint_paths[q][1], legs[l]);
        }
        if (ok) {
          long long idx = 0;
          for (std::size_t j = 0; j < m; ++j) {
            idx += static_cast<long long>(digit[j]) * radix[j];
          }
          cones.push_back(std::move(legs));
          cone_index.push_back(idx);
        }
        std::size_t j = m;
        bool carry = true;
        while (carry && j > 0) {
          --j;
          if (++digit[j] < static_cast<int>(homs[j]->size())) {
            carry = false;
          } else {
            digit[j] = 0;
          }
        }
        if (carry) {
          break;
        }
      }
    }
    if (cones.empty()) {
      continue;
    }
    Table local;
    local.use_dense = product <= (1 << 16);
    if (local.use_dense) {
      local.dense.assign(static_cast<std::size_t>(product), Entry{});
    }
    local.radix = radix;
    for (const auto& members : p_members) {
      local.p_first.push_back(members.front());
    }
    auto lookup = [&](long long idx) -> Entry& {
      if (local.use_dense) {
        return local.dense[static_cast<std::size_t>(idx)];
      }
      return local.sparse[idx];
    };
    // mark valid cones as unvisited
    for (long long idx : cone_index) {
      lookup(idx).child = -3;
    }
    const std::vector<int>& aut_o = auts[o];
    std::vector<int> aut_inv;
    for (int h : aut_o) {
      aut_inv.push_back(c.inverse(h));
    }
    for (std::size_t ci = 0; ci < cones.size(); ++ci) {
      if (lookup(cone_index[ci]).child != -3) {
        continue;
      }
      const std::vector<int>& f = cones[ci];
      std::vector<Code> child_stab;
      const int child_tree = opt.keep_tables ? static_cast<int>(tree.size()) : -1;
      std::vector<long long> orbit;
      for (std::size_t p = 0; p < p_list.size(); ++p) {
        for (std::size_t hi = 0; hi < aut_o.size(); ++hi) {
          long long idx = 0;
          for (std::size_t j = 0; j < m; ++j) {
            const int moved = c.compose(p_list[p][j], c.compose(f[j], aut_inv[hi]));
            idx += static_cast<long long>(hom_pos[moved]) * radix[j];
          }
          if (idx == cone_index[ci]) {
            for (int s : p_members[p]) {
              Code g = stab[s];
              g[step.cell] = aut_o[hi];
              child_stab.push_back(std::move(g));
            }
          }
          Entry& e = lookup(idx);
          if (e.child == -3) {
            e = Entry{-4, static_cast<int>(p), static_cast<int>(hi)};
            orbit.push_back(idx);
          }
        }
      }
      d.objects[step.cell] = o;
      for (std::size_t j = 0; j < m; ++j) {
        d.arrows[step.cover_ids[j]] = f[j];
      }
      assigned.push_back(step.cell);
      const bool pruned = opt.prune && opt.prune(PartialDiagram{d, assigned});
      const int child_id = pruned ? -1 : (opt.keep_tables ? child_tree : 0);
      for (long long idx : orbit) {
        lookup(idx).child = child_id;
      }
      if (!pruned) {
        if (opt.keep_tables) {
          tree.emplace_back();
          tree.back().stab = child_stab;
        }
        expand(depth + 1, d, assigned, child_stab, child_tree);
      }
      assigned.pop_back();
      d.objects[step.cell] = -1;
      for (std::size_t j = 0; j < m; ++j) {
        d.arrows[step.cover_ids[j]] = -1;
      }
    }
    if (opt.keep_tables) {
      tree[tree_id].tables.emplace(o, std::move(local));
    }
  }
}

DiagramClassifier::DiagramClassifier(CategoryPtr base, Poset poset, Options options)
    : impl_(std::make_unique<Impl>(std::move(base), std::move(poset), std::move(options))) {
  Impl& im = *impl_;
  const FinCategory& c = *im.base;
  im.max_nodes = im.opt.max_nodes > 0 ? im.opt.max_nodes : max_cells_from_env();
  im.order = spanlab::fill_order(im.poset);
  std::vector<std::size_t> position(im.poset.size());
  for (std::size_t i = 0; i < im.order.size(); ++i) {
    position[im.order[i]] = i;
  }
  for (std::size_t i = 0; i < im.order.size(); ++i) {
    Step step;
    step.cell = im.order[i];
    for (std::size_t e : im.poset.covers_from(step.cell)) {
      step.cover_ids.push_back(e);
      step.targets.push_back(im.poset.covers()[e].second);
    }
    for (std::size_t j = 0; j < step.targets.size(); ++j) {
      for (std::size_t l = j + 1; l < step.targets.size(); ++l) {
        for (std::size_t z = 0; z < im.poset.size(); ++z) {
          if (im.poset.leq(step.targets[j], z) && im.poset.leq(step.targets[l], z)) {
            step.constraints.push_back({j, l, z});
          }
        }
      }
    }
    im.steps.push_back(std::move(step));
  }
  for (int o : iso_class_representatives(c)) {
    const auto size = c.size(o);
    if (!size || *size <= im.opt.bound) {
      im.candidates.push_back(o);
    }
  }
  im.auts.resize(c.object_count());
  for (int o = 0; o < c.object_count(); ++o) {
    im.auts[o].push_back(c.identity(o));
    for (int f : c.automorphisms(o)) {
      if (f != c.identity(o)) {
        im.auts[o].push_back(f);
      }
    }
  }
  im.hom_pos.assign(c.morphism_count(), 0);
  for (int a = 0; a < c.object_count(); ++a) {
    for (int b = 0; b < c.object_count(); ++b) {
      const auto& h = c.hom(a, b);
      for (std::size_t i = 0; i < h.size(); ++i) {
        im.hom_pos[h[i]] = static_cast<int>(i);
      }
    }
  }
  Diagram d{std::vector<int>(im.poset.size(), -1), std::vector<int>(im.poset.covers().size(), -1)};
  std::vector<std::size_t> assigned;
  std::vector<Code> stab{Code(im.poset.size(), -1)};
  if (im.opt.keep_tables) {
    im.tree.emplace_back();
    im.tree.back().stab = stab;
  }
  im.expand(0, d, assigned, stab, im.opt.keep_tables ? 0 : -1);
}

DiagramClassifier::~DiagramClassifier() = default;
DiagramClassifier::DiagramClassifier(DiagramClassifier&&) noexcept = default;
DiagramClassifier& DiagramClassifier::operator=(DiagramClassifier&&) noexcept = default;

const Poset& DiagramClassifier::poset() const noexcept { return impl_->poset; }
const FinCategory& DiagramClassifier::base() const noexcept { return *impl_->base; }
std::size_t DiagramClassifier::class_count() const noexcept { return impl_->reps.size(); }
const Diagram& DiagramClassifier::representative(std::size_t k) const { return impl_->reps.at(k); }
const std::vector<Code>& DiagramClassifier::automorphisms(std::size_t k) const { return impl_->rep_auts.at(k); }
std::size_t DiagramClassifier::nodes_visited() const noexcept { return impl_->nodes; }
const std::vector<std::size_t>& DiagramClassifier::fill_order() const noexcept { return impl_->order; }

std::optional<std::pair<std::size_t, Code>> DiagramClassifier::classify(const Diagram& d) const {
  const Impl& im = *impl_;
  if (!im.opt.keep_tables) {
    throw Error("classifier was built without orbit tables");
  }
  const FinCategory& c = *im.base;
  if (d.objects.size() != im.poset.size() || d.arrows.size() != im.poset.covers().size()) {
    throw MismatchError("diagram does not match the classifier's shape");
  }
  Code phi(im.poset.size(), -1);
  std::vector<std::size_t> assigned;
  int tid = 0;
  for (const Step& step : im.steps) {
    const int actual = d.objects[step.cell];
    const int comp = im.core.component_of(actual);
    const int o = im.core.representative(comp);
    const int kappa = im.core.object(actual).transport[0];
    const TreeNode& node = im.tree[tid];
    auto it = node.tables.find(o);
    if (it == node.tables.end()) {
      return std::nullopt;
    }
    const Table& table = it->second;
    long long idx = 0;
    for (std::size_t j = 0; j < step.targets.size(); ++j) {
      const int leg = c.compose(c.inverse(phi[step.targets[j]]), c.compose(d.arrows[step.cover_ids[j]], kappa));
      idx += static_cast<long long>(im.hom_pos[leg]) * table.radix[j];
    }
    const Entry* e = table.find(idx);
    if (e == nullptr || e->child < 0) {
      return std::nullopt;
    }
    const Code& g = node.stab[table.p_first[e->p]];
    for (std::size_t x : assigned) {
      phi[x] = c.compose(phi[x], g[x]);
    }
    phi[step.cell] = c.compose(kappa, im.auts[o][e->h]);
    assigned.push_back(step.cell);
    tid = e->child;
  }
  return std::make_pair(static_cast<std::size_t>(im.tree[tid].class_id), phi);
}

} // namespace spanlab
