#pragma once

// Brute-force reference computations. Nothing here calls into the engine
// beyond reading value lists of finite-set morphisms.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using Fn = std::vector<int>;

inline std::vector<Fn> functions(int n, int k) {
  std::vector<Fn> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  if (k == 0) {
    return out;
  }
  Fn f(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(f);
    int i = n - 1;
    while (i >= 0 && f[i] == k - 1) {
      f[i--] = 0;
    }
    if (i < 0) {
      return out;
    }
    ++f[i];
  }
}

inline std::vector<Fn> permutations(int n) {
  Fn p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Fn> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) {
    r *= b;
  }
  return r;
}

/// |A x_X B| for f : A -> X, g : B -> X.
inline std::size_t pullback_size(const Fn& f, const Fn& g) {
  std::size_t n = 0;
  for (int a : f) {
    for (int b : g) {
      n += a == b ? 1 : 0;
    }
  }
  return n;
}

/// Isomorphism classes of spans X <- A -> Y with all sizes at most b,
/// by canonical forms under S_X x S_A x S_Y.
inline std::size_t span_classes(int b) {
  std::set<std::tuple<int, int, int, Fn, Fn>> seen;
  for (int x = 0; x <= b; ++x) {
    for (int a = 0; a <= b; ++a) {
      for (int y = 0; y <= b; ++y) {
        const auto px = permutations(x);
        const auto pa = permutations(a);
        const auto py = permutations(y);
        for (const auto& f : functions(a, x)) {
          for (const auto& g : functions(a, y)) {
            std::tuple<int, int, int, Fn, Fn> best{x, a, y, f, g};
            for (const auto& sx : px) {
              for (const auto& sa : pa) {
                for (const auto& sy : py) {
                  Fn f2(static_cast<std::size_t>(a));
                  Fn g2(static_cast<std::size_t>(a));
                  for (int i = 0; i < a; ++i) {
                    f2[sa[i]] = sx[f[i]];
                    g2[sa[i]] = sy[g[i]];
                  }
                  best = std::min(best, std::tuple<int, int, int, Fn, Fn>{x, a, y, f2, g2});
                }
              }
            }
            seen.insert(best);
          }
        }
      }
    }
  }
  return seen.size();
}

/// Number of spans X <- A -> Y (not up to isomorphism) with sizes at most b.
inline long span_count(int b) {
  long n = 0;
  for (int x = 0; x <= b; ++x) {
    for (int a = 0; a <= b; ++a) {
      for (int y = 0; y <= b; ++y) {
        n += ipow(x, a) * ipow(y, a);
      }
    }
  }
  return n;
}

inline bool bijective(const Fn& f, int target) {
  if (static_cast<int>(f.size()) != target) {
    return false;
  }
  std::vector<char> hit(static_cast<std::size_t>(target), 0);
  for (int v : f) {
    if (hit[v]) {
      return false;
    }
    hit[v] = 1;
  }
  return true;
}

inline long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace oracle
