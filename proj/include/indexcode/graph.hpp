#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "indexcode/error.hpp"
#include "indexcode/instance.hpp"

namespace indexcode {

/// Directed side-information graph: edge (i, j) iff user j holds message i.
class SideInfoGraph {
 public:
  explicit SideInfoGraph(const Instance& inst) : m_(inst.m()), out_(static_cast<std::size_t>(m_)), in_(out_) {
    for (int j = 1; j <= m_; ++j) {
      const UserMask a = inst.side_mask(j);
      in_[static_cast<std::size_t>(j - 1)] = a;
      for (int i : set_of(a)) out_[static_cast<std::size_t>(i - 1)] |= UserMask{1} << (j - 1);
    }
  }

  int vertex_count() const noexcept { return m_; }
  UserMask out(int v) const { return out_[static_cast<std::size_t>(v - 1)]; }
  UserMask in(int v) const { return in_[static_cast<std::size_t>(v - 1)]; }
  bool has_edge(int from, int to) const { return (out(from) >> (to - 1)) & 1u; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (UserMask o : out_) n += static_cast<std::size_t>(__builtin_popcountll(o));
    return n;
  }

 private:
  int m_;
  std::vector<UserMask> out_;
  std::vector<UserMask> in_;
};

namespace detail {

inline void check_subset(const SideInfoGraph& g, UserMask s) {
  if (s & ~full_mask(g.vertex_count())) throw IndexOutOfRange("vertex set is not a subset of [m]");
}

inline UserMask checked_mask(const SideInfoGraph& g, const UserSet& s) {
  for (int v : s) {
    if (v < 1 || v > g.vertex_count()) throw IndexOutOfRange("vertex " + std::to_string(v) + " out of range");
  }
  return mask_of(s);
}

// Iterative three-colour DFS on the subgraph induced by `subset`.
inline bool acyclic_mask(const SideInfoGraph& g, UserMask subset) {
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::array<std::uint8_t, kMaxUsers> colour{};
  struct Frame {
    int v;
    UserMask pending;
  };
  std::vector<Frame> stack;
  stack.reserve(kMaxUsers);
  for (UserMask roots = subset; roots; roots &= roots - 1) {
    const int root = __builtin_ctzll(roots);
    if (colour[static_cast<std::size_t>(root)] != kWhite) continue;
    colour[static_cast<std::size_t>(root)] = kGrey;
    stack.push_back({root, g.out(root + 1) & subset});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (!top.pending) {
        colour[static_cast<std::size_t>(top.v)] = kBlack;
        stack.pop_back();
        continue;
      }
      const int w = __builtin_ctzll(top.pending);
      top.pending &= top.pending - 1;
      const auto c = colour[static_cast<std::size_t>(w)];
      if (c == kGrey) return false;
      if (c == kWhite) {
        colour[static_cast<std::size_t>(w)] = kGrey;
        stack.push_back({w, g.out(w + 1) & subset});
      }
    }
  }
  return true;
}

// Whether adding v (0-based) to the acyclic set `acyclic` closes a cycle,
// i.e. whether v can reach itself inside acyclic + {v}.
inline bool closes_cycle(const SideInfoGraph& g, UserMask acyclic, int v) {
  UserMask frontier = g.out(v + 1) & acyclic;
  UserMask seen = frontier;
  const UserMask back = g.in(v + 1);
  while (frontier) {
    if (frontier & back) return true;
    UserMask next = 0;
    for (UserMask f = frontier; f; f &= f - 1) next |= g.out(__builtin_ctzll(f) + 1);
    next &= acyclic & ~seen;
    seen |= next;
    frontier = next;
  }
  return false;
}

inline bool minimal_cyclic_mask(const SideInfoGraph& g, UserMask subset) {
  if (acyclic_mask(g, subset)) return false;
  for (UserMask rest = subset; rest; rest &= rest - 1) {
    if (!acyclic_mask(g, subset & ~(rest & -rest))) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_acyclic(const SideInfoGraph& g, const UserSet& vertices) {
  return detail::acyclic_mask(g, detail::checked_mask(g, vertices));
}

inline bool is_independent(const SideInfoGraph& g, const UserSet& vertices) {
  const UserMask s = detail::checked_mask(g, vertices);
  for (int v : vertices) {
    if (g.out(v) & s) return false;
  }
  return true;
}

// Contains a cycle while every proper induced subgraph is acyclic. Checking
// the |V'| maximal proper subsets suffices since acyclicity is hereditary.
inline bool is_minimal_cyclic(const SideInfoGraph& g, const UserSet& vertices) {
  return detail::minimal_cyclic_mask(g, detail::checked_mask(g, vertices));
}

/// Enumerates minimal cyclic sets with exactly `size` vertices, each sorted,
/// in ascending lexicographic order of discovery root. Stops after `limit`.
/// Every minimal cyclic set is spanned by one directed cycle through all of
/// its vertices, so cycles are grown from their smallest vertex and any path
/// whose vertex set already induces a cycle is abandoned.
inline std::vector<UserSet> minimal_cyclic_sets(const SideInfoGraph& g, int size, std::size_t limit = 1'000'000) {
  std::vector<UserSet> found;
  const int m = g.vertex_count();
  if (size < 2 || size > m) return found;
  std::unordered_set<UserMask> seen;
  std::vector<int> path;
  path.reserve(static_cast<std::size_t>(size));

  struct Frame {
    int v;
    UserMask pending;
  };
  for (int start = 0; start < m && found.size() < limit; ++start) {
    const UserMask allowed = full_mask(m) & ~((UserMask{2} << start) - 1);
    std::vector<Frame> stack;
    path.assign(1, start);
    UserMask on_path = UserMask{1} << start;
    stack.push_back({start, g.out(start + 1) & allowed});
    while (!stack.empty() && found.size() < limit) {
      Frame& top = stack.back();
      if (static_cast<int>(path.size()) == size || !top.pending) {
        if (static_cast<int>(path.size()) == size && g.has_edge(top.v + 1, start + 1) &&
            detail::minimal_cyclic_mask(g, on_path) &&
            seen.insert(on_path).second) {
          found.push_back(set_of(on_path));
        }
        on_path &= ~(UserMask{1} << top.v);
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const int w = __builtin_ctzll(top.pending);
      top.pending &= top.pending - 1;
      if (on_path & (UserMask{1} << w)) continue;
      const UserMask grown = on_path | (UserMask{1} << w);
      // A proper subset of a minimal cyclic set must stay acyclic.
      if (static_cast<int>(path.size()) + 1 < size && !detail::acyclic_mask(g, grown)) continue;
      if (static_cast<int>(path.size()) + 1 == size && !detail::acyclic_mask(g, grown & ~(UserMask{1} << start)))
        continue;
      on_path = grown;
      path.push_back(w);
      stack.push_back({w, g.out(w + 1) & allowed});
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

struct MaisResult {
  int value = 0;
  UserSet witness;  // lexicographically smallest maximum acyclic set
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kMaisNodeBudget = 100'000'000;

namespace detail {

class MaisSearch {
 public:
  MaisSearch(const SideInfoGraph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  // Largest acyclic subset of `component`, branching in `order`.
  int maximise(UserMask component, const std::vector<int>& order, UserMask& best_set) {
    best_ = 0;
    best_set_ = 0;
    order_ = &order;
    target_ = -1;
    done_ = false;
    branch(0, component, 0);
    best_set = best_set_;
    return best_;
  }

  // First acyclic subset of size `target` in include-first ascending order,
  // which is the lexicographically smallest one.
  UserMask smallest_of_size(UserMask component, int target, const std::vector<int>& order) {
    best_ = -1;
    best_set_ = 0;
    order_ = &order;
    target_ = target;
    done_ = false;
    branch(0, component, 0);
    return best_set_;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }
  int best() const noexcept { return best_; }
  UserMask best_set() const noexcept { return best_set_; }

 private:
  // Upper bound on how many of `candidates` can join: vertices that pairwise
  // share a 2-cycle admit at most one member, so a greedy partition into such
  // cliques bounds the gain.
  int clique_cover_bound(UserMask candidates) const {
    int cliques = 0;
    while (candidates) {
      const int v = __builtin_ctzll(candidates);
      UserMask clique_ok = g_.out(v + 1) & g_.in(v + 1);
      candidates &= candidates - 1;
      UserMask mutual = candidates & clique_ok;
      while (mutual) {
        const int w = __builtin_ctzll(mutual);
        const UserMask bit = UserMask{1} << w;
        candidates &= ~bit;
        clique_ok &= g_.out(w + 1) & g_.in(w + 1);
        mutual &= clique_ok & ~bit;
      }
      ++cliques;
    }
    return cliques;
  }

  void branch(UserMask chosen, UserMask candidates, std::size_t pos) {
    if (++nodes_ > budget_) {
      throw BudgetExceeded("maximum acyclic induced subgraph search exceeded its node budget", nodes_);
    }
    if (done_) return;
    const int size = __builtin_popcountll(chosen);
    UserMask live = 0;
    for (UserMask c = candidates; c; c &= c - 1) {
      const int v = __builtin_ctzll(c);
      if (!closes_cycle(g_, chosen, v)) live |= UserMask{1} << v;
    }
    if (target_ >= 0) {
      if (size == target_) {
        best_ = size;
        best_set_ = chosen;
        done_ = true;
        return;
      }
      if (size + clique_cover_bound(live) < target_) return;
    } else {
      if (size > best_) {
        best_ = size;
        best_set_ = chosen;
      }
      if (size + clique_cover_bound(live) <= best_) return;
    }
    if (!live) return;
    const std::vector<int>& order = *order_;
    while (pos < order.size() && !(live & (UserMask{1} << order[pos]))) ++pos;
    const int v = order[pos];
    const UserMask bit = UserMask{1} << v;
    branch(chosen | bit, live & ~bit, pos + 1);
    if (done_) return;
    branch(chosen, live & ~bit, pos + 1);
  }

  const SideInfoGraph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  const std::vector<int>* order_ = nullptr;
  int best_ = 0;
  int target_ = -1;
  bool done_ = false;
  UserMask best_set_ = 0;
};

// Strongly connected components as vertex masks (0-based bits).
inline std::vector<UserMask> strong_components(const SideInfoGraph& g) {
  const int m = g.vertex_count();
  std::vector<UserMask> reach(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) {
    UserMask seen = UserMask{1} << v;
    UserMask frontier = seen;
    while (frontier) {
      UserMask next = 0;
      for (UserMask f = frontier; f; f &= f - 1) next |= g.out(__builtin_ctzll(f) + 1);
      next &= ~seen;
      seen |= next;
      frontier = next;
    }
    reach[static_cast<std::size_t>(v)] = seen;
  }
  std::vector<UserMask> comps;
  UserMask assigned = 0;
  for (int v = 0; v < m; ++v) {
    if (assigned & (UserMask{1} << v)) continue;
    UserMask comp = 0;
    for (int w = 0; w < m; ++w) {
      if ((reach[static_cast<std::size_t>(v)] >> w & 1u) && (reach[static_cast<std::size_t>(w)] >> v & 1u)) {
        comp |= UserMask{1} << w;
      }
    }
    assigned |= comp;
    comps.push_back(comp);
  }
  return comps;
}

}  // namespace detail

/// Exact maximum acyclic induced subgraph by branch and bound.
///
/// Cycles never cross strongly connected components, so each nontrivial
/// component is solved on its own. Within a component the value comes from a
/// search branching on vertices by descending total degree (ties: ascending
/// index); the reported witness is then the lexicographically smallest
/// acyclic set of that size, found by an include-first pass in index order.
/// Throws BudgetExceeded (with the best lower bound) past `node_budget`.
inline MaisResult mais(const SideInfoGraph& g, std::uint64_t node_budget = kMaisNodeBudget) {
  if (g.vertex_count() > 40) throw IndexOutOfRange("mais supports at most 40 vertices");
  detail::MaisSearch search(g, node_budget);
  UserMask witness = 0;
  int value = 0;
  try {
    for (UserMask comp : detail::strong_components(g)) {
      if (__builtin_popcountll(comp) == 1) {
        witness |= comp;
        ++value;
        continue;
      }
      std::vector<int> by_degree;
      std::vector<int> by_index;
      for (UserMask c = comp; c; c &= c - 1) by_index.push_back(__builtin_ctzll(c));
      by_degree = by_index;
      auto degree = [&](int v) {
        return __builtin_popcountll(g.out(v + 1) & comp) + __builtin_popcountll(g.in(v + 1) & comp);
      };
      std::stable_sort(by_degree.begin(), by_degree.end(), [&](int a, int b) { return degree(a) > degree(b); });
      UserMask best_set = 0;
      const int best = search.maximise(comp, by_degree, best_set);
      const UserMask lexmin = search.smallest_of_size(comp, best, by_index);
      witness |= lexmin;
      value += best;
    }
  } catch (const BudgetExceeded& e) {
    const int partial = value + std::max(search.best(), 0);
    throw BudgetExceeded(e.what(), e.nodes(), partial, set_of(witness | search.best_set()));
  }
  return MaisResult{value, set_of(witness), search.nodes()};
}

}  // namespace indexcode
