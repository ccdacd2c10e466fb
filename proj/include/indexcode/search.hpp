#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "indexcode/error.hpp"
#include "indexcode/field.hpp"
#include "indexcode/graph.hpp"
#include "indexcode/instance.hpp"
#include "indexcode/lincode.hpp"

namespace indexcode {

inline constexpr int kMaxSearchRate = 8;
inline constexpr std::uint64_t kMaxSearchCandidates = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000'000;
inline constexpr std::size_t kMinimalCycleLimit = 200'000;
// Forward checking keeps a candidate bitset per column when q^r is at most this.
inline constexpr std::uint64_t kLookaheadCandidates = 4096;

enum class SearchOrder { hint, smallest_domain };

struct SearchProblem {
  Instance instance;
  FieldSpec field = field_make(2);
  int rate = 0;
  // Acyclic set pinned to standard basis columns; chosen automatically if empty.
  UserSet basis;
  SearchOrder order = SearchOrder::smallest_domain;
  // Column order used with SearchOrder::hint. Columns it omits follow,
  // fewest candidates first.
  std::vector<int> order_hint;
  std::uint64_t budget = kDefaultSearchBudget;
  unsigned threads = 0;
};

enum class Verdict { found, exhausted, budget_exceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::found: return "found";
    case Verdict::exhausted: return "exhausted";
    case Verdict::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

struct PruneCounts {
  // (a) a user's rank condition already fails on the assigned columns
  std::uint64_t subset_rank = 0;
  // (b) a minimal cyclic set whose assigned part is dependent, or whose
  //     dependency misses a member
  std::uint64_t minimal_cycle = 0;
  // (c) candidate values removed up front by independent-set forcing
  std::uint64_t independent_set = 0;

  PruneCounts& operator+=(const PruneCounts& o) {
    subset_rank += o.subset_rank;
    minimal_cycle += o.minimal_cycle;
    independent_set += o.independent_set;
    return *this;
  }
};

struct SearchOutcome {
  Verdict verdict = Verdict::exhausted;
  std::uint64_t nodes = 0;
  PruneCounts prunes;
  std::optional<Matrix> matrix;
  UserSet basis;
  std::vector<int> column_order;
};

/// INDEXCODE_BUDGET if set to a positive integer, else `fallback`.
inline std::uint64_t budget_from_env(std::uint64_t fallback = kDefaultSearchBudget) {
  if (const char* env = std::getenv("INDEXCODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return fallback;
}

namespace detail {

using Vec = std::array<std::uint8_t, kMaxSearchRate>;

inline Vec vec_from_index(std::uint64_t index, int q, int r) {
  Vec v{};
  for (int k = 0; k < r; ++k) {
    v[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(index % static_cast<std::uint64_t>(q));
    index /= static_cast<std::uint64_t>(q);
  }
  return v;
}

inline bool vec_zero(const Vec& v, int r) {
  for (int k = 0; k < r; ++k) {
    if (v[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

// v -= c * w
template <std::size_t N>
void vec_axpy(const FieldSpec& f, std::array<std::uint8_t, N>& v, std::uint8_t c, const std::array<std::uint8_t, N>& w,
              int r) {
  if (!c) return;
  const std::uint8_t nc = f.neg_raw(c);
  for (int k = 0; k < r; ++k) {
    v[static_cast<std::size_t>(k)] = f.add_raw(v[static_cast<std::size_t>(k)], f.mul_raw(nc, w[static_cast<std::size_t>(k)]));
  }
}

/// Reduced row echelon basis of a subspace of GF(q)^r. Every row has a 1 at
/// its pivot and 0 at every other row's pivot, so reduction is one pass.
struct EchelonSpan {
  std::uint8_t rank = 0;
  std::array<std::uint8_t, kMaxSearchRate> pivot{};
  std::array<Vec, kMaxSearchRate> rows{};

  // Returns the multipliers used: v_reduced = v - sum mult[k] rows[k].
  Vec reduce(const FieldSpec& f, Vec& v, int r) const {
    Vec mult{};
    for (int k = 0; k < rank; ++k) {
      const std::uint8_t c = v[pivot[static_cast<std::size_t>(k)]];
      mult[static_cast<std::size_t>(k)] = c;
      vec_axpy(f, v, c, rows[static_cast<std::size_t>(k)], r);
    }
    return mult;
  }

  // `v` must be reduced and nonzero. Returns the new pivot; `v` ends up
  // normalised as the stored row. `scale` receives the inverse leading
  // coefficient, `elim[k]` the multiple of the new row subtracted from row k.
  int insert(const FieldSpec& f, Vec& v, int r, std::uint8_t& scale, Vec& elim) {
    int p = 0;
    while (!v[static_cast<std::size_t>(p)]) ++p;
    scale = f.inv_raw(v[static_cast<std::size_t>(p)]);
    for (int k = 0; k < r; ++k) v[static_cast<std::size_t>(k)] = f.mul_raw(scale, v[static_cast<std::size_t>(k)]);
    for (int k = 0; k < rank; ++k) {
      auto& row = rows[static_cast<std::size_t>(k)];
      const std::uint8_t c = row[static_cast<std::size_t>(p)];
      elim[static_cast<std::size_t>(k)] = c;
      vec_axpy(f, row, c, v, r);
    }
    rows[rank] = v;
    pivot[rank] = static_cast<std::uint8_t>(p);
    ++rank;
    return p;
  }
};

// Per-user state for rule (a): span of the assigned interfering columns and
// the assigned own column reduced against it.
struct UserState {
  EchelonSpan span;
  Vec residual{};
  bool own_assigned = false;
};

// Per minimal cyclic set: span of its assigned columns, and for each span row
// its coefficients over the members (in member order).
inline constexpr int kMaxCycleMembers = kMaxSearchRate + 1;
using Coef = std::array<std::uint8_t, kMaxCycleMembers>;

struct CycleState {
  EchelonSpan span;
  std::array<Coef, kMaxSearchRate> coef{};
  std::uint8_t assigned = 0;
};

struct CycleInfo {
  std::vector<int> members;  // 0-based columns
};

/// Everything the workers share read-only.
struct SearchPlan {
  FieldSpec field = field_make(2);
  int m = 0;
  int r = 0;
  std::uint64_t candidates = 0;
  UserSet basis;
  std::vector<Vec> pinned;                     // per column, valid when is_pinned
  std::vector<bool> is_pinned;
  std::vector<int> order;                      // unpinned columns, 0-based, in assignment order
  std::vector<std::vector<std::uint32_t>> domain;  // per column, candidate indices after static filters
  std::vector<Vec> cand;                       // candidate index -> vector
  std::vector<std::vector<int>> affected;      // column j -> users i with j in B_i
  std::vector<std::vector<int>> interf;        // user i -> columns of B_i
  std::vector<std::uint64_t> power;            // q^k
  bool lookahead = false;                      // candidate bitsets for unassigned columns
  std::size_t words = 0;
  std::vector<CycleInfo> cycles;
  std::vector<std::vector<std::pair<int, int>>> cycle_of;  // column -> (cycle, member slot)
  std::uint64_t static_removed = 0;
};

class Worker {
 public:
  Worker(const SearchPlan& plan, std::atomic<std::uint64_t>& budget_left, std::atomic<bool>& out_of_budget)
      : p_(plan), budget_(budget_left), out_of_budget_(out_of_budget) {
    users_.resize(static_cast<std::size_t>(p_.m));
    cycles_.resize(p_.cycles.size());
    value_.resize(static_cast<std::size_t>(p_.m));
    assigned_.assign(static_cast<std::size_t>(p_.m), false);
    for (int j = 0; j < p_.m; ++j) {
      if (p_.is_pinned[static_cast<std::size_t>(j)]) {
        const bool ok = assign(j, p_.pinned[static_cast<std::size_t>(j)]);
        // Pinned columns of an acyclic set never conflict among themselves.
        if (!ok) pinned_conflict_ = true;
      }
    }
    trail_users_.clear();
    trail_cycles_.clear();
    changed_.clear();
    if (p_.lookahead && !pinned_conflict_) {
      const std::size_t w = p_.words;
      live_.assign(static_cast<std::size_t>(p_.m) * w, 0);
      for (int j = 0; j < p_.m; ++j) {
        for (std::uint32_t idx : p_.domain[static_cast<std::size_t>(j)]) {
          live_[static_cast<std::size_t>(j) * w + idx / 64] |= std::uint64_t{1} << (idx % 64);
        }
      }
      for (int u = 0; u < p_.m; ++u) changed_.push_back(u);
      if (!propagate()) pinned_conflict_ = true;
      trail_live_.clear();
      live_pool_.clear();
    }
  }

  bool pinned_conflict() const noexcept { return pinned_conflict_; }

  // Explores the subtree where order[depth] takes `first_value` (or every
  // value when first_value is empty). Returns true if a full code was found.
  bool run(std::optional<std::uint32_t> first_value, const std::atomic<long long>* cancel_above = nullptr,
           long long my_index = -1) {
    cancel_ = cancel_above;
    my_index_ = my_index;
    if (pinned_conflict_) return false;
    if (p_.order.empty()) return true;
    return dfs(0, first_value);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }
  const PruneCounts& prunes() const noexcept { return prunes_; }
  const std::vector<Vec>& values() const noexcept { return value_; }
  bool stopped() const noexcept { return stopped_; }

 private:
  struct UserSave {
    int user;
    UserState state;
  };
  struct CycleSave {
    int cycle;
    CycleState state;
  };

  bool charge() {
    ++nodes_;
    if ((nodes_ & 0x3FF) == 0 && cancel_ && cancel_->load(std::memory_order_relaxed) < my_index_) {
      stopped_ = true;
      return false;
    }
    std::uint64_t left = budget_.load(std::memory_order_relaxed);
    while (true) {
      if (left == 0) {
        out_of_budget_.store(true);
        stopped_ = true;
        return false;
      }
      if (budget_.compare_exchange_weak(left, left - 1, std::memory_order_relaxed)) return true;
    }
  }

  // With lookahead the next column is the open one with the fewest live
  // candidates, ties broken by position in the static order.
  int pick(std::size_t depth) const {
    if (!p_.lookahead || depth == 0) return p_.order[depth];
    int best = -1;
    std::size_t best_n = SIZE_MAX;
    for (int j : p_.order) {
      if (assigned_[static_cast<std::size_t>(j)]) continue;
      std::size_t n = 0;
      for (std::size_t w = 0; w < p_.words; ++w) {
        n += static_cast<std::size_t>(__builtin_popcountll(live_[static_cast<std::size_t>(j) * p_.words + w]));
      }
      if (n < best_n) {
        best_n = n;
        best = j;
      }
    }
    return best;
  }

  bool dfs(std::size_t depth, std::optional<std::uint32_t> only) {
    const int col = pick(depth);
    std::vector<std::uint32_t> values;
    if (p_.lookahead) {
      const std::uint64_t* bits = &live_[static_cast<std::size_t>(col) * p_.words];
      for (std::size_t w = 0; w < p_.words; ++w) {
        for (std::uint64_t b = bits[w]; b; b &= b - 1) {
          values.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(b))));
        }
      }
    } else {
      values = p_.domain[static_cast<std::size_t>(col)];
    }
    for (std::uint32_t idx : values) {
      if (only && idx != *only) continue;
      if (!charge()) return false;
      const std::size_t mark_u = trail_users_.size();
      const std::size_t mark_c = trail_cycles_.size();
      const std::size_t mark_l = trail_live_.size();
      changed_.clear();
      if (assign(col, p_.cand[idx]) && (!p_.lookahead || propagate())) {
        if (depth + 1 == p_.order.size()) return true;
        if (dfs(depth + 1, std::nullopt)) return true;
        if (stopped_) return false;
      }
      undo(col, mark_u, mark_c, mark_l);
    }
    return false;
  }

  std::uint64_t index_of(const Vec& v) const {
    std::uint64_t idx = 0;
    for (int k = 0; k < p_.r; ++k) idx += v[static_cast<std::size_t>(k)] * p_.power[static_cast<std::size_t>(k)];
    return idx;
  }

  // Bitset of the span's members, and optionally of the nonzero multiples of
  // `shift` added to it.
  void span_bits(const EchelonSpan& sp, const Vec* shift, std::vector<std::uint64_t>& out) {
    const FieldSpec& f = p_.field;
    const int q = f.q();
    const int r = p_.r;
    members_.assign(1, Vec{});
    for (int k = 0; k < sp.rank; ++k) {
      const std::size_t n = members_.size();
      for (int c = 1; c < q; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          Vec v = members_[i];
          vec_axpy(f, v, f.neg_raw(static_cast<std::uint8_t>(c)), sp.rows[static_cast<std::size_t>(k)], r);
          members_.push_back(v);
        }
      }
    }
    out.assign(p_.words, 0);
    for (const Vec& mvec : members_) {
      if (!shift) {
        const std::uint64_t idx = index_of(mvec);
        out[idx / 64] |= std::uint64_t{1} << (idx % 64);
        continue;
      }
      for (int c = 1; c < q; ++c) {
        Vec v = mvec;
        vec_axpy(f, v, f.neg_raw(static_cast<std::uint8_t>(c)), *shift, r);
        const std::uint64_t idx = index_of(v);
        out[idx / 64] |= std::uint64_t{1} << (idx % 64);
      }
    }
  }

  // Restricts live_[col] to `mask` (or its complement). False on wipeout.
  bool restrict_live(int col, const std::vector<std::uint64_t>& mask, bool keep_mask) {
    std::uint64_t* bits = &live_[static_cast<std::size_t>(col) * p_.words];
    bool changed = false;
    bool any = false;
    for (std::size_t w = 0; w < p_.words; ++w) {
      const std::uint64_t nb = bits[w] & (keep_mask ? mask[w] : ~mask[w]);
      if (nb != bits[w]) changed = true;
      any = any || nb;
    }
    if (changed) {
      trail_live_.push_back({col, live_pool_.size()});
      live_pool_.insert(live_pool_.end(), bits, bits + p_.words);
      for (std::size_t w = 0; w < p_.words; ++w) bits[w] &= keep_mask ? mask[w] : ~mask[w];
    }
    return any;
  }

  // Forward check: drop candidates of unassigned columns that would break a
  // user whose state changed in the last assignment.
  bool propagate() {
    const int r = p_.r;
    for (int u : changed_) {
      const UserState& st = users_[static_cast<std::size_t>(u)];
      const auto& cols = p_.interf[static_cast<std::size_t>(u)];
      bool any_open = !assigned_[static_cast<std::size_t>(u)];
      for (int j : cols) any_open = any_open || !assigned_[static_cast<std::size_t>(j)];
      if (!any_open) continue;
      span_bits(st.span, nullptr, span_);
      if (!assigned_[static_cast<std::size_t>(u)] && !restrict_live(u, span_, false)) {
        ++prunes_.subset_rank;
        return false;
      }
      if (st.own_assigned) {
        span_bits(st.span, &st.residual, coset_);
        for (int j : cols) {
          if (!assigned_[static_cast<std::size_t>(j)] && !restrict_live(j, coset_, false)) {
            ++prunes_.subset_rank;
            return false;
          }
        }
      } else if (st.span.rank + 1 == r) {
        for (int j : cols) {
          if (!assigned_[static_cast<std::size_t>(j)] && !restrict_live(j, span_, true)) {
            ++prunes_.subset_rank;
            return false;
          }
        }
      }
    }
    return true;
  }

  void save_user(int u) { trail_users_.push_back({u, users_[static_cast<std::size_t>(u)]}); }
  void save_cycle(int c) { trail_cycles_.push_back({c, cycles_[static_cast<std::size_t>(c)]}); }

  void undo(int col, std::size_t mark_u, std::size_t mark_c, std::size_t mark_l) {
    while (trail_live_.size() > mark_l) {
      const auto [c, off] = trail_live_.back();
      std::copy(live_pool_.begin() + static_cast<std::ptrdiff_t>(off),
                live_pool_.begin() + static_cast<std::ptrdiff_t>(off + p_.words),
                live_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * p_.words));
      live_pool_.resize(off);
      trail_live_.pop_back();
    }
    while (trail_users_.size() > mark_u) {
      users_[static_cast<std::size_t>(trail_users_.back().user)] = trail_users_.back().state;
      trail_users_.pop_back();
    }
    while (trail_cycles_.size() > mark_c) {
      cycles_[static_cast<std::size_t>(trail_cycles_.back().cycle)] = trail_cycles_.back().state;
      trail_cycles_.pop_back();
    }
    assigned_[static_cast<std::size_t>(col)] = false;
  }

  // Assigns column `col` and applies rules (a) and (b). On failure the caller
  // undoes via the trail.
  bool assign(int col, const Vec& v) {
    const FieldSpec& f = p_.field;
    const int r = p_.r;
    value_[static_cast<std::size_t>(col)] = v;
    assigned_[static_cast<std::size_t>(col)] = true;

    // Own condition: h_col outside the span of its assigned interference.
    {
      save_user(col);
      UserState& st = users_[static_cast<std::size_t>(col)];
      Vec res = v;
      st.span.reduce(f, res, r);
      st.residual = res;
      st.own_assigned = true;
      changed_.push_back(col);
      if (vec_zero(res, r)) {
        ++prunes_.subset_rank;
        return false;
      }
    }
    for (int u : p_.affected[static_cast<std::size_t>(col)]) {
      UserState& st = users_[static_cast<std::size_t>(u)];
      Vec nu = v;
      st.span.reduce(f, nu, r);
      if (vec_zero(nu, r)) continue;
      save_user(u);
      changed_.push_back(u);
      std::uint8_t scale = 0;
      Vec elim{};
      const int piv = st.span.insert(f, nu, r, scale, elim);
      if (st.own_assigned) {
        vec_axpy(f, st.residual, st.residual[static_cast<std::size_t>(piv)], nu, r);
        if (vec_zero(st.residual, r)) {
          ++prunes_.subset_rank;
          return false;
        }
      } else if (st.span.rank >= r) {
        // The interference already fills the space; no room for h_u.
        ++prunes_.subset_rank;
        return false;
      }
    }

    for (const auto& [ci, slot] : p_.cycle_of[static_cast<std::size_t>(col)]) {
      const auto& info = p_.cycles[static_cast<std::size_t>(ci)];
      const int size = static_cast<int>(info.members.size());
      CycleState& cs = cycles_[static_cast<std::size_t>(ci)];
      save_cycle(ci);
      ++cs.assigned;
      Vec nu = v;
      const Vec mult = cs.span.reduce(f, nu, r);
      if (!vec_zero(nu, r)) {
        if (cs.assigned == size) {
          // Every such set has forced rank |C|-1.
          ++prunes_.minimal_cycle;
          return false;
        }
        // Member coefficients of the new row: e_slot - sum mult[k] coef[k], scaled.
        Coef c{};
        c[static_cast<std::size_t>(slot)] = 1;
        for (int k = 0; k < cs.span.rank; ++k) {
          vec_axpy(f, c, mult[static_cast<std::size_t>(k)], cs.coef[static_cast<std::size_t>(k)], size);
        }
        std::uint8_t scale = 0;
        Vec elim{};
        const int before = cs.span.rank;
        cs.span.insert(f, nu, r, scale, elim);
        for (int k = 0; k < size; ++k) c[static_cast<std::size_t>(k)] = f.mul_raw(scale, c[static_cast<std::size_t>(k)]);
        for (int k = 0; k < before; ++k) {
          vec_axpy(f, cs.coef[static_cast<std::size_t>(k)], elim[static_cast<std::size_t>(k)], c, size);
        }
        cs.coef[static_cast<std::size_t>(before)] = c;
        continue;
      }
      if (cs.assigned < size) {
        // A proper subset of a minimal cyclic set is acyclic and must be independent.
        ++prunes_.minimal_cycle;
        return false;
      }
      // Complete and dependent: the dependency v = sum mult[k] rows[k] must
      // involve every other member.
      Coef dep{};
      for (int k = 0; k < cs.span.rank; ++k) {
        const std::uint8_t mk = mult[static_cast<std::size_t>(k)];
        if (!mk) continue;
        const auto& ck = cs.coef[static_cast<std::size_t>(k)];
        for (int s = 0; s < size; ++s) {
          dep[static_cast<std::size_t>(s)] = f.add_raw(dep[static_cast<std::size_t>(s)], f.mul_raw(mk, ck[static_cast<std::size_t>(s)]));
        }
      }
      for (int s = 0; s < size; ++s) {
        if (s != slot && !dep[static_cast<std::size_t>(s)]) {
          ++prunes_.minimal_cycle;
          return false;
        }
      }
    }
    return true;
  }

  const SearchPlan& p_;
  std::atomic<std::uint64_t>& budget_;
  std::atomic<bool>& out_of_budget_;
  const std::atomic<long long>* cancel_ = nullptr;
  long long my_index_ = -1;
  std::vector<UserState> users_;
  std::vector<CycleState> cycles_;
  std::vector<Vec> value_;
  std::vector<bool> assigned_;
  std::vector<UserSave> trail_users_;
  std::vector<CycleSave> trail_cycles_;
  std::vector<std::uint64_t> live_;  // per column candidate bitset, lookahead only
  std::vector<std::pair<int, std::size_t>> trail_live_;
  std::vector<std::uint64_t> live_pool_;
  std::vector<int> changed_;
  std::vector<Vec> members_;
  std::vector<std::uint64_t> span_;
  std::vector<std::uint64_t> coset_;
  std::uint64_t nodes_ = 0;
  PruneCounts prunes_;
  bool stopped_ = false;
  bool pinned_conflict_ = false;
};

inline std::uint64_t candidate_count(int q, int r) {
  std::uint64_t n = 1;
  for (int k = 0; k < r; ++k) {
    n *= static_cast<std::uint64_t>(q);
    if (n > kMaxSearchCandidates) throw BudgetExceeded("q^r exceeds the candidate table limit", 0);
  }
  return n;
}

inline void check_rate(const Instance& inst, int r) {
  if (r < 1 || r > kMaxSearchRate) {
    throw DimensionMismatch("search rate must be in [1, " + std::to_string(kMaxSearchRate) + "]");
  }
  if (r > inst.m()) throw DimensionMismatch("rate exceeds the number of users");
}

/// The pinned set: a user-given acyclic set of size at most r (at most r
/// columns can be independent), or the lexicographically smallest maximum
/// acyclic set truncated to r.
inline UserSet choose_basis(const Instance& inst, int r, const UserSet& requested) {
  const SideInfoGraph g(inst);
  if (!requested.empty()) {
    UserSet b = requested;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (int v : b) {
      if (v < 1 || v > inst.m()) throw InvalidBasis("basis vertex " + std::to_string(v) + " out of range");
    }
    if (static_cast<int>(b.size()) > r) {
      throw InvalidBasis("basis " + format_set(b) + " is larger than the rate " + std::to_string(r));
    }
    if (!is_acyclic(g, b)) throw InvalidBasis("basis " + format_set(b) + " is not acyclic");
    return b;
  }
  UserSet w = mais(g).witness;
  if (static_cast<int>(w.size()) > r) w.resize(static_cast<std::size_t>(r));
  return w;
}

inline SearchPlan make_plan(const SearchProblem& prob, bool with_cycles) {
  const Instance& inst = prob.instance;
  check_rate(inst, prob.rate);
  SearchPlan plan;
  plan.field = prob.field;
  plan.m = inst.m();
  plan.r = prob.rate;
  const int q = prob.field.q();
  const int m = plan.m;
  const int r = plan.r;
  plan.candidates = candidate_count(q, r);
  plan.basis = choose_basis(inst, r, prob.basis);

  plan.cand.reserve(plan.candidates);
  for (std::uint64_t i = 0; i < plan.candidates; ++i) plan.cand.push_back(vec_from_index(i, q, r));

  plan.is_pinned.assign(static_cast<std::size_t>(m), false);
  plan.pinned.assign(static_cast<std::size_t>(m), Vec{});
  std::vector<int> coord(static_cast<std::size_t>(m), -1);
  for (std::size_t k = 0; k < plan.basis.size(); ++k) {
    const int j = plan.basis[k] - 1;
    plan.is_pinned[static_cast<std::size_t>(j)] = true;
    plan.pinned[static_cast<std::size_t>(j)][k] = 1;
    coord[static_cast<std::size_t>(j)] = static_cast<int>(k);
  }

  plan.affected.assign(static_cast<std::size_t>(m), {});
  plan.interf.assign(static_cast<std::size_t>(m), {});
  for (int i = 1; i <= m; ++i) {
    for (int j : inst.interfering(i)) {
      plan.affected[static_cast<std::size_t>(j - 1)].push_back(i - 1);
      plan.interf[static_cast<std::size_t>(i - 1)].push_back(j - 1);
    }
  }
  plan.power.assign(static_cast<std::size_t>(r) + 1, 1);
  for (int k = 1; k <= r; ++k) plan.power[static_cast<std::size_t>(k)] = plan.power[static_cast<std::size_t>(k - 1)] * static_cast<std::uint64_t>(q);
  plan.lookahead = plan.candidates <= kLookaheadCandidates;
  plan.words = static_cast<std::size_t>((plan.candidates + 63) / 64);

  // Static filters per unpinned column j:
  //  - h_j must leave the span of the pinned columns in B_j;
  //  - for a pinned p with j in B_p, h_j may not put e_p into the span of the
  //    pinned columns of B_p together with h_j.
  plan.domain.assign(static_cast<std::size_t>(m), {});
  for (int j = 0; j < m; ++j) {
    if (plan.is_pinned[static_cast<std::size_t>(j)]) continue;
    std::uint32_t own_allowed = 0;  // coordinate mask of pinned columns in B_j
    for (int b : inst.interfering(j + 1)) {
      if (coord[static_cast<std::size_t>(b - 1)] >= 0) own_allowed |= 1u << coord[static_cast<std::size_t>(b - 1)];
    }
    std::vector<std::pair<int, std::uint32_t>> forcing;  // (coordinate of p, allowed coordinate mask)
    for (int pcol = 0; pcol < m; ++pcol) {
      if (!plan.is_pinned[static_cast<std::size_t>(pcol)]) continue;
      if (!((inst.interfering_mask(pcol + 1) >> j) & 1u)) continue;
      std::uint32_t mask = 1u << coord[static_cast<std::size_t>(pcol)];
      for (int b : inst.interfering(pcol + 1)) {
        if (coord[static_cast<std::size_t>(b - 1)] >= 0) mask |= 1u << coord[static_cast<std::size_t>(b - 1)];
      }
      forcing.emplace_back(coord[static_cast<std::size_t>(pcol)], mask);
    }
    auto& dom = plan.domain[static_cast<std::size_t>(j)];
    for (std::uint64_t idx = 0; idx < plan.candidates; ++idx) {
      const Vec& v = plan.cand[idx];
      std::uint32_t support = 0;
      for (int k = 0; k < r; ++k) {
        if (v[static_cast<std::size_t>(k)]) support |= 1u << k;
      }
      if ((support & ~own_allowed) == 0) continue;  // zero or inside pinned interference
      bool forced_out = false;
      for (const auto& [pc, mask] : forcing) {
        if (v[static_cast<std::size_t>(pc)] && (support & ~mask) == 0) {
          forced_out = true;
          break;
        }
      }
      if (forced_out) {
        ++plan.static_removed;
        continue;
      }
      dom.push_back(static_cast<std::uint32_t>(idx));
    }
  }

  // Assignment order.
  std::vector<int> natural;
  for (int j = 0; j < m; ++j) {
    if (!plan.is_pinned[static_cast<std::size_t>(j)]) natural.push_back(j);
  }
  std::stable_sort(natural.begin(), natural.end(), [&](int a, int b) {
    return plan.domain[static_cast<std::size_t>(a)].size() < plan.domain[static_cast<std::size_t>(b)].size();
  });
  if (prob.order == SearchOrder::hint && !prob.order_hint.empty()) {
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (int h : prob.order_hint) {
      if (h < 1 || h > m) throw IndexOutOfRange("order hint column " + std::to_string(h) + " out of range");
      const int j = h - 1;
      if (plan.is_pinned[static_cast<std::size_t>(j)] || used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      plan.order.push_back(j);
    }
    for (int j : natural) {
      if (!used[static_cast<std::size_t>(j)]) plan.order.push_back(j);
    }
  } else {
    plan.order = natural;
  }

  // Minimal cyclic sets that carry a forced rank: size r+1 always; size r
  // when the set lies inside some B_i (H_{B_i} has rank at most r-1).
  plan.cycle_of.assign(static_cast<std::size_t>(m), {});
  if (with_cycles && r + 1 >= 3) {
    const SideInfoGraph g(inst);
    auto add = [&](const UserSet& members) {
      CycleInfo info;
      for (int v : members) info.members.push_back(v - 1);
      const int ci = static_cast<int>(plan.cycles.size());
      for (std::size_t s = 0; s < info.members.size(); ++s) {
        plan.cycle_of[static_cast<std::size_t>(info.members[s])].emplace_back(ci, static_cast<int>(s));
      }
      plan.cycles.push_back(std::move(info));
    };
    for (const auto& c : minimal_cyclic_sets(g, r + 1, kMinimalCycleLimit)) add(c);
    if (r >= 3) {
      for (const auto& c : minimal_cyclic_sets(g, r, kMinimalCycleLimit)) {
        const UserMask cm = mask_of(c);
        for (int i = 1; i <= m; ++i) {
          if ((cm & inst.interfering_mask(i)) == cm) {
            add(c);
            break;
          }
        }
      }
    }
  }
  return plan;
}

inline Matrix matrix_from_columns(const FieldSpec& f, int r, const std::vector<Vec>& cols) {
  Matrix h(f, static_cast<std::size_t>(r), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int k = 0; k < r; ++k) h.set(static_cast<std::size_t>(k), j, f.elem(cols[j][static_cast<std::size_t>(k)]));
  }
  return h;
}

}  // namespace detail

/// Decides whether a scalar linear code of length `rate` over the field
/// exists for the instance. Columns of an acyclic set are pinned to standard
/// basis vectors; the rest are assigned by backtracking with rank pruning.
/// Found codes are re-checked with verify_linear before being returned.
inline SearchOutcome scalar_code_search(const SearchProblem& prob) {
  const detail::SearchPlan plan = detail::make_plan(prob, true);
  SearchOutcome out;
  out.basis = plan.basis;
  for (int j : plan.order) out.column_order.push_back(j + 1);
  out.prunes.independent_set = plan.static_removed;

  std::atomic<std::uint64_t> budget{prob.budget};
  std::atomic<bool> out_of_budget{false};

  auto finish_found = [&](const std::vector<detail::Vec>& values) {
    out.verdict = Verdict::found;
    out.matrix = detail::matrix_from_columns(plan.field, plan.r, values);
    const LinearCode code(*out.matrix, 1, plan.m);
    if (!verify_linear(prob.instance, code).decodable) {
      throw Error("internal: search produced a code that fails verification");
    }
  };

  if (plan.order.empty()) {
    detail::Worker w(plan, budget, out_of_budget);
    if (w.run(std::nullopt)) {
      finish_found(w.values());
    } else {
      out.verdict = Verdict::exhausted;
    }
    return out;
  }

  // Partition on the first column's values.
  const auto& first_dom = plan.domain[static_cast<std::size_t>(plan.order.front())];
  const std::size_t parts = first_dom.size();
  struct PartResult {
    bool found = false;
    bool stopped = false;
    std::uint64_t nodes = 0;
    PruneCounts prunes;
    std::vector<detail::Vec> values;
  };
  std::vector<PartResult> results(parts);
  std::atomic<long long> best_found{static_cast<long long>(parts)};
  std::atomic<std::size_t> cursor{0};

  auto work = [&] {
    for (std::size_t i = cursor++; i < parts; i = cursor++) {
      if (static_cast<long long>(i) > best_found.load() || out_of_budget.load()) {
        results[i].stopped = true;
        continue;
      }
      detail::Worker w(plan, budget, out_of_budget);
      const bool found = w.run(first_dom[i], &best_found, static_cast<long long>(i));
      auto& res = results[i];
      res.nodes = w.nodes();
      res.prunes = w.prunes();
      res.stopped = w.stopped();
      if (found) {
        res.found = true;
        res.values = w.values();
        long long cur = best_found.load();
        while (static_cast<long long>(i) < cur && !best_found.compare_exchange_weak(cur, static_cast<long long>(i))) {
        }
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(prob.threads ? prob.threads : std::max(1u, std::thread::hardware_concurrency()),
                                                          static_cast<unsigned>(parts)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < parts; ++i) {
    const auto& res = results[i];
    out.nodes += res.nodes;
    out.prunes += res.prunes;
    if (res.found) {
      finish_found(res.values);
      return out;
    }
    if (res.stopped) {
      out.verdict = Verdict::budget_exceeded;
      out.nodes = prob.budget;
      return out;
    }
  }
  out.verdict = Verdict::exhausted;
  return out;
}

struct MinrankResult {
  // Smallest rate with a scalar code, or empty when none up to r_max.
  std::optional<int> value;
  int r_max = 0;
  int lower_bound = 0;  // MAIS
  std::vector<SearchOutcome> runs;

  std::string str() const { return value ? std::to_string(*value) : "> " + std::to_string(r_max); }
};

/// Smallest scalar code length over the field, trying rates upward from the
/// MAIS lower bound. A budget trip at any rate raises BudgetExceeded.
inline MinrankResult scalar_minrank(const Instance& inst, const FieldSpec& field, int r_max,
                                    std::uint64_t budget = kDefaultSearchBudget, unsigned threads = 0) {
  MinrankResult res;
  res.r_max = r_max;
  res.lower_bound = mais(SideInfoGraph(inst)).value;
  for (int r = std::max(1, res.lower_bound); r <= std::min(r_max, inst.m()); ++r) {
    SearchProblem prob{inst, field, r, {}, SearchOrder::smallest_domain, {}, budget, threads};
    SearchOutcome o = scalar_code_search(prob);
    const Verdict v = o.verdict;
    const std::uint64_t nodes = o.nodes;
    res.runs.push_back(std::move(o));
    if (v == Verdict::budget_exceeded) {
      throw BudgetExceeded("minrank search at rate " + std::to_string(r), nodes, res.lower_bound);
    }
    if (v == Verdict::found) {
      res.value = r;
      return res;
    }
  }
  return res;
}

inline constexpr std::uint64_t kBruteForceBudget = 100'000'000;

/// Unpruned oracle: pins the same kind of basis, then tries every assignment
/// of the remaining columns and checks only the full decoding condition.
/// Nodes counts complete assignments examined.
inline SearchOutcome brute_force_subinstance(const Instance& inst, const FieldSpec& field, int r,
                                             const UserSet& basis = {}, std::uint64_t budget = kBruteForceBudget) {
  detail::check_rate(inst, r);
  const int q = field.q();
  const int m = inst.m();
  const std::uint64_t cands = detail::candidate_count(q, r);
  SearchOutcome out;
  out.basis = detail::choose_basis(inst, r, basis);

  std::vector<int> free_cols;
  std::vector<detail::Vec> cols(static_cast<std::size_t>(m), detail::Vec{});
  for (int j = 1; j <= m; ++j) {
    const auto it = std::find(out.basis.begin(), out.basis.end(), j);
    if (it != out.basis.end()) {
      cols[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(it - out.basis.begin())] = 1;
    } else {
      free_cols.push_back(j - 1);
    }
  }
  for (int j : free_cols) out.column_order.push_back(j + 1);

  std::uint64_t total = 1;
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    if (total > budget / cands) {
      throw BudgetExceeded("brute force space exceeds the budget", 0);
    }
    total *= cands;
  }

  const std::vector<UserSet> b_sets = interfering_sets(inst);
  std::vector<std::uint64_t> digit(free_cols.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    if (n) {
      for (std::size_t k = 0; k < digit.size(); ++k) {
        if (++digit[k] < cands) break;
        digit[k] = 0;
      }
    }
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      cols[static_cast<std::size_t>(free_cols[k])] = detail::vec_from_index(digit[k], q, r);
    }
    ++out.nodes;
    const Matrix h = detail::matrix_from_columns(field, r, cols);
    bool ok = true;
    for (int i = 1; i <= m && ok; ++i) {
      UserSet with = b_sets[static_cast<std::size_t>(i - 1)];
      const std::size_t rb = rank(column_block(h, with, 1));
      with.push_back(i);
      ok = rank(column_block(h, with, 1)) == rb + 1;
    }
    if (ok) {
      out.verdict = Verdict::found;
      out.matrix = h;
      return out;
    }
  }
  out.verdict = Verdict::exhausted;
  return out;
}

}  // namespace indexcode
