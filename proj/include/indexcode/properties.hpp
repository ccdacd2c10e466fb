#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "indexcode/catalog.hpp"
#include "indexcode/field.hpp"
#include "indexcode/graph.hpp"
#include "indexcode/instance.hpp"
#include "indexcode/lincode.hpp"
#include "indexcode/search.hpp"

namespace indexcode {

/// Outcome of a randomized or exhaustive property sweep.
struct PropertyTally {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
  PropertyTally& operator+=(const PropertyTally& o) {
    if (failures == 0 && o.failures) first_failure = o.first_failure;
    cases += o.cases;
    failures += o.failures;
    return *this;
  }
};

inline const std::vector<int>& supported_field_sizes() {
  static const std::vector<int> sizes = {2, 3, 4, 5, 7, 8, 11, 13};
  return sizes;
}

/// Every field axiom over the full tables of GF(q).
inline PropertyTally field_axioms(int q) {
  PropertyTally t;
  const FieldSpec f = field_make(q);
  const std::string tag = "GF(" + std::to_string(q) + ") ";
  for (int a = 0; a < q; ++a) {
    const FieldElem x = f.elem(a);
    t.check(f.add(x, f.zero()) == x, tag + "additive identity");
    t.check(f.mul(x, f.one()) == x, tag + "multiplicative identity");
    t.check(f.add(x, f.neg(x)) == f.zero(), tag + "additive inverse");
    t.check(f.sub(x, x) == f.zero(), tag + "subtraction");
    if (a) t.check(f.mul(x, f.inv(x)) == f.one(), tag + "multiplicative inverse of " + std::to_string(a));
    for (int b = 0; b < q; ++b) {
      const FieldElem y = f.elem(b);
      t.check(f.add(x, y) == f.add(y, x), tag + "addition commutes");
      t.check(f.mul(x, y) == f.mul(y, x), tag + "multiplication commutes");
      if (a && b) t.check(!f.mul(x, y).is_zero(), tag + "no zero divisors");
      for (int c = 0; c < q; ++c) {
        const FieldElem z = f.elem(c);
        t.check(f.add(f.add(x, y), z) == f.add(x, f.add(y, z)), tag + "addition associates");
        t.check(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)), tag + "multiplication associates");
        t.check(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)), tag + "distributivity");
      }
    }
  }
  FieldElem acc = f.zero();
  for (int k = 0; k < f.characteristic(); ++k) acc = f.add(acc, f.one());
  t.check(acc == f.zero(), tag + "p * 1 = 0");
  int pk = 1;
  for (int k = 0; k < f.degree(); ++k) pk *= f.characteristic();
  t.check(pk == q, tag + "q = p^k");
  return t;
}

inline Matrix random_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix m(f, rows, cols);
  std::uniform_int_distribution<int> d(0, f.q() - 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, f.elem(d(rng)));
  }
  return m;
}

inline Matrix random_invertible(const FieldSpec& f, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng);
    if (rank(m) == n) return m;
  }
}

/// Random instance on m users, each j in A_i independently with probability p.
inline Instance random_instance(int m, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<UserSet> a(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      if (i != j && coin(rng)) a[static_cast<std::size_t>(i - 1)].push_back(j);
    }
  }
  return Instance::validate(m, std::move(a), "random");
}

namespace detail {

inline UserSet random_subset(const UserSet& of, std::mt19937_64& rng) {
  UserSet out;
  for (int v : of) {
    if (rng() & 1u) out.push_back(v);
  }
  return out;
}

// A decodable scalar code for a random instance, found by searching rates
// upward. Returns nullopt when the search space is out of reach.
inline std::optional<LinearCode> random_decodable_code(std::mt19937_64& rng, Instance* inst_out) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    const int m = 3 + static_cast<int>(rng() % 4);
    const FieldSpec f = field_make(rng() % 2 ? 3 : 2);
    Instance inst = random_instance(m, 0.5, rng);
    const int lo = mais(SideInfoGraph(inst)).value;
    for (int r = std::max(1, lo); r <= m && r <= kMaxSearchRate; ++r) {
      SearchProblem prob{inst, f, r};
      prob.budget = 2'000'000;
      prob.threads = 1;
      const SearchOutcome o = scalar_code_search(prob);
      if (o.verdict == Verdict::found) {
        // Undo the basis pinning with a random change of rows.
        Matrix h = multiply(random_invertible(f, static_cast<std::size_t>(r), rng), *o.matrix);
        *inst_out = inst;
        return LinearCode(std::move(h), 1, m);
      }
      if (o.verdict == Verdict::budget_exceeded) break;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Rank facts on random matrices and random decodable codes:
///  - rank <= min(rows, cols), invariant under row swaps and right
///    multiplication by an invertible matrix;
///  - rank H_{L1} <= rank H_{L2} for L1 a subset of L2;
///  - for decodable codes, rank H_{{i} u B'} = rank H_{B'} + t for every
///    B' inside B_i, and rank H_i = t.
inline PropertyTally rank_identities(int cases, std::uint64_t seed) {
  PropertyTally t;
  std::mt19937_64 rng(seed);
  const auto& sizes = supported_field_sizes();
  for (int c = 0; c < cases; ++c) {
    const FieldSpec f = field_make(sizes[rng() % 6]);  // q up to 8
    const std::size_t rows = 1 + rng() % 6;
    const std::size_t cols = 1 + rng() % 8;
    const Matrix a = random_matrix(f, rows, cols, rng);
    const std::size_t ra = rank(a);
    const std::string tag = "case " + std::to_string(c) + " ";
    t.check(ra <= std::min(rows, cols), tag + "rank bound");

    Matrix swapped = a;
    const std::size_t i = rng() % rows;
    const std::size_t j = rng() % rows;
    for (std::size_t k = 0; k < cols; ++k) {
      swapped.set(i, k, a.at(j, k));
      swapped.set(j, k, a.at(i, k));
    }
    t.check(rank(swapped) == ra, tag + "row swap");
    t.check(rank(multiply(a, random_invertible(f, cols, rng))) == ra, tag + "right invertible");

    UserSet l2;
    for (std::size_t k = 1; k <= cols; ++k) {
      if (rng() % 3) l2.push_back(static_cast<int>(k));
    }
    const UserSet l1 = detail::random_subset(l2, rng);
    t.check(rank(column_block(a, l1, 1)) <= rank(column_block(a, l2, 1)), tag + "monotone in column set");

    if (c % 4 == 0) {
      Instance inst = catalog_get("I1").instance;
      const auto code = detail::random_decodable_code(rng, &inst);
      if (!code) continue;
      t.check(verify_linear(inst, *code).decodable, tag + "found code decodes");
      for (int u = 1; u <= inst.m(); ++u) {
        const UserSet sub = detail::random_subset(inst.interfering(u), rng);
        t.check(verify_linear_subset(inst, *code, u, sub), tag + "subset condition for user " + std::to_string(u));
        t.check(rank(column_block(code->matrix(), {u}, 1)) == 1, tag + "own block full rank");
      }
    }
  }
  return t;
}

/// Structural checks behind the pruning rules:
///  - every proper subset of a minimal cyclic set is acyclic (catalog
///    instances, exhaustive on I1, enumerated cycles on I2);
///  - acyclic sets get full rank under I1-binary and random decodable codes;
///  - a minimal cyclic set of rank |C|-1 has a dependency touching every member;
///  - for an independent L and j in B_i for all i in L \ {l}, a column with
///    rank H_{{j} u L} = |L| is a nonzero multiple of h_l; on I2 with
///    L = {1,2,3,11,12,13} this pins h21..h26 to the basis columns of
///    1, 11, 2, 12, 3, 13.
inline PropertyTally lemma_checks(int random_codes, std::uint64_t seed) {
  PropertyTally t;
  const Instance i1 = catalog_get("I1").instance;
  const Instance i2 = catalog_get("I2").instance;
  const SideInfoGraph g1(i1);
  const SideInfoGraph g2(i2);

  for (UserMask s = 1; s < (UserMask{1} << i1.m()); ++s) {
    if (!detail::minimal_cyclic_mask(g1, s)) continue;
    for (int v : set_of(s)) {
      t.check(detail::acyclic_mask(g1, s & ~(UserMask{1} << (v - 1))), "I1 minimal cyclic " + format_set(set_of(s)));
    }
  }
  for (int size = 2; size <= 5; ++size) {
    for (const auto& c : minimal_cyclic_sets(g2, size)) {
      t.check(is_minimal_cyclic(g2, c), "I2 enumerated set is minimal cyclic " + format_set(c));
      for (int v : c) {
        UserSet rest;
        for (int w : c) {
          if (w != v) rest.push_back(w);
        }
        t.check(is_acyclic(g2, rest), "I2 minimal cyclic " + format_set(c));
      }
    }
  }

  auto code_checks = [&t](const Instance& inst, const LinearCode& code, const std::string& tag) {
    const SideInfoGraph g(inst);
    const int m = inst.m();
    const FieldSpec f = code.field();
    for (UserMask s = 1; s < (UserMask{1} << m); ++s) {
      const UserSet set = set_of(s);
      if (detail::acyclic_mask(g, s)) {
        t.check(acyclic_rank_check(inst, code, set), tag + " acyclic full rank " + format_set(set));
        continue;
      }
      if (!detail::minimal_cyclic_mask(g, s)) continue;
      const Matrix hc = column_block(code.matrix(), set, 1);
      if (rank(hc) + 1 != set.size()) continue;
      // The kernel of H_C is one-dimensional; every coordinate must be nonzero.
      bool all_nonzero = true;
      for (std::size_t k = 0; k < set.size(); ++k) {
        // Fix coordinate k to 1 and solve for the rest.
        Matrix reduced(f, hc.rows(), set.size() - 1);
        std::vector<FieldElem> rhs(hc.rows(), f.zero());
        for (std::size_t r = 0; r < hc.rows(); ++r) {
          rhs[r] = f.neg(hc.at(r, k));
          std::size_t cc = 0;
          for (std::size_t c = 0; c < set.size(); ++c) {
            if (c != k) reduced.set(r, cc++, hc.at(r, c));
          }
        }
        if (!solve(reduced, rhs)) all_nonzero = false;
      }
      t.check(all_nonzero, tag + " minimal cyclic dependency support " + format_set(set));
    }

    for (UserMask s = 1; s < (UserMask{1} << m); ++s) {
      const UserSet l = set_of(s);
      if (!is_independent(g, l)) continue;
      for (int j = 1; j <= m; ++j) {
        if ((s >> (j - 1)) & 1u) continue;
        UserSet with = l;
        with.push_back(j);
        if (rank(column_block(code.matrix(), with, 1)) != l.size()) continue;
        for (int keep : l) {
          bool hypothesis = true;
          for (int i : l) {
            if (i != keep && !((inst.interfering_mask(i) >> (j - 1)) & 1u)) hypothesis = false;
          }
          if (!hypothesis) continue;
          t.check(rank(column_block(code.matrix(), {j, keep}, 1)) == 1,
                  tag + " independent-set forcing j=" + std::to_string(j) + " l=" + std::to_string(keep));
        }
      }
    }
  };
  code_checks(i1, LinearCode(i1_binary_matrix(), 1, 10), "I1-binary");

  std::mt19937_64 rng(seed);
  for (int k = 0; k < random_codes; ++k) {
    Instance inst = i1;
    const auto code = detail::random_decodable_code(rng, &inst);
    if (code) code_checks(inst, *code, "random code " + std::to_string(k));
  }

  const auto entry = catalog_get("I2");
  const SearchProblem prob{i2, field_make(2), 6, entry.default_basis};
  const detail::SearchPlan plan = detail::make_plan(prob, false);
  const int expected_basis[6][2] = {{21, 1}, {22, 11}, {23, 2}, {24, 12}, {25, 3}, {26, 13}};
  for (const auto& [col, like] : expected_basis) {
    const auto& dom = plan.domain[static_cast<std::size_t>(col - 1)];
    const auto pos = std::find(entry.default_basis.begin(), entry.default_basis.end(), like) - entry.default_basis.begin();
    detail::Vec e{};
    e[static_cast<std::size_t>(pos)] = 1;
    t.check(dom.size() == 1 && plan.cand[dom.front()] == e,
            "I2 column " + std::to_string(col) + " forced onto the column of " + std::to_string(like));
  }
  return t;
}

}  // namespace indexcode
