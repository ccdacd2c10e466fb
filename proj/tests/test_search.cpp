#include <gtest/gtest.h>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

namespace {

SearchOutcome run(const Instance& inst, int q, int r, UserSet basis = {}, unsigned threads = 1) {
  SearchProblem p{inst, field_make(q), r};
  p.basis = std::move(basis);
  p.threads = threads;
  return scalar_code_search(p);
}

Matrix pad_with_duplicate(const Matrix& h) {
  Matrix out(h.field(), h.rows() + 1, h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) out.set(r, c, h.at(r, c));
  }
  for (std::size_t c = 0; c < h.cols(); ++c) out.set(h.rows(), c, h.at(0, c));
  return out;
}

}  // namespace

TEST(Search, I1BinaryFound) {
  const Instance i1 = catalog_get("I1").instance;
  const SearchOutcome o = run(i1, 2, 6, {1, 2, 3, 8, 9, 10});
  ASSERT_EQ(o.verdict, Verdict::found);
  ASSERT_TRUE(o.matrix.has_value());
  const LinearReport rep = verify_linear(i1, LinearCode(*o.matrix, 1, 10));
  EXPECT_TRUE(rep.decodable);
  EXPECT_EQ(rep.rate, Rate::of(6, 1));
}

TEST(Search, I1OddCharacteristicExhausted) {
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_EQ(run(i1, 3, 6).verdict, Verdict::exhausted);
  EXPECT_EQ(run(i1, 5, 6).verdict, Verdict::exhausted);
  EXPECT_EQ(run(i1, 3, 6, {1, 2, 3, 8, 9, 10}).verdict, Verdict::exhausted);
}

TEST(Search, I1PrimeBruteForce) {
  const Instance ip = i1_prime();
  const SearchOutcome brute = brute_force_subinstance(ip, field_make(3), 3);
  EXPECT_EQ(brute.verdict, Verdict::exhausted);
  EXPECT_EQ(brute.nodes, 531441u);
  EXPECT_EQ(run(ip, 3, 3).verdict, Verdict::exhausted);

  const SearchOutcome bin = run(ip, 2, 3, {1, 2, 3});
  ASSERT_EQ(bin.verdict, Verdict::found);
  EXPECT_TRUE(verify_linear(ip, LinearCode(*bin.matrix, 1, 7)).decodable);
  const Matrix rows = column_block(i1_binary_matrix(), {1, 2, 3, 4, 5, 6, 7}, 1);
  Matrix top(field_make(2), 3, 7);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 7; ++c) top.set(r, c, rows.at(r, c));
  }
  EXPECT_TRUE(verify_linear(ip, LinearCode(top, 1, 7)).decodable);
}

TEST(Search, SingleUser) {
  const Instance one = Instance::validate(1, {{}});
  for (int q : {2, 3, 4, 5}) EXPECT_EQ(run(one, q, 1).verdict, Verdict::found);
  EXPECT_EQ(*scalar_minrank(one, field_make(2), 1).value, 1);
}

TEST(Search, Minrank) {
  const Instance i1 = catalog_get("I1").instance;
  const MinrankResult bin = scalar_minrank(i1, field_make(2), 8);
  ASSERT_TRUE(bin.value.has_value());
  EXPECT_EQ(*bin.value, 6);
  const MinrankResult ter = scalar_minrank(i1, field_make(3), 7);
  EXPECT_EQ(ter.lower_bound, 6);
  EXPECT_EQ(ter.str(), "7");
}

TEST(Search, InvalidBasis) {
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_THROW(run(i1, 2, 6, {2, 3, 5}), InvalidBasis);
  EXPECT_THROW(run(i1, 2, 3, {1, 2, 3, 8}), InvalidBasis);
  EXPECT_THROW(run(i1, 2, 6, {11}), InvalidBasis);
  EXPECT_THROW(run(i1, 2, 11), Error);
}

TEST(Search, AgreesWithBruteForce) {
  std::mt19937_64 rng(404);
  int found = 0;
  int exhausted = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 3 + trial % 5;
    const int q = trial % 4 == 3 ? 3 : 2;
    const Instance inst = random_instance(m, 0.55, rng);
    const int lower = mais(SideInfoGraph(inst)).value;
    for (int r = std::max(1, lower - 1); r <= std::min(m, lower + 1); ++r) {
      SearchOutcome brute;
      try {
        brute = brute_force_subinstance(inst, field_make(q), r, {}, 2'000'000);
      } catch (const BudgetExceeded&) {
        continue;
      }
      const SearchOutcome pruned = run(inst, q, r);
      EXPECT_EQ(pruned.verdict, brute.verdict) << "trial " << trial << " r=" << r;
      if (pruned.verdict == Verdict::found) {
        ++found;
        EXPECT_TRUE(verify_linear(inst, LinearCode(*pruned.matrix, 1, m)).decodable);
        EXPECT_TRUE(verify_linear(inst, LinearCode(pad_with_duplicate(*pruned.matrix), 1, m)).decodable);
      } else {
        ++exhausted;
      }
    }
  }
  EXPECT_GT(found, 0);
  EXPECT_GT(exhausted, 0);
}

TEST(Search, VerdictIndependentOfBasisAndNormalization) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = Instance::validate(1, {{}});
    const auto code = detail::random_decodable_code(rng, &inst);
    if (!code) continue;
    const int r = static_cast<int>(code->length());
    EXPECT_TRUE(verify_linear(inst, *code).decodable);
    const Matrix mixed = multiply(random_invertible(code->field(), code->length(), rng), code->matrix());
    EXPECT_TRUE(verify_linear(inst, LinearCode(mixed, 1, inst.m())).decodable);
    const SideInfoGraph g(inst);
    const UserSet witness = mais(g).witness;
    const Verdict v0 = run(inst, code->field().q(), r).verdict;
    EXPECT_EQ(v0, Verdict::found);
    if (static_cast<int>(witness.size()) > 1) {
      const UserSet smaller(witness.begin() + 1, witness.end());
      EXPECT_EQ(run(inst, code->field().q(), r, smaller).verdict, v0);
    }
  }
}

TEST(Search, DeterministicAcrossRunsAndThreads) {
  const Instance i1 = catalog_get("I1").instance;
  const SearchOutcome a = run(i1, 5, 6, {}, 1);
  const SearchOutcome b = run(i1, 5, 6, {}, 1);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.column_order, b.column_order);
  const SearchOutcome f1 = run(i1, 2, 6, {}, 1);
  const SearchOutcome f2 = run(i1, 2, 6, {}, 3);
  ASSERT_TRUE(f1.matrix && f2.matrix);
  EXPECT_EQ(*f1.matrix, *f2.matrix);
  EXPECT_EQ(run(i1, 5, 6, {}, 3).verdict, Verdict::exhausted);
}

TEST(Search, BudgetTrips) {
  SearchProblem p{catalog_get("I1").instance, field_make(5), 6};
  p.budget = 10;
  p.threads = 1;
  EXPECT_EQ(scalar_code_search(p).verdict, Verdict::budget_exceeded);
}

TEST(Search, I2PlanForcesBasisColumns) {
  const PropertyTally t = lemma_checks(0, 1);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}
