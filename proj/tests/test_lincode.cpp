#include <gtest/gtest.h>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

namespace {

LinearCode i1_code() { return LinearCode(i1_binary_matrix(), 1, 10); }

Matrix drop_row(const Matrix& h, std::size_t drop) {
  Matrix out(h.field(), h.rows() - 1, h.cols());
  for (std::size_t r = 0, o = 0; r < h.rows(); ++r) {
    if (r == drop) continue;
    for (std::size_t c = 0; c < h.cols(); ++c) out.set(o, c, h.at(r, c));
    ++o;
  }
  return out;
}

}  // namespace

TEST(Lincode, I1BinaryCodeDecodes) {
  const Instance i1 = catalog_get("I1").instance;
  const LinearReport rep = verify_linear(i1, i1_code());
  EXPECT_TRUE(rep.decodable);
  EXPECT_EQ(rep.rate, Rate::of(6, 1));
  EXPECT_EQ(rep.rank, 6u);
  EXPECT_EQ(rep.users.size(), 10u);
}

TEST(Lincode, I1BinaryMatrixRows) {
  // y1 = x1+x4+x6+x7, y2 = x2+x4+x5+x7, y3 = x3+x5+x6+x7, y4..y6 = x8..x10
  const std::vector<std::vector<int>> support = {{1, 4, 6, 7}, {2, 4, 5, 7}, {3, 5, 6, 7}, {8}, {9}, {10}};
  const Matrix h = i1_binary_matrix();
  for (std::size_t r = 0; r < 6; ++r) {
    for (int c = 1; c <= 10; ++c) {
      const bool in = std::find(support[r].begin(), support[r].end(), c) != support[r].end();
      EXPECT_EQ(h.at(r, static_cast<std::size_t>(c - 1)).value, in ? 1 : 0);
    }
  }
}

TEST(Lincode, SingleUserIdentity) {
  const Instance one = Instance::validate(1, {{}});
  const LinearReport rep = verify_linear(one, LinearCode(Matrix::identity(field_make(2), 1), 1, 1));
  EXPECT_TRUE(rep.decodable);
  EXPECT_EQ(rep.rate, Rate::of(1, 1));
}

TEST(Lincode, DeletingFirstRowBreaksUserOne) {
  const Instance i1 = catalog_get("I1").instance;
  const LinearReport rep = verify_linear(i1, LinearCode(drop_row(i1_binary_matrix(), 0), 1, 10));
  EXPECT_FALSE(rep.decodable);
  const auto failing = rep.failing_users();
  EXPECT_NE(std::find(failing.begin(), failing.end(), 1), failing.end());
}

TEST(Lincode, SubsetIdentity) {
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_TRUE(verify_linear_subset(i1, i1_code(), 1, {}));
  EXPECT_TRUE(verify_linear_subset(i1, i1_code(), 1, {2, 3}));
}

TEST(Lincode, AcyclicRankCheck) {
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_TRUE(acyclic_rank_check(i1, i1_code(), {1, 2, 3, 8, 9, 10}));
  EXPECT_TRUE(acyclic_rank_check(i1, i1_code(), {}));
  Matrix padded(field_make(2), 6, 10);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 10; ++c) padded.set(r, c, i1_binary_matrix().at(r, c));
  }
  EXPECT_FALSE(acyclic_rank_check(i1, LinearCode(padded, 1, 10), {1, 2, 3, 8, 9, 10}));
  EXPECT_THROW(acyclic_rank_check(i1, i1_code(), {2, 3, 5}), NotAcyclic);
}

TEST(Lincode, DimensionChecks) {
  EXPECT_THROW(LinearCode(Matrix(field_make(2), 2, 9), 1, 10), DimensionMismatch);
  EXPECT_THROW(LinearCode(Matrix(field_make(2), 2, 10), 0, 10), DimensionMismatch);
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_THROW(verify_linear(i1, LinearCode(Matrix(field_make(2), 2, 8), 1, 8)), DimensionMismatch);
}

TEST(Lincode, RankIdentitiesOnRandomCodes) {
  const PropertyTally t = rank_identities(300, 99);
  EXPECT_GT(t.cases, 0u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}

TEST(Lincode, LemmaProperties) {
  const PropertyTally t = lemma_checks(10, 5);
  EXPECT_GT(t.cases, 0u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}
