#include <gtest/gtest.h>

#include <sstream>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

TEST(Field, BinaryAdditionIsXor) {
  const FieldSpec f = field_make(2);
  EXPECT_EQ(f.characteristic(), 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_EQ(f.add(f.elem(a), f.elem(b)).value, a ^ b);
  }
}

TEST(Field, Gf4HasCharacteristicTwo) {
  const FieldSpec f = field_make(4);
  EXPECT_EQ(f.characteristic(), 2);
  EXPECT_EQ(f.degree(), 2);
  for (int a = 0; a < 4; ++a) EXPECT_TRUE(f.add(f.elem(a), f.elem(a)).is_zero());
  // x * x = x + 1 modulo x^2 + x + 1
  EXPECT_EQ(f.mul(f.elem(2), f.elem(2)).value, 3);
}

TEST(Field, NonPrimePowerRejected) {
  EXPECT_THROW(field_make(6), UnsupportedField);
  EXPECT_THROW(field_make(9), UnsupportedField);
  EXPECT_THROW(field_make(1), UnsupportedField);
}

TEST(Field, AxiomsHoldForEverySupportedSize) {
  for (int q : supported_field_sizes()) {
    const PropertyTally t = field_axioms(q);
    EXPECT_GT(t.cases, 0u);
    EXPECT_EQ(t.failures, 0u) << "q=" << q << ": " << t.first_failure;
  }
}

TEST(Field, ElementOutOfRange) {
  EXPECT_THROW(field_make(3).elem(3), IndexOutOfRange);
  EXPECT_THROW(field_make(3).elem(-1), IndexOutOfRange);
}

TEST(Matrix, RankExamples) {
  EXPECT_EQ(rank(Matrix::identity(field_make(3), 3)), 3u);
  EXPECT_EQ(rank(Matrix(field_make(2), 2, 5)), 0u);
  EXPECT_EQ(rank(i1_binary_matrix()), 6u);
}

TEST(Matrix, RankOfI1MatrixByMinorExpansion) {
  // Columns 1,2,3,8,9,10 form the identity, so the rank is 6 independently of elimination.
  const Matrix h = i1_binary_matrix();
  const Matrix sub = column_block(h, {1, 2, 3, 8, 9, 10}, 1);
  EXPECT_EQ(sub, Matrix::identity(field_make(2), 6));
}

TEST(Matrix, ColumnBlocks) {
  const FieldSpec f = field_make(5);
  std::vector<std::vector<int>> rows(6);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 20; ++c) rows[r].push_back((r * 20 + c) % 5);
  }
  const Matrix h = Matrix::from_rows(f, rows);
  EXPECT_EQ(column_block(h, std::vector<int>{}, 1).cols(), 0u);
  const Matrix b = column_block(h, {1, 3}, 2);
  ASSERT_EQ(b.cols(), 4u);
  const int expect_cols[] = {0, 1, 4, 5};
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(b.at(r, c), h.at(r, expect_cols[c]));
  }
  const Matrix h10 = column_block(h, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 1);
  const Matrix b12 = column_block(h10, {1, 2}, 1);
  EXPECT_EQ(b12.cols(), 2u);
  EXPECT_THROW(column_block(h, {11}, 2), IndexOutOfRange);
}

TEST(Matrix, TextRoundTrip) {
  const Matrix h = i1_binary_matrix();
  std::stringstream ss;
  write_matrix(ss, h);
  EXPECT_EQ(parse_matrix(ss), h);
  EXPECT_THROW(parse_matrix(std::string("2 2 2\n1 0\n")), ParseError);
  EXPECT_THROW(parse_matrix(std::string("1 1 6\n1\n")), UnsupportedField);
}

TEST(Matrix, SolveAndMultiply) {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 4, 7}) {
    const FieldSpec f = field_make(q);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_invertible(f, 5, rng);
      const Matrix x = random_matrix(f, 5, 1, rng);
      const Matrix b = multiply(a, x);
      std::vector<FieldElem> rhs;
      for (std::size_t r = 0; r < 5; ++r) rhs.push_back(b.at(r, 0));
      const auto sol = solve(a, rhs);
      ASSERT_TRUE(sol.has_value());
      for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ((*sol)[r], x.at(r, 0));
    }
  }
}
