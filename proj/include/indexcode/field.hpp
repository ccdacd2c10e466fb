#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "indexcode/error.hpp"

namespace indexcode {

inline constexpr int kMaxFieldSize = 13;

/// An element of a small finite field, stored as its index in [0, q).
/// For prime q the index is the residue; for q = 4, 8 it is the bit-packed
/// polynomial coefficient vector.
struct FieldElem {
  std::uint8_t value = 0;

  constexpr FieldElem() = default;
  constexpr explicit FieldElem(std::uint8_t v) : value(v) {}

  friend constexpr bool operator==(FieldElem, FieldElem) = default;
  constexpr bool is_zero() const { return value == 0; }
};

inline constexpr bool is_supported_field_size(int q) {
  switch (q) {
    case 2: case 3: case 4: case 5: case 7: case 8: case 11: case 13:
      return true;
    default:
      return false;
  }
}

/// GF(q) for q in {2, 3, 4, 5, 7, 8, 11, 13}.
///
/// All arithmetic goes through precomputed tables, so a FieldSpec is a small
/// immutable value that can be copied freely and shared across threads.
/// GF(4) is built from x^2 + x + 1 and GF(8) from x^3 + x + 1.
class FieldSpec {
 public:
  static FieldSpec make(int q) {
    if (!is_supported_field_size(q)) throw UnsupportedField(q);
    FieldSpec f;
    f.q_ = q;
    if (q == 4 || q == 8) {
      f.p_ = 2;
      f.k_ = q == 4 ? 2 : 3;
      const unsigned poly = q == 4 ? 0b111u : 0b1011u;
      for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
          f.add_[idx(a, b)] = static_cast<std::uint8_t>(a ^ b);
          f.mul_[idx(a, b)] = static_cast<std::uint8_t>(poly_mul(a, b, poly, f.k_));
        }
      }
    } else {
      f.p_ = q;
      f.k_ = 1;
      for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
          f.add_[idx(a, b)] = static_cast<std::uint8_t>((a + b) % q);
          f.mul_[idx(a, b)] = static_cast<std::uint8_t>((a * b) % q);
        }
      }
    }
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        if (f.add_[idx(a, b)] == 0) f.neg_[a] = static_cast<std::uint8_t>(b);
        if (f.mul_[idx(a, b)] == 1) f.inv_[a] = static_cast<std::uint8_t>(b);
      }
    }
    return f;
  }

  int q() const noexcept { return q_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return k_; }

  FieldElem zero() const noexcept { return FieldElem{0}; }
  FieldElem one() const noexcept { return FieldElem{1}; }

  FieldElem elem(int v) const {
    if (v < 0 || v >= q_) {
      throw IndexOutOfRange("value " + std::to_string(v) + " is not an element of GF(" +
                            std::to_string(q_) + ")");
    }
    return FieldElem{static_cast<std::uint8_t>(v)};
  }

  FieldElem add(FieldElem a, FieldElem b) const noexcept { return FieldElem{add_[idx(a.value, b.value)]}; }
  FieldElem sub(FieldElem a, FieldElem b) const noexcept { return add(a, neg(b)); }
  FieldElem mul(FieldElem a, FieldElem b) const noexcept { return FieldElem{mul_[idx(a.value, b.value)]}; }
  FieldElem neg(FieldElem a) const noexcept { return FieldElem{neg_[a.value]}; }
  // Precondition: a is nonzero.
  FieldElem inv(FieldElem a) const noexcept { return FieldElem{inv_[a.value]}; }

  // Raw table access for hot loops that work on plain symbol bytes.
  std::uint8_t add_raw(std::uint8_t a, std::uint8_t b) const noexcept { return add_[idx(a, b)]; }
  std::uint8_t mul_raw(std::uint8_t a, std::uint8_t b) const noexcept { return mul_[idx(a, b)]; }
  std::uint8_t neg_raw(std::uint8_t a) const noexcept { return neg_[a]; }
  std::uint8_t inv_raw(std::uint8_t a) const noexcept { return inv_[a]; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept { return a.q_ == b.q_; }

 private:
  FieldSpec() = default;

  static constexpr std::size_t idx(int a, int b) { return static_cast<std::size_t>(a * kMaxFieldSize + b); }

  static int poly_mul(int a, int b, unsigned poly, int k) {
    unsigned acc = 0;
    for (int bit = 0; bit < k; ++bit) {
      if (b & (1 << bit)) acc ^= static_cast<unsigned>(a) << bit;
    }
    for (int bit = 2 * k - 2; bit >= k; --bit) {
      if (acc & (1u << bit)) acc ^= poly << (bit - k);
    }
    return static_cast<int>(acc);
  }

  int q_ = 2;
  int p_ = 2;
  int k_ = 1;
  std::array<std::uint8_t, kMaxFieldSize * kMaxFieldSize> add_{};
  std::array<std::uint8_t, kMaxFieldSize * kMaxFieldSize> mul_{};
  std::array<std::uint8_t, kMaxFieldSize> neg_{};
  std::array<std::uint8_t, kMaxFieldSize> inv_{};
};

inline FieldSpec field_make(int q) { return FieldSpec::make(q); }

/// Dense row-major matrix over a FieldSpec.
class Matrix {
 public:
  Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols) {}

  static Matrix identity(FieldSpec field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, field.one());
    return m;
  }

  // Rows of integer element indices; every row must have the same length.
  static Matrix from_rows(FieldSpec field, const std::vector<std::vector<int>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, field.elem(rows[r][c]));
    }
    return m;
  }

  const FieldSpec& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  FieldElem at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, FieldElem v) { entries_[r * cols_ + c] = v; }

  std::span<const FieldElem> row(std::size_t r) const {
    return std::span<const FieldElem>(entries_).subspan(r * cols_, cols_);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  FieldSpec field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElem> entries_;
};

/// Rank by Gaussian elimination on a private copy. Pivot is the first nonzero
/// entry in the column; arithmetic is exact so no pivoting strategy is needed.
inline std::size_t rank(const Matrix& m) {
  const FieldSpec& f = m.field();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<FieldElem> a(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r * cols + c] = m.at(r, c);
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * cols),
                       a.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * cols),
                       a.begin() + static_cast<std::ptrdiff_t>(rank * cols));
    }
    const FieldElem pinv = f.inv(a[rank * cols + c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const FieldElem factor = f.mul(a[r * cols + c], pinv);
      if (factor.is_zero()) continue;
      for (std::size_t k = c; k < cols; ++k) {
        a[r * cols + k] = f.sub(a[r * cols + k], f.mul(factor, a[rank * cols + k]));
      }
    }
    ++rank;
  }
  return rank;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw AlphabetMismatch("matrix fields differ");
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions differ");
  const FieldSpec& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      FieldElem acc = f.zero();
      for (std::size_t k = 0; k < a.cols(); ++k) acc = f.add(acc, f.mul(a.at(r, k), b.at(k, c)));
      out.set(r, c, acc);
    }
  }
  return out;
}

/// Solves A x = b. Returns nothing when the system is inconsistent; free
/// variables are set to zero.
inline std::optional<std::vector<FieldElem>> solve(const Matrix& a, std::span<const FieldElem> b) {
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length differs from row count");
  const FieldSpec& f = a.field();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const std::size_t width = cols + 1;
  std::vector<FieldElem> aug(rows * width);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) aug[r * width + c] = a.at(r, c);
    aug[r * width + cols] = b[r];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && aug[pivot * width + c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    for (std::size_t k = 0; k < width; ++k) std::swap(aug[pivot * width + k], aug[rank * width + k]);
    const FieldElem pinv = f.inv(aug[rank * width + c]);
    for (std::size_t k = 0; k < width; ++k) aug[rank * width + k] = f.mul(aug[rank * width + k], pinv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const FieldElem factor = aug[r * width + c];
      if (factor.is_zero()) continue;
      for (std::size_t k = 0; k < width; ++k) {
        aug[r * width + k] = f.sub(aug[r * width + k], f.mul(factor, aug[rank * width + k]));
      }
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (!aug[r * width + cols].is_zero()) return std::nullopt;
  }
  std::vector<FieldElem> x(cols, f.zero());
  for (std::size_t r = 0; r < rank; ++r) x[pivot_cols[r]] = aug[r * width + cols];
  return x;
}

inline Matrix transpose(const Matrix& m) {
  Matrix out(m.field(), m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(c, r, m.at(r, c));
  }
  return out;
}

/// Columns of the t-wide blocks named by `blocks` (1-based), concatenated in
/// ascending block order. Duplicates are collapsed.
inline Matrix column_block(const Matrix& h, std::span<const int> blocks, int t) {
  if (t < 1) throw DimensionMismatch("block width must be positive");
  std::vector<int> sorted(blocks.begin(), blocks.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto width = static_cast<std::size_t>(t);
  for (int l : sorted) {
    if (l < 1 || static_cast<std::size_t>(l) * width > h.cols()) {
      throw IndexOutOfRange("column block " + std::to_string(l) + " out of range for " +
                            std::to_string(h.cols()) + " columns at t=" + std::to_string(t));
    }
  }
  Matrix out(h.field(), h.rows(), sorted.size() * width);
  for (std::size_t b = 0; b < sorted.size(); ++b) {
    const std::size_t src = static_cast<std::size_t>(sorted[b] - 1) * width;
    for (std::size_t r = 0; r < h.rows(); ++r) {
      for (std::size_t k = 0; k < width; ++k) out.set(r, b * width + k, h.at(r, src + k));
    }
  }
  return out;
}

inline Matrix column_block(const Matrix& h, std::initializer_list<int> blocks, int t) {
  return column_block(h, std::span<const int>(blocks.begin(), blocks.size()), t);
}

// Text format: "rows cols q" on the first line, then one row per line.
inline Matrix parse_matrix(std::istream& in) {
  long rows = 0;
  long cols = 0;
  int q = 0;
  if (!(in >> rows >> cols >> q) || rows < 0 || cols < 0) {
    throw ParseError("matrix header must be 'rows cols q'");
  }
  const FieldSpec f = field_make(q);
  Matrix m(f, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      int v = 0;
      if (!(in >> v)) throw ParseError("matrix body truncated at row " + std::to_string(r + 1));
      m.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), f.elem(v));
    }
  }
  return m;
}

inline Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.field().q() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << static_cast<int>(m.at(r, c).value);
    }
    out << '\n';
  }
}

inline std::string to_text(const Matrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  return out.str();
}

}  // namespace indexcode
