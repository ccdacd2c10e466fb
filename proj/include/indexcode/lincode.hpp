#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "indexcode/field.hpp"
#include "indexcode/graph.hpp"
#include "indexcode/instance.hpp"

namespace indexcode {

/// Exact non-negative rational, kept in lowest terms. Rendered "num/den".
struct Rate {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rate of(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return g ? Rate{num / g, den / g} : Rate{0, 1};
  }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rate&, const Rate&) = default;
};

/// Linear encoder y = H x with H of size r x (m t); user i owns the t columns
/// of block i.
class LinearCode {
 public:
  LinearCode(Matrix h, int t, int m) : h_(std::move(h)), t_(t), m_(m) {
    if (t_ < 1) throw DimensionMismatch("block width t must be at least 1");
    if (h_.rows() < 1) throw DimensionMismatch("encoder matrix needs at least one row");
    if (h_.cols() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(t_)) {
      throw DimensionMismatch("encoder has " + std::to_string(h_.cols()) + " columns, expected m*t = " +
                              std::to_string(m_ * t_));
    }
  }

  const Matrix& matrix() const noexcept { return h_; }
  const FieldSpec& field() const noexcept { return h_.field(); }
  int t() const noexcept { return t_; }
  int m() const noexcept { return m_; }
  std::size_t length() const noexcept { return h_.rows(); }
  Rate rate() const { return Rate::of(static_cast<std::int64_t>(h_.rows()), t_); }

 private:
  Matrix h_;
  int t_;
  int m_;
};

struct LinearUserVerdict {
  int user = 0;
  bool pass = false;
  std::size_t rank_with_user = 0;   // rank H_{{i} u B_i}
  std::size_t rank_interference = 0;  // rank H_{B_i}
};

struct LinearReport {
  std::vector<LinearUserVerdict> users;
  bool decodable = false;
  std::size_t rank = 0;
  Rate rate;

  std::vector<int> failing_users() const {
    std::vector<int> out;
    for (const auto& u : users) {
      if (!u.pass) out.push_back(u.user);
    }
    return out;
  }
};

namespace detail {

inline void check_code_fits(const Instance& inst, const LinearCode& code) {
  if (code.m() != inst.m()) {
    throw DimensionMismatch("code is for " + std::to_string(code.m()) + " users but instance has " +
                            std::to_string(inst.m()));
  }
}

inline bool subset_rank_identity(const LinearCode& code, int user, const UserSet& others) {
  UserSet with = others;
  with.push_back(user);
  const std::size_t r_with = rank(column_block(code.matrix(), with, code.t()));
  const std::size_t r_without = rank(column_block(code.matrix(), others, code.t()));
  return r_with == r_without + static_cast<std::size_t>(code.t());
}

}  // namespace detail

/// Checks rank H_{{i} u B_i} = rank H_{B_i} + t for every user.
inline LinearReport verify_linear(const Instance& inst, const LinearCode& code) {
  detail::check_code_fits(inst, code);
  LinearReport report;
  report.rank = rank(code.matrix());
  report.rate = code.rate();
  report.decodable = true;
  for (int i = 1; i <= inst.m(); ++i) {
    UserSet b = inst.interfering(i);
    LinearUserVerdict v;
    v.user = i;
    v.rank_interference = rank(column_block(code.matrix(), b, code.t()));
    b.push_back(i);
    v.rank_with_user = rank(column_block(code.matrix(), b, code.t()));
    v.pass = v.rank_with_user == v.rank_interference + static_cast<std::size_t>(code.t());
    report.decodable = report.decodable && v.pass;
    report.users.push_back(v);
  }
  return report;
}

/// The same rank identity restricted to B' (a subset of B_i).
inline bool verify_linear_subset(const Instance& inst, const LinearCode& code, int user, const UserSet& subset) {
  detail::check_code_fits(inst, code);
  if (user < 1 || user > inst.m()) throw IndexOutOfRange("user " + std::to_string(user) + " out of range");
  const UserMask b = inst.interfering_mask(user);
  for (int j : subset) {
    if (j < 1 || j > inst.m() || !((b >> (j - 1)) & 1u)) {
      throw IndexOutOfRange("message " + std::to_string(j) + " is not in B_" + std::to_string(user));
    }
  }
  return detail::subset_rank_identity(code, user, subset);
}

/// For an acyclic set L, decodability forces rank H_L = |L| t. Returns whether
/// the code meets that.
inline bool acyclic_rank_check(const Instance& inst, const LinearCode& code, const UserSet& acyclic) {
  detail::check_code_fits(inst, code);
  if (!is_acyclic(SideInfoGraph(inst), acyclic)) {
    throw NotAcyclic("set " + format_set(acyclic) + " is not acyclic in the instance");
  }
  if (acyclic.empty()) return true;
  return rank(column_block(code.matrix(), acyclic, code.t())) == acyclic.size() * static_cast<std::size_t>(code.t());
}

}  // namespace indexcode
