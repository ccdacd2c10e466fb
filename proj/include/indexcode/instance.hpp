#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "indexcode/error.hpp"

namespace indexcode {

/// Sorted, duplicate-free set of 1-based user (= message) indices.
using UserSet = std::vector<int>;

/// Bitmask over users; bit (i - 1) stands for user i.
using UserMask = std::uint64_t;

inline constexpr int kMaxUsers = 64;

inline UserMask mask_of(const UserSet& s) {
  UserMask m = 0;
  for (int i : s) m |= UserMask{1} << (i - 1);
  return m;
}

inline UserSet set_of(UserMask m) {
  UserSet s;
  while (m) {
    s.push_back(__builtin_ctzll(m) + 1);
    m &= m - 1;
  }
  return s;
}

inline UserMask full_mask(int m) { return m >= 64 ? ~UserMask{0} : (UserMask{1} << m) - 1; }

inline std::string format_set(const UserSet& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(s[k]);
  }
  return out + "}";
}

/// A unicast index-coding instance: user i requests message i and holds the
/// messages in A_i. Users are 1-based throughout.
class Instance {
 public:
  /// Validates raw side-information sets (sorting and de-duplicating them).
  static Instance validate(int m, std::vector<UserSet> side_info, std::string name = {}) {
    if (m < 0 || m > kMaxUsers) {
      throw IndexOutOfRange("user count " + std::to_string(m) + " outside [0, " +
                            std::to_string(kMaxUsers) + "]");
    }
    if (side_info.size() != static_cast<std::size_t>(m)) {
      throw DimensionMismatch("expected " + std::to_string(m) + " side-information sets, got " +
                              std::to_string(side_info.size()));
    }
    Instance inst;
    inst.m_ = m;
    inst.name_ = std::move(name);
    inst.side_.resize(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      UserSet s = std::move(side_info[static_cast<std::size_t>(i - 1)]);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (int j : s) {
        if (j < 1 || j > m) {
          throw IndexOutOfRange("user " + std::to_string(i) + " side information refers to message " +
                                std::to_string(j) + " outside [1, " + std::to_string(m) + "]");
        }
        if (j == i) throw SelfInclusion(i);
      }
      inst.side_[static_cast<std::size_t>(i - 1)] = mask_of(s);
    }
    return inst;
  }

  /// Builds an instance from its interfering sets B_i.
  static Instance from_interfering(int m, const std::vector<UserSet>& interfering, std::string name = {}) {
    if (interfering.size() != static_cast<std::size_t>(m)) {
      throw DimensionMismatch("expected " + std::to_string(m) + " interfering sets");
    }
    if (m < 0 || m > kMaxUsers) throw IndexOutOfRange("user count out of range");
    std::vector<UserSet> a(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      const UserSet& b = interfering[static_cast<std::size_t>(i - 1)];
      for (int j : b) {
        if (j < 1 || j > m) throw IndexOutOfRange("interfering set of user " + std::to_string(i) + " out of range");
        if (j == i) throw SelfInclusion(i);
      }
      const UserMask known = full_mask(m) & ~mask_of(b) & ~(UserMask{1} << (i - 1));
      a[static_cast<std::size_t>(i - 1)] = set_of(known);
    }
    return validate(m, std::move(a), std::move(name));
  }

  int m() const noexcept { return m_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  UserMask side_mask(int user) const { return side_.at(static_cast<std::size_t>(user - 1)); }
  UserMask interfering_mask(int user) const {
    return full_mask(m_) & ~side_mask(user) & ~(UserMask{1} << (user - 1));
  }
  UserSet side_info(int user) const { return set_of(side_mask(user)); }
  UserSet interfering(int user) const { return set_of(interfering_mask(user)); }

  // True iff user i holds message j.
  bool knows(int user, int message) const { return (side_mask(user) >> (message - 1)) & 1u; }

  friend bool operator==(const Instance& a, const Instance& b) { return a.m_ == b.m_ && a.side_ == b.side_; }

 private:
  Instance() = default;

  int m_ = 0;
  std::string name_;
  std::vector<UserMask> side_;
};

inline std::vector<UserSet> interfering_sets(const Instance& inst) {
  std::vector<UserSet> out;
  out.reserve(static_cast<std::size_t>(inst.m()));
  for (int i = 1; i <= inst.m(); ++i) out.push_back(inst.interfering(i));
  return out;
}

inline std::vector<UserSet> side_info_sets(const Instance& inst) {
  std::vector<UserSet> out;
  out.reserve(static_cast<std::size_t>(inst.m()));
  for (int i = 1; i <= inst.m(); ++i) out.push_back(inst.side_info(i));
  return out;
}

inline Instance compose_noway(const Instance& first, const Instance& second) {
  const int m1 = first.m();
  const int m = m1 + second.m();
  if (m > kMaxUsers) throw IndexOutOfRange("composed instance exceeds " + std::to_string(kMaxUsers) + " users");
  std::vector<UserSet> a = side_info_sets(first);
  for (int i = 1; i <= second.m(); ++i) {
    UserSet s = second.side_info(i);
    for (int& j : s) j += m1;
    a.push_back(std::move(s));
  }
  return Instance::validate(m, std::move(a));
}

inline Instance compose_twoway(const Instance& first, const Instance& second) {
  const int m1 = first.m();
  const int m = m1 + second.m();
  if (m > kMaxUsers) throw IndexOutOfRange("composed instance exceeds " + std::to_string(kMaxUsers) + " users");
  const UserMask first_block = full_mask(m1);
  const UserMask second_block = full_mask(m) & ~first_block;
  std::vector<UserSet> a;
  for (int i = 1; i <= m1; ++i) a.push_back(set_of(first.side_mask(i) | second_block));
  for (int i = 1; i <= second.m(); ++i) a.push_back(set_of((second.side_mask(i) << m1) | first_block));
  return Instance::validate(m, std::move(a));
}

// JSON document {"m": int, "A": [[...], ...], "name": str}; sets ascending.
inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 1; i <= inst.m(); ++i) a.push_back(inst.side_info(i));
  return nlohmann::json{{"m", inst.m()}, {"A", a}, {"name", inst.name()}};
}

inline Instance instance_from_json(const nlohmann::json& doc) {
  try {
    const int m = doc.at("m").get<int>();
    auto a = doc.at("A").get<std::vector<UserSet>>();
    std::string name = doc.contains("name") ? doc.at("name").get<std::string>() : std::string{};
    return Instance::validate(m, std::move(a), std::move(name));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance document: ") + e.what());
  }
}

inline Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
  return instance_from_json(doc);
}

inline void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << to_json(inst).dump(2) << '\n';
}

}  // namespace indexcode
