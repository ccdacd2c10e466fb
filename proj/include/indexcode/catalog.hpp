#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "indexcode/field.hpp"
#include "indexcode/instance.hpp"

namespace indexcode {

/// A numeric fact about a catalog instance together with how the toolkit
/// re-derives it.
struct KnownBound {
  std::string name;        // "mais", "broadcast_rate", ...
  int value = 0;
  std::string derivation;  // which toolkit operation reproduces it
};

struct CatalogEntry {
  Instance instance;
  std::vector<KnownBound> known_bounds;
  // Column assignment order for the scalar search ("--order hint"); empty when
  // the instance has none.
  std::vector<int> order_hint;
  // Acyclic set used as the pinned basis by default.
  UserSet default_basis;
};

namespace detail {

inline Instance make_i1() {
  return Instance::validate(10,
                            {
                                {4, 6, 7},  // A_1
                                {1, 5, 6},  // A_2
                                {1, 2, 7},  // A_3
                                {2, 3, 6},  // A_4
                                {1, 3, 4},  // A_5
                                {3, 5, 7},  // A_6
                                {2, 4, 5},  // A_7
                                {},
                                {},
                                {},
                            },
                            "I1");
}

// Stored by interfering sets, exactly as tabulated for this instance.
inline const std::vector<UserSet>& i2_interfering_table() {
  static const std::vector<UserSet> table = {
      {2, 3, 5, 11, 12, 13, 15, 22, 23, 24, 25, 26},  // B_1
      {1, 3, 6, 11, 12, 13, 16, 21, 22, 24, 25, 26},  // B_2
      {1, 2, 4, 11, 12, 13, 14, 21, 22, 23, 24, 26},  // B_3
      {5, 6, 14, 15, 16},                              // B_4
      {4, 6, 14, 15, 16},                              // B_5
      {4, 5, 14, 15, 16},                              // B_6
      {17},                                            // B_7
      {1, 5, 7, 11, 15, 17, 18},                       // B_8
      {2, 6, 7, 12, 16, 17, 19},                       // B_9
      {3, 4, 7, 13, 14, 17, 20},                       // B_10
      {1, 2, 3, 5, 12, 13, 15, 21, 23, 24, 25, 26},   // B_11
      {1, 2, 3, 6, 11, 13, 16, 21, 22, 23, 25, 26},   // B_12
      {1, 2, 3, 4, 11, 12, 14, 21, 22, 23, 24, 25},   // B_13
      {4},                                             // B_14
      {5},                                             // B_15
      {6},                                             // B_16
      {7},                                             // B_17
      {1, 5, 7, 8, 11, 15, 17},                        // B_18
      {2, 6, 7, 9, 12, 16, 17},                        // B_19
      {3, 4, 7, 10, 13, 14, 17},                       // B_20
      {4, 6, 14, 16, 22},                              // B_21
      {4, 6, 14, 16, 21},                              // B_22
      {4, 5, 14, 15, 24},                              // B_23
      {4, 5, 14, 15, 23},                              // B_24
      {5, 6, 15, 16, 26},                              // B_25
      {5, 6, 15, 16, 25},                              // B_26
  };
  return table;
}

inline Instance make_i2() { return Instance::from_interfering(26, i2_interfering_table(), "I2"); }

}  // namespace detail

inline std::vector<std::string> catalog_names() { return {"I1", "I2", "I3", "I4"}; }

inline bool catalog_has(std::string_view name) {
  return name == "I1" || name == "I2" || name == "I3" || name == "I4";
}

inline CatalogEntry catalog_get(std::string_view name) {
  if (name == "I1") {
    return CatalogEntry{detail::make_i1(),
                        {{"mais", 6, "bound mais"},
                         {"linear_rate_gf2", 6, "code verify-linear on I1-binary"},
                         {"broadcast_rate", 6, "mais lower bound met by I1-binary"}},
                        {},
                        {1, 2, 3, 8, 9, 10}};
  }
  if (name == "I2") {
    // Most constrained columns first: 21..26 are forced onto single basis
    // columns, then the pairs {4,14}, {5,15}, {6,16}, then 8..10 and 18..20,
    // with {7,17} last.
    return CatalogEntry{detail::make_i2(),
                        {{"mais", 6, "bound mais"},
                         {"broadcast_rate", 6, "mais lower bound met by paper-I2 decoders"}},
                        {21, 22, 23, 24, 25, 26, 4, 14, 5, 15, 6, 16, 8, 9, 10, 18, 19, 20, 7, 17},
                        {1, 2, 3, 11, 12, 13}};
  }
  if (name == "I3") {
    Instance inst = compose_noway(detail::make_i1(), detail::make_i2());
    inst.set_name("I3");
    return CatalogEntry{std::move(inst),
                        {{"mais", 12, "bound mais"},
                         {"broadcast_rate", 12, "mais lower bound met by paper-I3"}},
                        {},
                        {1, 2, 3, 8, 9, 10, 11, 12, 13, 21, 22, 23}};
  }
  if (name == "I4") {
    Instance inst = compose_twoway(detail::make_i1(), detail::make_i2());
    inst.set_name("I4");
    return CatalogEntry{std::move(inst),
                        {{"mais", 6, "bound mais"},
                         {"broadcast_rate", 6, "mais lower bound met by paper-I4"}},
                        {},
                        {1, 2, 3, 8, 9, 10}};
  }
  throw UnknownInstance(std::string(name));
}

/// The 6x10 binary encoder for I1:
///   y1 = x1+x4+x6+x7, y2 = x2+x4+x5+x7, y3 = x3+x5+x6+x7, y4 = x8, y5 = x9, y6 = x10.
inline Matrix i1_binary_matrix() {
  return Matrix::from_rows(field_make(2), {
                                              {1, 0, 0, 1, 0, 1, 1, 0, 0, 0},
                                              {0, 1, 0, 1, 1, 0, 1, 0, 0, 0},
                                              {0, 0, 1, 0, 1, 1, 1, 0, 0, 0},
                                              {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
                                              {0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
                                              {0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                                          });
}

}  // namespace indexcode
