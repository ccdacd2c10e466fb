#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "indexcode/catalog.hpp"
#include "indexcode/gencode.hpp"
#include "indexcode/lincode.hpp"

namespace indexcode {

namespace detail {

// Quadratic binary encoder for I2:
//   z1 = x1+x4+x6+x7+x10+x21
//   z2 = x11+x14+x16+x17+x20+x22 + x4x6+x4x7+x6x7
//   z3 = x2+x4+x5+x7+x8+x23
//   z4 = x12+x14+x15+x17+x18+x24 + x4x5+x4x7+x5x7
//   z5 = x3+x5+x6+x7+x9+x25
//   z6 = x13+x15+x16+x17+x19+x26 + x5x6+x5x7+x6x7
inline void i2_encode(std::span<const Symbol> xs, std::span<Symbol> z) {
  auto x = [&](int j) -> Symbol { return xs[static_cast<std::size_t>(j - 1)]; };
  const Symbol a = x(4), b = x(5), c = x(6), d = x(7);
  z[0] = x(1) ^ a ^ c ^ d ^ x(10) ^ x(21);
  z[1] = x(11) ^ x(14) ^ x(16) ^ x(17) ^ x(20) ^ x(22) ^ (a & c) ^ (a & d) ^ (c & d);
  z[2] = x(2) ^ a ^ b ^ d ^ x(8) ^ x(23);
  z[3] = x(12) ^ x(14) ^ x(15) ^ x(17) ^ x(18) ^ x(24) ^ (a & b) ^ (a & d) ^ (b & d);
  z[4] = x(3) ^ b ^ c ^ d ^ x(9) ^ x(25);
  z[5] = x(13) ^ x(15) ^ x(16) ^ x(17) ^ x(19) ^ x(26) ^ (b & c) ^ (b & d) ^ (c & d);
}

using Z = std::span<const Symbol>;
using X = const SideView&;

// Single-message recoveries straight from one codeword symbol, given
// everything else in that symbol is known.
inline Symbol x4_from_z1(Z z, X x) { return z[0] ^ x(1) ^ x(6) ^ x(7) ^ x(10) ^ x(21); }
inline Symbol x6_from_z1(Z z, X x) { return z[0] ^ x(1) ^ x(4) ^ x(7) ^ x(10) ^ x(21); }
inline Symbol x7_from_z1(Z z, X x) { return z[0] ^ x(1) ^ x(4) ^ x(6) ^ x(10) ^ x(21); }
inline Symbol x4_from_z3(Z z, X x) { return z[2] ^ x(2) ^ x(5) ^ x(7) ^ x(8) ^ x(23); }
inline Symbol x5_from_z3(Z z, X x) { return z[2] ^ x(2) ^ x(4) ^ x(7) ^ x(8) ^ x(23); }
inline Symbol x5_from_z5(Z z, X x) { return z[4] ^ x(3) ^ x(6) ^ x(7) ^ x(9) ^ x(25); }
inline Symbol x6_from_z5(Z z, X x) { return z[4] ^ x(3) ^ x(5) ^ x(7) ^ x(9) ^ x(25); }

inline std::vector<Decoder> i2_decoders(bool literal_u10) {
  std::vector<Decoder> d(26);
  d[0] = [](Z z, X x) -> Symbol { return z[0] ^ x(4) ^ x(6) ^ x(7) ^ x(10) ^ x(21); };
  d[1] = [](Z z, X x) -> Symbol { return z[2] ^ x(4) ^ x(5) ^ x(7) ^ x(8) ^ x(23); };
  d[2] = [](Z z, X x) -> Symbol { return z[4] ^ x(5) ^ x(6) ^ x(7) ^ x(9) ^ x(25); };

  // Users 4..6 know none of x4, x5, x6. Pairwise sums come from z1, z3, z5;
  // z2+z4+z6 exposes s = x4x5+x4x6+x5x6, and (x4+x6)(x4+x5) = x4 + s.
  auto pair_products = [](Z z, X x) {
    const Symbol s = z[1] ^ z[3] ^ z[5] ^ x(11) ^ x(12) ^ x(13) ^ x(17) ^ x(18) ^ x(19) ^ x(20) ^ x(22) ^ x(24) ^ x(26);
    const Symbol s46 = z[0] ^ x(1) ^ x(7) ^ x(10) ^ x(21);
    const Symbol s45 = z[2] ^ x(2) ^ x(7) ^ x(8) ^ x(23);
    const Symbol s56 = z[4] ^ x(3) ^ x(7) ^ x(9) ^ x(25);
    return std::array<Symbol, 4>{s, s46, s45, s56};
  };
  d[3] = [pair_products](Z z, X x) -> Symbol {
    const auto p = pair_products(z, x);
    return (p[1] & p[2]) ^ p[0];
  };
  d[4] = [pair_products](Z z, X x) -> Symbol {
    const auto p = pair_products(z, x);
    return (p[2] & p[3]) ^ p[0];
  };
  d[5] = [pair_products](Z z, X x) -> Symbol {
    const auto p = pair_products(z, x);
    return (p[1] & p[3]) ^ p[0];
  };

  d[6] = [](Z z, X x) -> Symbol { return x7_from_z1(z, x); };
  d[7] = [](Z z, X x) -> Symbol {
    const Symbol s57 = z[4] ^ x(3) ^ x(6) ^ x(9) ^ x(25);
    return z[2] ^ x(2) ^ x(4) ^ x(23) ^ s57;
  };
  d[8] = [](Z z, X x) -> Symbol {
    const Symbol s67 = z[0] ^ x(1) ^ x(4) ^ x(10) ^ x(21);
    return z[4] ^ x(3) ^ x(5) ^ x(25) ^ s67;
  };
  if (literal_u10) {
    // Recovers x4+x5 from z3, which needs x7; user 10 does not know x7.
    d[9] = [](Z z, X x) -> Symbol {
      const Symbol s45 = z[2] ^ x(2) ^ x(7) ^ x(8) ^ x(23);
      const Symbol a = s45 ^ x(5);
      return z[0] ^ x(1) ^ a ^ x(6) ^ x(7) ^ x(21);
    };
  } else {
    d[9] = [](Z z, X x) -> Symbol {
      const Symbol s47 = z[2] ^ x(2) ^ x(5) ^ x(8) ^ x(23);
      return z[0] ^ x(1) ^ x(6) ^ x(21) ^ s47;
    };
  }

  d[10] = [](Z z, X x) -> Symbol {
    return z[1] ^ x(14) ^ x(16) ^ x(17) ^ x(20) ^ x(22) ^ (x(4) & x(6)) ^ (x(4) & x(7)) ^ (x(6) & x(7));
  };
  d[11] = [](Z z, X x) -> Symbol {
    return z[3] ^ x(14) ^ x(15) ^ x(17) ^ x(18) ^ x(24) ^ (x(4) & x(5)) ^ (x(4) & x(7)) ^ (x(5) & x(7));
  };
  d[12] = [](Z z, X x) -> Symbol {
    return z[5] ^ x(15) ^ x(16) ^ x(17) ^ x(19) ^ x(26) ^ (x(5) & x(6)) ^ (x(5) & x(7)) ^ (x(6) & x(7));
  };
  d[13] = [](Z z, X x) -> Symbol {
    const Symbol a = x4_from_z1(z, x);
    return z[1] ^ x(11) ^ x(16) ^ x(17) ^ x(20) ^ x(22) ^ (a & x(6)) ^ (a & x(7)) ^ (x(6) & x(7));
  };
  d[14] = [](Z z, X x) -> Symbol {
    const Symbol b = x5_from_z3(z, x);
    return z[3] ^ x(12) ^ x(14) ^ x(17) ^ x(18) ^ x(24) ^ (x(4) & b) ^ (x(4) & x(7)) ^ (b & x(7));
  };
  d[15] = [](Z z, X x) -> Symbol {
    const Symbol c = x6_from_z5(z, x);
    return z[5] ^ x(13) ^ x(15) ^ x(17) ^ x(19) ^ x(26) ^ (x(5) & c) ^ (x(5) & x(7)) ^ (c & x(7));
  };
  d[16] = [](Z z, X x) -> Symbol {
    const Symbol d7 = x7_from_z1(z, x);
    return z[1] ^ x(11) ^ x(14) ^ x(16) ^ x(20) ^ x(22) ^ (x(4) & x(6)) ^ (x(4) & d7) ^ (x(6) & d7);
  };
  // z4+z6 leaves x18 plus (x4+x6)(x5+x7).
  d[17] = [](Z z, X x) -> Symbol {
    const Symbol s57 = z[4] ^ x(3) ^ x(6) ^ x(9) ^ x(25);
    return z[3] ^ z[5] ^ x(12) ^ x(13) ^ x(14) ^ x(16) ^ x(19) ^ x(24) ^ x(26) ^ ((x(4) ^ x(6)) & s57);
  };
  // z2+z6 leaves x19 plus (x4+x5)(x6+x7).
  d[18] = [](Z z, X x) -> Symbol {
    const Symbol s67 = z[0] ^ x(1) ^ x(4) ^ x(10) ^ x(21);
    return z[1] ^ z[5] ^ x(11) ^ x(13) ^ x(14) ^ x(15) ^ x(20) ^ x(22) ^ x(26) ^ ((x(4) ^ x(5)) & s67);
  };
  // z2+z4 leaves x20 plus (x5+x6)(x4+x7).
  d[19] = [](Z z, X x) -> Symbol {
    const Symbol s47 = z[2] ^ x(2) ^ x(5) ^ x(8) ^ x(23);
    return z[1] ^ z[3] ^ x(11) ^ x(12) ^ x(15) ^ x(16) ^ x(18) ^ x(22) ^ x(24) ^ ((x(5) ^ x(6)) & s47);
  };

  d[20] = [](Z z, X x) -> Symbol {
    return z[0] ^ x(1) ^ x4_from_z3(z, x) ^ x6_from_z5(z, x) ^ x(7) ^ x(10);
  };
  d[21] = [](Z z, X x) -> Symbol {
    const Symbol a = x4_from_z3(z, x);
    const Symbol c = x6_from_z5(z, x);
    const Symbol x14 = z[3] ^ x(12) ^ x(15) ^ x(17) ^ x(18) ^ x(24) ^ (a & x(5)) ^ (a & x(7)) ^ (x(5) & x(7));
    const Symbol x16 = z[5] ^ x(13) ^ x(15) ^ x(17) ^ x(19) ^ x(26) ^ (x(5) & c) ^ (x(5) & x(7)) ^ (c & x(7));
    return z[1] ^ x(11) ^ x14 ^ x16 ^ x(17) ^ x(20) ^ (a & c) ^ (a & x(7)) ^ (c & x(7));
  };
  d[22] = [](Z z, X x) -> Symbol {
    return z[2] ^ x(2) ^ x4_from_z1(z, x) ^ x5_from_z5(z, x) ^ x(7) ^ x(8);
  };
  d[23] = [](Z z, X x) -> Symbol {
    const Symbol a = x4_from_z1(z, x);
    const Symbol b = x5_from_z5(z, x);
    const Symbol x14 = z[1] ^ x(11) ^ x(16) ^ x(17) ^ x(20) ^ x(22) ^ (a & x(6)) ^ (a & x(7)) ^ (x(6) & x(7));
    const Symbol x15 = z[5] ^ x(13) ^ x(16) ^ x(17) ^ x(19) ^ x(26) ^ (b & x(6)) ^ (b & x(7)) ^ (x(6) & x(7));
    return z[3] ^ x(12) ^ x14 ^ x15 ^ x(17) ^ x(18) ^ (a & b) ^ (a & x(7)) ^ (b & x(7));
  };
  d[24] = [](Z z, X x) -> Symbol {
    return z[4] ^ x(3) ^ x5_from_z3(z, x) ^ x6_from_z1(z, x) ^ x(7) ^ x(9);
  };
  d[25] = [](Z z, X x) -> Symbol {
    const Symbol b = x5_from_z3(z, x);
    const Symbol c = x6_from_z1(z, x);
    const Symbol x15 = z[3] ^ x(12) ^ x(14) ^ x(17) ^ x(18) ^ x(24) ^ (x(4) & b) ^ (x(4) & x(7)) ^ (b & x(7));
    const Symbol x16 = z[1] ^ x(11) ^ x(14) ^ x(17) ^ x(20) ^ x(22) ^ (x(4) & c) ^ (x(4) & x(7)) ^ (c & x(7));
    return z[5] ^ x(13) ^ x15 ^ x16 ^ x(17) ^ x(19) ^ (b & c) ^ (b & x(7)) ^ (c & x(7));
  };
  return d;
}

}  // namespace detail

/// Rate-6 nonlinear binary code for I2 with a decoder per user.
/// `literal_u10` swaps in a user-10 decoder that reads x7, which user 10 does
/// not have; verification must reject it.
inline GeneralCode i2_nonlinear_code(bool literal_u10 = false) {
  GeneralCode c;
  c.name = literal_u10 ? "paper-I2-literal" : "paper-I2";
  c.m = 26;
  c.r = 6;
  c.alphabet = field_make(2);
  c.encoder = detail::i2_encode;
  c.decoders = detail::i2_decoders(literal_u10);
  return c;
}

inline GeneralCode i1_binary_code() {
  const Instance i1 = catalog_get("I1").instance;
  return general_from_linear(LinearCode(i1_binary_matrix(), 1, 10), "I1-binary", &i1);
}

inline std::vector<std::string> builtin_code_names() {
  return {"I1-binary", "paper-I2", "paper-I2-literal", "paper-I3", "paper-I4"};
}

/// Builtin codes by name. paper-I3 / paper-I4 are the I1-binary and paper-I2
/// codes joined blockwise (concatenated) and symbol-wise (XOR).
inline GeneralCode builtin_code(std::string_view name) {
  if (name == "I1-binary") return i1_binary_code();
  if (name == "paper-I2") return i2_nonlinear_code(false);
  if (name == "paper-I2-literal") return i2_nonlinear_code(true);
  if (name == "paper-I3") {
    GeneralCode c = compose_codes(i1_binary_code(), i2_nonlinear_code(), ComposeMode::noway);
    c.name = "paper-I3";
    return c;
  }
  if (name == "paper-I4") {
    GeneralCode c = compose_codes(i1_binary_code(), i2_nonlinear_code(), ComposeMode::twoway);
    c.name = "paper-I4";
    return c;
  }
  throw UnknownInstance("no builtin code named '" + std::string(name) + "'");
}

inline bool is_builtin_code(std::string_view name) {
  for (const auto& n : builtin_code_names()) {
    if (n == name) return true;
  }
  return false;
}

}  // namespace indexcode
