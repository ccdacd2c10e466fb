#include <gtest/gtest.h>

#include <sstream>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

namespace {

GeneralCode xor_pair() {
  GeneralCode c;
  c.name = "butterfly";
  c.m = 2;
  c.r = 1;
  c.encoder = [](std::span<const Symbol> x, std::span<Symbol> z) { z[0] = x[0] ^ x[1]; };
  c.decoders = {[](std::span<const Symbol> z, const SideView& s) { return static_cast<Symbol>(z[0] ^ s(2)); },
                [](std::span<const Symbol> z, const SideView& s) { return static_cast<Symbol>(z[0] ^ s(1)); }};
  return c;
}

std::vector<Symbol> unit(int m, int i) {
  std::vector<Symbol> x(static_cast<std::size_t>(m), 0);
  x[static_cast<std::size_t>(i - 1)] = 1;
  return x;
}

}  // namespace

TEST(Gencode, I2EncoderZeroVector) {
  const GeneralCode c = i2_nonlinear_code();
  EXPECT_EQ(encode(c, std::vector<Symbol>(26, 0)), std::vector<Symbol>(6, 0));
}

TEST(Gencode, I2EncoderQuadraticTerm) {
  std::vector<Symbol> x(26, 0);
  x[3] = 1;
  x[5] = 1;
  const std::vector<Symbol> z = encode(i2_nonlinear_code(), x);
  EXPECT_EQ(z[1], 1);
}

TEST(Gencode, LinearCodeEmbeds) {
  const GeneralCode c = i1_binary_code();
  EXPECT_EQ(c.r, 6);
  EXPECT_EQ(encode(c, unit(10, 1)), (std::vector<Symbol>{1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(encode(c, unit(10, 7)), (std::vector<Symbol>{1, 1, 1, 0, 0, 0}));
}

TEST(Gencode, EncodeRejectsBadInput) {
  const GeneralCode c = i1_binary_code();
  EXPECT_THROW(encode(c, std::vector<Symbol>(9, 0)), AlphabetMismatch);
  std::vector<Symbol> x(10, 0);
  x[0] = 2;
  EXPECT_THROW(encode(c, x), AlphabetMismatch);
}

TEST(Gencode, ButterflyConfusability) {
  const GeneralCode c = xor_pair();
  EXPECT_TRUE(verify_confusability(Instance::validate(2, {{2}, {1}}), c).all_pass());
  const VerificationReport none = verify_confusability(Instance::validate(2, {{}, {}}), c);
  EXPECT_EQ(none.failing_users(), (std::vector<int>{1, 2}));
  for (const auto& u : none.users) {
    ASSERT_EQ(u.witness_a.size(), 2u);
    ASSERT_EQ(u.witness_b.size(), 2u);
    EXPECT_EQ(encode(c, u.witness_a), encode(c, u.witness_b));
    EXPECT_NE(u.witness_a[u.user - 1], u.witness_b[u.user - 1]);
  }
}

TEST(Gencode, ButterflyDecoders) {
  EXPECT_TRUE(verify_decoders(Instance::validate(2, {{2}, {1}}), xor_pair()).all_pass());
  const VerificationReport none = verify_decoders(Instance::validate(2, {{}, {}}), xor_pair());
  EXPECT_EQ(none.failing_users(), (std::vector<int>{1, 2}));
}

TEST(Gencode, LinearAgreesWithConfusability) {
  std::mt19937_64 rng(31);
  int decodable = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int q = trial % 3 == 0 ? 3 : 2;
    const FieldSpec f = field_make(q);
    const Instance inst = random_instance(2 + trial % 6, 0.5, rng);
    const std::size_t rows = 1 + static_cast<std::size_t>(trial % inst.m());
    const LinearCode lc(random_matrix(f, rows, static_cast<std::size_t>(inst.m()), rng), 1, inst.m());
    const LinearReport lin = verify_linear(inst, lc);
    const VerificationReport conf = verify_confusability(inst, general_from_linear(lc, "random"), 1);
    for (int i = 1; i <= inst.m(); ++i) {
      EXPECT_EQ(lin.users[i - 1].pass, conf.users[i - 1].pass) << "trial " << trial << " user " << i;
    }
    if (lin.decodable) {
      ++decodable;
      EXPECT_TRUE(verify_decoders(inst, general_from_linear(lc, "random", &inst)).all_pass());
    }
  }
  EXPECT_GT(decodable, 0);
}

TEST(Gencode, I2DecodersSampled) {
  const Instance i2 = catalog_get("I2").instance;
  DecoderCheckOptions o;
  o.samples = 200000;
  const VerificationReport rep = verify_decoders(i2, i2_nonlinear_code(), o);
  EXPECT_TRUE(rep.sampled);
  EXPECT_EQ(rep.messages_checked, 200000u);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Gencode, I2LiteralUserTenReadsUnknownMessage) {
  const Instance i2 = catalog_get("I2").instance;
  DecoderCheckOptions o;
  o.samples = 20000;
  const VerificationReport rep = verify_decoders(i2, i2_nonlinear_code(true), o);
  EXPECT_EQ(rep.failing_users(), (std::vector<int>{10}));
  EXPECT_NE(rep.users[9].note.find("side information"), std::string::npos);
}

TEST(Gencode, SideViewBlocksUnknownReads) {
  const std::vector<Symbol> x = {1, 1, 1};
  bool violated = false;
  const SideView v(x.data(), 3, mask_of({1, 3}), &violated);
  EXPECT_EQ(v(1), 1);
  EXPECT_FALSE(violated);
  EXPECT_EQ(v(2), 0);
  EXPECT_TRUE(violated);
}

TEST(Gencode, SamplingIsSeeded) {
  std::vector<std::vector<Symbol>> a;
  std::vector<std::vector<Symbol>> b;
  for_each_sample(5, 3, 100, 42, [&](std::span<const Symbol> x) { a.emplace_back(x.begin(), x.end()); });
  for_each_sample(5, 3, 100, 42, [&](std::span<const Symbol> x) { b.emplace_back(x.begin(), x.end()); });
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 100u);
}

TEST(Gencode, Composition) {
  const GeneralCode i3 = builtin_code("paper-I3");
  const GeneralCode i4 = builtin_code("paper-I4");
  EXPECT_EQ(i3.m, 36);
  EXPECT_EQ(i3.rate(), Rate::of(12, 1));
  EXPECT_EQ(i4.rate(), Rate::of(6, 1));
  const GeneralCode i1 = i1_binary_code();
  const GeneralCode i2 = i2_nonlinear_code();
  for_each_sample(36, 2, 2000, 3, [&](std::span<const Symbol> x) {
    const auto z1 = encode(i1, x.subspan(0, 10));
    const auto z2 = encode(i2, x.subspan(10, 26));
    const auto z3 = encode(i3, x);
    const auto z4 = encode(i4, x);
    for (int k = 0; k < 6; ++k) {
      EXPECT_EQ(z3[k], z1[k]);
      EXPECT_EQ(z3[6 + k], z2[k]);
      EXPECT_EQ(z4[k], z1[k] ^ z2[k]);
    }
  });
  DecoderCheckOptions o;
  o.samples = 50000;
  EXPECT_TRUE(verify_decoders(catalog_get("I3").instance, i3, o).all_pass());
  EXPECT_TRUE(verify_decoders(catalog_get("I4").instance, i4, o).all_pass());
  EXPECT_FALSE(verify_decoders(catalog_get("I3").instance, i4, o).all_pass());
}

TEST(Gencode, TwowayNeedsEqualLengths) {
  GeneralCode short_code = xor_pair();
  EXPECT_THROW(compose_codes(i1_binary_code(), short_code, ComposeMode::twoway), LengthMismatch);
  EXPECT_EQ(compose_codes(i1_binary_code(), short_code, ComposeMode::noway).r, 7);
}

TEST(Gencode, TruthTableRoundTrip) {
  const GeneralCode lin = i1_binary_code();
  std::stringstream ss;
  write_truth_table(ss, lin);
  const GeneralCode table = parse_truth_table(ss, "table");
  EXPECT_EQ(table.r, 6);
  for_each_sample(10, 2, 200, 9, [&](std::span<const Symbol> x) { EXPECT_EQ(encode(table, x), encode(lin, x)); });
  EXPECT_TRUE(verify_confusability(catalog_get("I1").instance, table).all_pass());
}

TEST(Gencode, UnknownBuiltin) { EXPECT_THROW(builtin_code("nope"), UnknownInstance); }
