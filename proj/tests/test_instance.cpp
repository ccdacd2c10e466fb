#include <gtest/gtest.h>

#include <filesystem>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

TEST(Instance, Validation) {
  EXPECT_NO_THROW(Instance::validate(2, {{2}, {1}}));
  EXPECT_THROW(Instance::validate(2, {{1}, {}}), SelfInclusion);
  EXPECT_THROW(Instance::validate(2, {{3}, {}}), IndexOutOfRange);
  EXPECT_THROW(Instance::validate(2, {{2}}), DimensionMismatch);
}

TEST(Instance, InterferingSets) {
  const Instance pair = Instance::validate(2, {{2}, {1}});
  EXPECT_TRUE(pair.interfering(1).empty());
  EXPECT_TRUE(pair.interfering(2).empty());
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_EQ(i1.side_info(1), (UserSet{4, 6, 7}));
  EXPECT_EQ(i1.interfering(1), (UserSet{2, 3, 5, 8, 9, 10}));
}

TEST(Instance, InterferingRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(1 + trial % 12, 0.4, rng);
    EXPECT_EQ(Instance::from_interfering(inst.m(), interfering_sets(inst)), inst);
    for (int i = 1; i <= inst.m(); ++i) {
      EXPECT_EQ(inst.side_mask(i) & inst.interfering_mask(i), 0u);
      EXPECT_EQ(inst.side_mask(i) | inst.interfering_mask(i) | (UserMask{1} << (i - 1)), full_mask(inst.m()));
    }
  }
}

TEST(Instance, Catalog) {
  const Instance i1 = catalog_get("I1").instance;
  EXPECT_EQ(i1.m(), 10);
  EXPECT_EQ(i1.side_info(7), (UserSet{2, 4, 5}));
  EXPECT_TRUE(i1.side_info(8).empty());
  const Instance i2 = catalog_get("I2").instance;
  EXPECT_EQ(i2.m(), 26);
  EXPECT_EQ(i2.interfering(14), (UserSet{4}));
  EXPECT_EQ(catalog_get("I3").instance.m(), 36);
  EXPECT_EQ(catalog_get("I4").instance.m(), 36);
  EXPECT_THROW(catalog_get("I9"), UnknownInstance);
}

TEST(Instance, Composition) {
  const Instance one = Instance::validate(1, {{}});
  const Instance noway = compose_noway(one, one);
  EXPECT_EQ(noway.m(), 2);
  EXPECT_TRUE(noway.side_info(1).empty());
  EXPECT_TRUE(noway.side_info(2).empty());
  const Instance twoway = compose_twoway(one, one);
  EXPECT_EQ(twoway.side_info(1), (UserSet{2}));
  EXPECT_EQ(twoway.side_info(2), (UserSet{1}));

  const Instance i1 = catalog_get("I1").instance;
  const Instance i2 = catalog_get("I2").instance;
  EXPECT_EQ(compose_noway(i1, i2), catalog_get("I3").instance);
  EXPECT_EQ(compose_twoway(i1, i2), catalog_get("I4").instance);
  const Instance i4 = compose_twoway(i1, i2);
  for (int j = 11; j <= 36; ++j) EXPECT_TRUE(i4.knows(1, j));
  EXPECT_FALSE(compose_noway(i1, i2).knows(1, 11));
}

TEST(Instance, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "indexcode_instance_test.json";
  const Instance i2 = catalog_get("I2").instance;
  save_instance_file(i2, path.string());
  EXPECT_EQ(load_instance_file(path.string()), i2);
  std::filesystem::remove(path);
  EXPECT_THROW(load_instance_file((path.string() + ".missing")), Error);
}
