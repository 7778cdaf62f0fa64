#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "vital/error.hpp"
#include "vital/split.hpp"

using namespace vital;

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Split, DevCountRounding) {
  EXPECT_EQ(dev_count(278, 0.30, DevRounding::floor), 83u);
  EXPECT_EQ(dev_count(278, 0.30, DevRounding::ceil), 84u);
  EXPECT_EQ(dev_count(200, 0.30, DevRounding::floor), 60u);  // exact products are not bumped
  EXPECT_EQ(dev_count(200, 0.30, DevRounding::ceil), 60u);
  EXPECT_EQ(dev_count(10, 0.30, DevRounding::ceil), 3u);
  EXPECT_EQ(dev_count(0, 0.30, DevRounding::ceil), 0u);
}

TEST(Split, FixtureGives557And1305) {
  auto items = testing_support::split_fixture();
  ASSERT_EQ(items.size(), 1862u);
  auto s = split_dev_test(items);
  EXPECT_EQ(s.dev.size(), 557u);
  EXPECT_EQ(s.test.size(), 1305u);
}

TEST(Split, PermutationInvariant) {
  auto items = testing_support::split_fixture();
  auto base = split_dev_test(items);
  std::mt19937 rng(9);
  for (int t = 0; t < 3; ++t) {
    std::shuffle(items.begin(), items.end(), rng);
    auto s = split_dev_test(items);
    EXPECT_EQ(s.dev, base.dev);
    EXPECT_EQ(s.test, base.test);
  }
}

TEST(Split, PerStratumCountsMatchCountingOracle) {
  auto items = testing_support::split_fixture();
  std::map<std::pair<std::string, std::string>, std::size_t> sizes;
  std::map<std::string, std::pair<std::string, std::string>> key_of;
  for (const auto& i : items) {
    ++sizes[{i.dataset, i.tier}];
    key_of[i.id] = {i.dataset, i.tier};
  }
  for (auto mode : {DevRounding::floor, DevRounding::ceil}) {
    SplitConfig cfg;
    cfg.rounding = mode;
    auto s = split_dev_test(items, cfg);
    std::map<std::pair<std::string, std::string>, std::size_t> dev;
    for (const auto& id : s.dev) ++dev[key_of.at(id)];
    for (const auto& [k, n] : sizes) {
      const double exact = 0.30 * static_cast<double>(n);
      const auto want = static_cast<std::size_t>(mode == DevRounding::ceil ? std::ceil(exact - 1e-9)
                                                                           : std::floor(exact + 1e-9));
      EXPECT_EQ(dev[k], want) << k.first << "/" << k.second;
    }
    EXPECT_EQ(s.dev.size() + s.test.size(), items.size());
  }
}

TEST(Split, DevIsTheHashPrefixOfEachStratum) {
  std::vector<SplitItem> items;
  for (int i = 0; i < 20; ++i) items.push_back({"id" + std::to_string(i), "wesad", "A"});
  SplitConfig cfg;
  auto s = split_dev_test(items, cfg);
  std::vector<std::pair<std::string, std::string>> ranked;
  for (const auto& i : items) ranked.emplace_back(sha256_hex(cfg.seed + i.id), i.id);
  std::sort(ranked.begin(), ranked.end());
  std::set<std::string> want;
  for (std::size_t k = 0; k < 6; ++k) want.insert(ranked[k].second);
  EXPECT_EQ(std::set<std::string>(s.dev.begin(), s.dev.end()), want);
}

TEST(Split, SeedChangesPartitionAndDuplicatesThrow) {
  auto items = testing_support::split_fixture();
  SplitConfig other;
  other.seed = "another";
  EXPECT_NE(split_dev_test(items).dev, split_dev_test(items, other).dev);
  items.push_back(items.front());
  EXPECT_THROW(split_dev_test(items), IntegrityError);
}
