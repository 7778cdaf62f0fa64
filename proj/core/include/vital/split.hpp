#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vital {

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

enum class DevRounding { floor, ceil };

struct SplitConfig {
  double dev_frac = 0.30;
  std::string seed = "vitalbench";
  DevRounding rounding = DevRounding::floor;
};

struct SplitItem {
  std::string id;
  std::string dataset;
  std::string tier;
};

struct Split {
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

void to_json(nlohmann::json& j, const Split& s);

/// Number of dev items for a stratum of size n.
std::size_t dev_count(std::size_t n, double dev_frac, DevRounding rounding);

/// Within each (dataset, tier) stratum, orders ids by SHA-256(seed + id)
/// and sends the first dev_count ids to dev. Strata come out in key order,
/// so the result does not depend on input order. Duplicate ids raise
/// IntegrityError.
Split split_dev_test(std::span<const SplitItem> items, const SplitConfig& cfg = {});

}  // namespace vital
