#include "vital/split.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "vital/error.hpp"

namespace vital {

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

void to_json(nlohmann::json& j, const Split& s) {
  j = {{"dev", s.dev}, {"test", s.test}, {"n_dev", s.dev.size()}, {"n_test", s.test.size()}};
}

std::size_t dev_count(std::size_t n, double dev_frac, DevRounding rounding) {
  if (!(dev_frac >= 0.0 && dev_frac <= 1.0)) throw ConfigError("dev_frac must lie in [0, 1]");
  const double x = dev_frac * static_cast<double>(n);
  // Snap values within rounding noise of an integer (0.3 * 10 = 3.0000000000000004).
  const double near = std::round(x);
  if (std::abs(x - near) < 1e-9) return static_cast<std::size_t>(near);
  return static_cast<std::size_t>(rounding == DevRounding::floor ? std::floor(x) : std::ceil(x));
}

Split split_dev_test(std::span<const SplitItem> items, const SplitConfig& cfg) {
  std::set<std::string> ids;
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, std::string>>> strata;
  for (const auto& it : items) {
    if (it.id.empty()) throw IntegrityError("split item without id");
    if (!ids.insert(it.id).second) throw IntegrityError("duplicate id: " + it.id);
    strata[{it.dataset, it.tier}].emplace_back(sha256_hex(cfg.seed + it.id), it.id);
  }
  Split out;
  for (auto& [key, members] : strata) {
    std::sort(members.begin(), members.end());
    const std::size_t k = dev_count(members.size(), cfg.dev_frac, cfg.rounding);
    for (std::size_t i = 0; i < members.size(); ++i) (i < k ? out.dev : out.test).push_back(members[i].second);
  }
  return out;
}

}  // namespace vital
