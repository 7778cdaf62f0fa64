#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace vital {

enum class Dataset { icentia11k, af_ppg_ecg, ppg_dalia, wesad, synthetic };
enum class Modality { ECG, PPG };

std::string_view to_string(Dataset d);
std::string_view to_string(Modality m);
Dataset parse_dataset(std::string_view s);
Modality parse_modality(std::string_view s);

/// Lower-case, trim, and collapse inner whitespace.
std::string normalize_text(std::string_view s);

}  // namespace vital

namespace nlohmann {

// std::optional <-> JSON null. Absent numeric fields must serialize as
// explicit nulls, never as 0.
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};

}  // namespace nlohmann

namespace vital {

inline void to_json(nlohmann::json& j, Dataset d) { j = std::string(to_string(d)); }
inline void from_json(const nlohmann::json& j, Dataset& d) { d = parse_dataset(j.get<std::string>()); }
inline void to_json(nlohmann::json& j, Modality m) { j = std::string(to_string(m)); }
inline void from_json(const nlohmann::json& j, Modality& m) { m = parse_modality(j.get<std::string>()); }

}  // namespace vital
