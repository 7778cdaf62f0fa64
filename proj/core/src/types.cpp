#include "vital/types.hpp"

#include <cctype>

#include "vital/error.hpp"

namespace vital {

std::string_view to_string(Dataset d) {
  switch (d) {
    case Dataset::icentia11k: return "icentia11k";
    case Dataset::af_ppg_ecg: return "af_ppg_ecg";
    case Dataset::ppg_dalia: return "ppg_dalia";
    case Dataset::wesad: return "wesad";
    case Dataset::synthetic: return "synthetic";
  }
  return "synthetic";
}

std::string_view to_string(Modality m) { return m == Modality::ECG ? "ECG" : "PPG"; }

Dataset parse_dataset(std::string_view s) {
  const std::string n = normalize_text(s);
  if (n == "icentia11k") return Dataset::icentia11k;
  if (n == "af_ppg_ecg" || n == "af-ppg-ecg") return Dataset::af_ppg_ecg;
  if (n == "ppg_dalia" || n == "ppg-dalia") return Dataset::ppg_dalia;
  if (n == "wesad") return Dataset::wesad;
  if (n == "synthetic") return Dataset::synthetic;
  throw ParseError("unknown dataset '" + std::string(s) + "'");
}

Modality parse_modality(std::string_view s) {
  const std::string n = normalize_text(s);
  if (n == "ecg") return Modality::ECG;
  if (n == "ppg") return Modality::PPG;
  throw ParseError("unknown modality '" + std::string(s) + "'");
}

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace vital
