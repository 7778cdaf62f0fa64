#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vital/state.hpp"

namespace vital {

struct GuidelineSection {
  std::string guideline_id;
  std::string section_id;
  std::string summary;
  std::string full_text;
  bool operator==(const GuidelineSection&) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GuidelineSection, guideline_id, section_id, summary, full_text)

/// Local guideline corpus read by the judge. The built-in corpus holds two
/// synthetic, non-clinical guidelines for hermetic runs.
class GuidelineStore {
 public:
  GuidelineStore() = default;
  explicit GuidelineStore(std::vector<GuidelineSection> sections);

  static GuidelineStore builtin();
  /// JSON array of sections. Throws ParseError / IntegrityError.
  static GuidelineStore load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<GuidelineSection>& sections() const { return sections_; }
  const GuidelineSection* find(std::string_view guideline_id, std::string_view section_id) const;
  bool contains(const GuidelineRef& ref) const { return find(ref.guideline_id, ref.section_id) != nullptr; }

  /// One bullet per section: "[guideline_id / section_id] summary".
  std::string summaries_text() const;

 private:
  std::vector<GuidelineSection> sections_;
};

}  // namespace vital
