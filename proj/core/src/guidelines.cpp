#include "vital/guidelines.hpp"

#include <set>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital {

GuidelineStore::GuidelineStore(std::vector<GuidelineSection> sections) : sections_(std::move(sections)) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : sections_) {
    if (s.guideline_id.empty() || s.section_id.empty()) throw IntegrityError("guideline section without id");
    if (!seen.emplace(s.guideline_id, s.section_id).second) {
      throw IntegrityError("duplicate guideline section " + s.guideline_id + "/" + s.section_id);
    }
  }
}

GuidelineStore GuidelineStore::builtin() {
  // Synthetic text written for tests. Not medical guidance.
  return GuidelineStore({
      {"syn-af-2024", "episode-under-5min",
       "Irregular-rhythm runs shorter than five minutes on a consumer device are usually not alerted on.",
       "Short runs of irregular rhythm flagged by a wearable are common and often artefactual. For runs under five "
       "minutes, no user-facing alert is recommended; the reading may be logged for later review."},
      {"syn-af-2024", "episode-over-5min",
       "Irregular-rhythm runs longer than five minutes warrant a medium-urgency suggestion to see a clinician.",
       "When an irregular rhythm suggestive of atrial fibrillation persists beyond five minutes, suggest that the "
       "user consider seeing a clinician soon. Do not name a diagnosis and do not mention medication."},
      {"syn-af-2024", "episode-over-24h",
       "Irregular-rhythm runs lasting more than a day warrant prompt clinical review.",
       "Irregular rhythm persisting for more than twenty-four hours should be reviewed promptly by a clinician. "
       "The user should be directed to a healthcare professional."},
      {"syn-hr-2024", "extreme-bradycardia",
       "Resting heart rate below 40 bpm with good signal quality warrants a high-urgency suggestion.",
       "A heart rate persistently below 40 beats per minute, measured on a clean signal, should prompt the user "
       "to see a clinician promptly, particularly if they feel faint or unwell."},
      {"syn-hr-2024", "extreme-tachycardia",
       "Heart rate above 150 bpm at rest warrants a high-urgency suggestion.",
       "A heart rate above 150 beats per minute while the user is at rest should prompt them to see a clinician "
       "promptly. Seek immediate help if accompanied by chest pain or fainting."},
      {"syn-hr-2024", "sustained-tachycardia",
       "Heart rate above 100 bpm for most of a five-minute resting window warrants a medium-urgency suggestion.",
       "When more than 80 percent of the heart-rate samples in a five-minute resting window exceed 100 beats per "
       "minute, suggest that the user rest and consider seeing a clinician soon if it recurs."},
  });
}

GuidelineStore GuidelineStore::load(const std::filesystem::path& path) {
  const nlohmann::json j = read_json_file(path);
  if (!j.is_array()) throw ParseError(path.string() + ": guideline corpus must be a JSON array");
  std::vector<GuidelineSection> sections;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      sections.push_back(j[i].get<GuidelineSection>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": section " + std::to_string(i) + ": " + e.what());
    }
  }
  return GuidelineStore(std::move(sections));
}

nlohmann::json GuidelineStore::to_json() const { return sections_; }

const GuidelineSection* GuidelineStore::find(std::string_view guideline_id, std::string_view section_id) const {
  for (const auto& s : sections_) {
    if (s.guideline_id == guideline_id && s.section_id == section_id) return &s;
  }
  return nullptr;
}

std::string GuidelineStore::summaries_text() const {
  std::string out;
  for (const auto& s : sections_) {
    out += "- [" + s.guideline_id + " / " + s.section_id + "] " + s.summary + "\n";
  }
  return out;
}

}  // namespace vital
