#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

namespace vital {

enum class KnowledgeSource { medlineplus, pubmed };

struct KnowledgeHit {
  std::string title;
  std::string url;
  std::string snippet;
  bool operator==(const KnowledgeHit&) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(KnowledgeHit, title, url, snippet)

class KnowledgeClient {
 public:
  virtual ~KnowledgeClient() = default;
  virtual std::vector<KnowledgeHit> search(KnowledgeSource source, const std::string& query, int max_results) = 0;
};

/// MedlinePlus health-topics search reply (XML) to hits.
std::vector<KnowledgeHit> parse_medlineplus_xml(const std::string& xml, int max_results);
/// PubMed esearch reply (JSON) to hits, one per PMID.
std::vector<KnowledgeHit> parse_pubmed_esearch(const nlohmann::json& reply, int max_results);

/// Canned replies in the live formats, chosen by keyword. Hermetic.
class FixtureKnowledgeClient : public KnowledgeClient {
 public:
  std::vector<KnowledgeHit> search(KnowledgeSource source, const std::string& query, int max_results) override;
};

/// Live MedlinePlus and PubMed web services.
class HttpKnowledgeClient : public KnowledgeClient {
 public:
  explicit HttpKnowledgeClient(std::chrono::seconds timeout = std::chrono::seconds(10));
  std::vector<KnowledgeHit> search(KnowledgeSource source, const std::string& query, int max_results) override;

 private:
  std::chrono::seconds timeout_;
};

}  // namespace vital
