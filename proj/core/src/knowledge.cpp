#include "vital/knowledge.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <regex>

#include "httplib.h"
#include "vital/error.hpp"
#include "vital/types.hpp"

namespace vital {

namespace {

std::string strip_tags(const std::string& s) {
  static const std::regex tag("<[^>]*>");
  std::string out = std::regex_replace(s, tag, "");
  static const std::array<std::pair<const char*, const char*>, 5> entities{
      {{"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&amp;", "&"}}};
  for (const auto& [from, to] : entities) {
    for (auto pos = out.find(from); pos != std::string::npos; pos = out.find(from, pos + 1)) {
      out.replace(pos, std::strlen(from), to);
    }
  }
  return out;
}

std::string url_encode(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

constexpr const char* kMedlineAf = R"(<?xml version="1.0" encoding="UTF-8"?>
<nlmSearchResult>
<term>atrial fibrillation</term>
<count>1</count>
<list num="1" start="0" per="10">
<document rank="0" url="https://medlineplus.gov/atrialfibrillation.html">
<content name="title">&lt;span class="qt0"&gt;Atrial Fibrillation&lt;/span&gt;</content>
<content name="FullSummary">&lt;p&gt;Atrial fibrillation is a common type of irregular heartbeat.&lt;/p&gt;</content>
</document>
</list>
</nlmSearchResult>)";

constexpr const char* kMedlineHr = R"(<?xml version="1.0" encoding="UTF-8"?>
<nlmSearchResult>
<term>heart rate</term>
<count>2</count>
<list num="2" start="0" per="10">
<document rank="0" url="https://medlineplus.gov/arrhythmia.html">
<content name="title">Arrhythmia</content>
<content name="FullSummary">&lt;p&gt;An arrhythmia is a problem with the rate or rhythm of your heartbeat.&lt;/p&gt;</content>
</document>
<document rank="1" url="https://medlineplus.gov/ency/article/003399.htm">
<content name="title">Pulse</content>
<content name="FullSummary">&lt;p&gt;The pulse is the number of heartbeats per minute.&lt;/p&gt;</content>
</document>
</list>
</nlmSearchResult>)";

constexpr const char* kMedlineEmpty = R"(<?xml version="1.0" encoding="UTF-8"?>
<nlmSearchResult><count>0</count><list num="0" start="0" per="10"></list></nlmSearchResult>)";

constexpr const char* kPubmedAf =
    R"({"header":{"type":"esearch","version":"0.3"},"esearchresult":{"count":"3","retmax":"3","retstart":"0","idlist":["31000001","31000002","31000003"],"querytranslation":"atrial fibrillation"}})";
constexpr const char* kPubmedHrv =
    R"({"header":{"type":"esearch","version":"0.3"},"esearchresult":{"count":"2","retmax":"2","retstart":"0","idlist":["32000001","32000002"],"querytranslation":"heart rate variability"}})";
constexpr const char* kPubmedEmpty =
    R"({"header":{"type":"esearch","version":"0.3"},"esearchresult":{"count":"0","retmax":"0","retstart":"0","idlist":[]}})";

bool mentions_af(const std::string& q) {
  return q.find("fibrillation") != std::string::npos || q.find("af") == 0 || q.find(" af") != std::string::npos ||
         q.find("irregular") != std::string::npos;
}

bool mentions_hr(const std::string& q) {
  return q.find("heart") != std::string::npos || q.find("pulse") != std::string::npos ||
         q.find("tachy") != std::string::npos || q.find("brady") != std::string::npos ||
         q.find("hrv") != std::string::npos;
}

}  // namespace

std::vector<KnowledgeHit> parse_medlineplus_xml(const std::string& xml, int max_results) {
  static const std::regex doc(R"re(<document[^>]*\burl="([^"]*)"[^>]*>([\s\S]*?)</document>)re");
  static const std::regex title(R"re(<content name="title">([\s\S]*?)</content>)re");
  static const std::regex summary(R"re(<content name="FullSummary">([\s\S]*?)</content>)re");
  std::vector<KnowledgeHit> hits;
  for (auto it = std::sregex_iterator(xml.begin(), xml.end(), doc); it != std::sregex_iterator(); ++it) {
    if (static_cast<int>(hits.size()) >= max_results) break;
    const std::string body = (*it)[2].str();
    KnowledgeHit h;
    h.url = (*it)[1].str();
    std::smatch m;
    if (std::regex_search(body, m, title)) h.title = strip_tags(strip_tags(m[1].str()));
    if (std::regex_search(body, m, summary)) h.snippet = strip_tags(strip_tags(m[1].str()));
    hits.push_back(std::move(h));
  }
  return hits;
}

std::vector<KnowledgeHit> parse_pubmed_esearch(const nlohmann::json& reply, int max_results) {
  std::vector<KnowledgeHit> hits;
  const auto& ids = reply.at("esearchresult").at("idlist");
  for (const auto& id : ids) {
    if (static_cast<int>(hits.size()) >= max_results) break;
    const std::string pmid = id.get<std::string>();
    hits.push_back({"PMID " + pmid, "https://pubmed.ncbi.nlm.nih.gov/" + pmid + "/", ""});
  }
  return hits;
}

std::vector<KnowledgeHit> FixtureKnowledgeClient::search(KnowledgeSource source, const std::string& query,
                                                         int max_results) {
  const std::string q = normalize_text(query);
  if (source == KnowledgeSource::medlineplus) {
    const char* xml = mentions_af(q) ? kMedlineAf : mentions_hr(q) ? kMedlineHr : kMedlineEmpty;
    return parse_medlineplus_xml(xml, max_results);
  }
  const char* js = mentions_af(q) ? kPubmedAf : mentions_hr(q) ? kPubmedHrv : kPubmedEmpty;
  return parse_pubmed_esearch(nlohmann::json::parse(js), max_results);
}

HttpKnowledgeClient::HttpKnowledgeClient(std::chrono::seconds timeout) : timeout_(timeout) {}

std::vector<KnowledgeHit> HttpKnowledgeClient::search(KnowledgeSource source, const std::string& query,
                                                      int max_results) {
  const bool medline = source == KnowledgeSource::medlineplus;
  httplib::Client cli(medline ? "https://wsearch.nlm.nih.gov" : "https://eutils.ncbi.nlm.nih.gov");
  cli.set_connection_timeout(timeout_.count(), 0);
  cli.set_read_timeout(timeout_.count(), 0);
  const std::string path =
      medline ? "/ws/query?db=healthTopics&retmax=" + std::to_string(max_results) + "&term=" + url_encode(query)
              : "/entrez/eutils/esearch.fcgi?db=pubmed&retmode=json&retmax=" + std::to_string(max_results) +
                    "&term=" + url_encode(query);
  auto res = cli.Get(path);
  if (!res) throw BackendError("knowledge service unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendError("knowledge service returned HTTP " + std::to_string(res->status));
  if (medline) return parse_medlineplus_xml(res->body, max_results);
  try {
    return parse_pubmed_esearch(nlohmann::json::parse(res->body), max_results);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("malformed PubMed reply: ") + e.what());
  }
}

}  // namespace vital
