#include "tdif/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "tdif/stem.hpp"

namespace tdif {
namespace {

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '#' || c == '@';
}

bool all_alpha(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool url_starts_at(std::string_view text, std::size_t i) {
  static constexpr std::string_view kHttp = "http://";
  static constexpr std::string_view kHttps = "https://";
  auto matches = [&](std::string_view scheme) {
    if (i + scheme.size() > text.size()) return false;
    for (std::size_t j = 0; j < scheme.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(text[i + j])) != scheme[j]) return false;
    }
    return true;
  };
  return matches(kHttp) || matches(kHttps);
}

std::string strip_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (url_starts_at(text, i)) {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text) {
  std::string text = strip_urls(raw_text);
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(all_alpha(cur) ? porter_stem(cur) : cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (is_token_char(c)) {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

void update_stats(CorpusStats& stats, std::span<const Document> documents) {
  std::unordered_set<std::string> seen;
  for (const Document& doc : documents) {
    ++stats.doc_count;
    stats.total_tokens += static_cast<std::int64_t>(doc.tokens.size());
    seen.clear();
    for (const std::string& term : doc.tokens) {
      ++stats.collection_frequency[term];
      if (seen.insert(term).second) ++stats.doc_frequency[term];
    }
  }
}

CorpusStats build_stats(std::span<const Document> documents) {
  CorpusStats stats;
  update_stats(stats, documents);
  return stats;
}

namespace {

Document document_from_json(const nlohmann::json& obj, std::size_t line_no) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    auto it = obj.find(field);
    if (it == obj.end()) {
      throw DataError("line " + std::to_string(line_no) + ": missing field " + field);
    }
    return *it;
  };
  Document doc;
  doc.id = require("id").get<std::string>();
  doc.epoch_ms = require("epoch_ms").get<std::int64_t>();
  doc.raw_text = require("text").get<std::string>();
  doc.followers = require("followers").get<std::int64_t>();
  doc.retweets = require("retweets").get<std::int64_t>();
  if (doc.epoch_ms < 0) {
    throw DataError("line " + std::to_string(line_no) + ": negative epoch_ms");
  }
  if (doc.followers < 0 || doc.retweets < 0) {
    throw DataError("line " + std::to_string(line_no) + ": negative count field");
  }
  doc.tokens = tokenize(doc.raw_text);
  return doc;
}

}  // namespace

std::vector<Document> parse_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON");
    }
    Document doc;
    try {
      doc = document_from_json(obj, line_no);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(doc.id).second) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate doc_id " + doc.id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ingest_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stream file " + path);
  return parse_jsonl(in);
}

void write_jsonl(const std::string& path, std::span<const Document> docs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write stream file " + path);
  for (const Document& doc : docs) {
    nlohmann::json obj{{"id", doc.id},
                       {"epoch_ms", doc.epoch_ms},
                       {"text", doc.raw_text},
                       {"followers", doc.followers},
                       {"retweets", doc.retweets}};
    out << obj.dump() << '\n';
  }
}

namespace {

Topic topic_from_json(const nlohmann::json& obj) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    auto it = obj.find(field);
    if (it == obj.end()) throw DataError(std::string("topic missing field ") + field);
    return *it;
  };
  Topic topic;
  topic.id = require("topic_id").get<std::string>();
  topic.query = require("query").get<std::string>();
  topic.query_tokens = tokenize(topic.query);
  if (topic.query_tokens.empty()) throw DataError("topic " + topic.id + ": empty query");
  topic.tracking_epoch_ms = require("tracking_epoch_ms").get<std::int64_t>();

  const nlohmann::json& subs = require("subtopics");
  if (!subs.is_array() || subs.empty()) {
    throw DataError("topic " + topic.id + ": subtopics must be a non-empty array");
  }
  bool any_p = false;
  for (const auto& s : subs) {
    Subtopic st;
    st.id = s.at("id").get<std::string>();
    if (s.contains("p")) {
      st.probability = s.at("p").get<double>();
      any_p = true;
    }
    topic.subtopics.push_back(std::move(st));
  }
  if (!any_p) {
    double p = 1.0 / static_cast<double>(topic.subtopics.size());
    for (auto& st : topic.subtopics) st.probability = p;
  } else {
    double sum = 0.0;
    for (const auto& st : topic.subtopics) sum += st.probability;
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DataError("topic " + topic.id + ": subtopic probabilities sum to " +
                      std::to_string(sum));
    }
  }
  return topic;
}

}  // namespace

std::vector<Topic> load_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open topic file " + path);
  nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
  if (parsed.is_discarded()) throw DataError("malformed topic file " + path);

  std::vector<Topic> topics;
  if (parsed.is_array()) {
    for (const auto& obj : parsed) topics.push_back(topic_from_json(obj));
  } else if (parsed.is_object()) {
    topics.push_back(topic_from_json(parsed));
  } else {
    throw DataError("topic file must hold an object or array: " + path);
  }
  std::unordered_set<std::string> ids;
  for (const Topic& t : topics) {
    if (!ids.insert(t.id).second) throw DataError("duplicate topic_id " + t.id);
  }
  return topics;
}

void write_topics(const std::string& path, std::span<const Topic> topics) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Topic& t : topics) {
    nlohmann::json subs = nlohmann::json::array();
    for (const Subtopic& s : t.subtopics) {
      subs.push_back({{"id", s.id}, {"p", s.probability}});
    }
    arr.push_back({{"topic_id", t.id},
                   {"query", t.query},
                   {"tracking_epoch_ms", t.tracking_epoch_ms},
                   {"subtopics", subs}});
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write topic file " + path);
  out << arr.dump(2) << '\n';
}

}  // namespace tdif
