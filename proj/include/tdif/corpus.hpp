#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdif/common.hpp"

namespace tdif {

// One stream item. tokens are derived deterministically from raw_text.
struct Document {
  std::string id;
  std::int64_t epoch_ms = 0;
  std::string raw_text;
  std::vector<std::string> tokens;
  std::int64_t followers = 0;
  std::int64_t retweets = 0;
};

struct Subtopic {
  std::string id;
  double probability = 0.0;
};

// A tracked query. tracking_epoch_ms is the "current time" of tracking.
struct Topic {
  std::string id;
  std::string query;  // as written in the topic file
  std::vector<std::string> query_tokens;
  std::int64_t tracking_epoch_ms = 0;
  std::vector<Subtopic> subtopics;
};

// Collection statistics backing the weighting models. Supports
// incremental extension with later stream windows.
struct CorpusStats {
  std::int64_t doc_count = 0;
  std::int64_t total_tokens = 0;
  std::unordered_map<std::string, std::int64_t> doc_frequency;
  std::unordered_map<std::string, std::int64_t> collection_frequency;

  double avg_doc_len() const {
    return doc_count > 0 ? static_cast<double>(total_tokens) / doc_count : 0.0;
  }
  std::int64_t df(const std::string& term) const {
    auto it = doc_frequency.find(term);
    return it == doc_frequency.end() ? 0 : it->second;
  }
  std::int64_t cf(const std::string& term) const {
    auto it = collection_frequency.find(term);
    return it == collection_frequency.end() ? 0 : it->second;
  }
};

// Lowercases, strips URLs (maximal non-whitespace runs starting with
// http:// or https://), splits on anything outside [a-z0-9#@], and
// porter-stems all-alpha tokens. Stopwords are kept.
std::vector<std::string> tokenize(std::string_view raw_text);

CorpusStats build_stats(std::span<const Document> documents);
void update_stats(CorpusStats& stats, std::span<const Document> documents);

// One JSON object per line: {"id","epoch_ms","text","followers","retweets"}.
// Malformed lines, missing fields and duplicate ids raise DataError with
// the offending line number.
std::vector<Document> ingest_jsonl(const std::string& path);
std::vector<Document> parse_jsonl(std::istream& in);
void write_jsonl(const std::string& path, std::span<const Document> docs);

// Topic file: a JSON object or array of objects
// {"topic_id","query","tracking_epoch_ms","subtopics":[{"id","p"}]};
// p omitted on every subtopic means uniform probabilities.
std::vector<Topic> load_topics(const std::string& path);
void write_topics(const std::string& path, std::span<const Topic> topics);

}  // namespace tdif
