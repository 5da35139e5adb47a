#pragma once

#include <string>
#include <vector>

#include "tdif/corpus.hpp"

namespace tdif::test {

// Document with explicit tokens (bypasses the tokenizer).
inline Document doc_with_tokens(std::string id, std::vector<std::string> tokens,
                                std::int64_t epoch_ms = 0, std::int64_t followers = 0,
                                std::int64_t retweets = 0) {
  Document d;
  d.id = std::move(id);
  d.tokens = std::move(tokens);
  for (const auto& t : d.tokens) {
    if (!d.raw_text.empty()) d.raw_text.push_back(' ');
    d.raw_text += t;
  }
  d.epoch_ms = epoch_ms;
  d.followers = followers;
  d.retweets = retweets;
  return d;
}

inline Topic topic_with_query(std::string id, std::vector<std::string> query_tokens,
                              std::int64_t tracking_epoch_ms = 0, int num_subtopics = 1) {
  Topic t;
  t.id = std::move(id);
  t.query_tokens = std::move(query_tokens);
  for (const auto& q : t.query_tokens) {
    if (!t.query.empty()) t.query.push_back(' ');
    t.query += q;
  }
  t.tracking_epoch_ms = tracking_epoch_ms;
  for (int i = 0; i < num_subtopics; ++i) {
    t.subtopics.push_back({"s" + std::to_string(i), 1.0 / num_subtopics});
  }
  return t;
}

}  // namespace tdif::test
