#include "tdif/relfeat.hpp"

#include <algorithm>
#include <cmath>

namespace tdif {
namespace {

// Tweets are short; a linear scan beats building a count map.
int term_frequency(const std::string& term, const Document& doc) {
  int tf = 0;
  for (const auto& t : doc.tokens)
    if (t == term) ++tf;
  return tf;
}

}  // namespace

double tf_idf_score(const Topic& topic, const Document& doc, const CorpusStats& stats) {
  double score = 0.0;
  for (const auto& q : topic.query_tokens) {
    int tf = term_frequency(q, doc);
    if (tf == 0) continue;
    double idf = std::log(static_cast<double>(stats.doc_count + 1) /
                          static_cast<double>(stats.df(q) + 1));
    score += tf * idf;
  }
  return score;
}

double bm25_score(const Topic& topic, const Document& doc, const CorpusStats& stats,
                  double k1, double b) {
  const double avgdl = stats.avg_doc_len();
  const double dl = static_cast<double>(doc.tokens.size());
  double score = 0.0;
  for (const auto& q : topic.query_tokens) {
    int tf = term_frequency(q, doc);
    if (tf == 0) continue;
    double df = static_cast<double>(stats.df(q));
    double idf = std::log((stats.doc_count - df + 0.5) / (df + 0.5) + 1.0);
    double denom = tf + k1 * (1.0 - b + b * dl / avgdl);
    score += idf * tf * (k1 + 1.0) / denom;
  }
  return score;
}

double lm_dirichlet_score(const Topic& topic, const Document& doc, const CorpusStats& stats,
                          double mu) {
  if (stats.total_tokens == 0) throw DataError("empty collection");
  const double dl = static_cast<double>(doc.tokens.size());
  const double total = static_cast<double>(stats.total_tokens);
  double score = 0.0;
  for (const auto& q : topic.query_tokens) {
    double cf = static_cast<double>(stats.cf(q));
    double p_coll = cf > 0 ? cf / total : 1.0 / (2.0 * total);
    int tf = term_frequency(q, doc);
    score += std::log((tf + mu * p_coll) / (dl + mu));
  }
  return score;
}

namespace {

int count_pairs(const std::vector<std::string>& tokens, const std::string& a,
                const std::string& b, int window, bool ordered) {
  int count = 0;
  const int n = static_cast<int>(tokens.size());
  for (int i = 0; i < n; ++i) {
    int hi = std::min(n - 1, ordered ? i + window : i + window - 1);
    for (int j = i + 1; j <= hi; ++j) {
      if (ordered) {
        if (tokens[i] == a && tokens[j] == b) ++count;
      } else {
        if ((tokens[i] == a && tokens[j] == b) || (tokens[i] == b && tokens[j] == a)) ++count;
      }
    }
  }
  return count;
}

double mrf_score(const Topic& topic, const Document& doc, int window, bool ordered) {
  const auto& q = topic.query_tokens;
  if (q.size() < 2) return 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    count += count_pairs(doc.tokens, q[i], q[i + 1], window, ordered);
  }
  return std::log1p(static_cast<double>(count));
}

}  // namespace

double mrf_ordered(const Topic& topic, const Document& doc, int window) {
  return mrf_score(topic, doc, window, true);
}

double mrf_unordered(const Topic& topic, const Document& doc, int window) {
  return mrf_score(topic, doc, window, false);
}

double recency_feature(const Topic& topic, const Document& doc, double lambda_r,
                       bool* clamped) {
  double delta_ms = static_cast<double>(topic.tracking_epoch_ms - doc.epoch_ms);
  if (delta_ms < 0) {
    if (clamped) *clamped = true;
    delta_ms = 0;
  }
  return std::exp(-lambda_r * delta_ms / 3.6e6);
}

double user_rank_feature(const Document& doc) {
  return std::log1p(static_cast<double>(doc.followers));
}

double retweet_feature(const Document& doc) {
  return std::log1p(static_cast<double>(doc.retweets));
}

RelevanceVector raw_relevance_vector(const Topic& topic, const Document& doc,
                                     const CorpusStats& stats, const FeatureParams& params) {
  RelevanceVector v;
  v[kTfIdf] = tf_idf_score(topic, doc, stats);
  v[kBm25] = bm25_score(topic, doc, stats, params.k1, params.b);
  v[kLmDirichlet] = lm_dirichlet_score(topic, doc, stats, params.mu);
  v[kMrfOrdered] = mrf_ordered(topic, doc, params.mrf_ordered_window);
  v[kMrfUnordered] = mrf_unordered(topic, doc, params.mrf_unordered_window);
  v[kRecency] = recency_feature(topic, doc, params.lambda_r);
  v[kUserRank] = user_rank_feature(doc);
  v[kRetweet] = retweet_feature(doc);
  return v;
}

void minmax_normalize(std::vector<RelevanceVector>& vectors) {
  if (vectors.empty()) return;
  for (std::size_t f = 0; f < kNumRelFeatures; ++f) {
    double lo = vectors[0][f];
    double hi = vectors[0][f];
    for (const auto& v : vectors) {
      lo = std::min(lo, v[f]);
      hi = std::max(hi, v[f]);
    }
    for (auto& v : vectors) {
      v[f] = hi > lo ? (v[f] - lo) / (hi - lo) : 0.5;
    }
  }
}

std::vector<RelevanceVector> assemble_relevance_vectors(const Topic& topic,
                                                        std::span<const Document> window_docs,
                                                        const CorpusStats& stats,
                                                        const FeatureParams& params) {
  std::vector<RelevanceVector> vectors;
  vectors.reserve(window_docs.size());
  for (const Document& doc : window_docs) {
    vectors.push_back(raw_relevance_vector(topic, doc, stats, params));
  }
  minmax_normalize(vectors);
  return vectors;
}

}  // namespace tdif
