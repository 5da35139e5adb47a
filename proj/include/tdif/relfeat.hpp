#pragma once

#include <array>
#include <span>
#include <vector>

#include "tdif/corpus.hpp"

namespace tdif {

inline constexpr int kFeatureSchemaVersion = 1;

// Fixed schema of the per-document relevance features.
enum RelFeature : std::size_t {
  kTfIdf = 0,
  kBm25,
  kLmDirichlet,
  kMrfOrdered,
  kMrfUnordered,
  kRecency,
  kUserRank,
  kRetweet,
  kNumRelFeatures,
};

struct RelevanceVector {
  std::array<double, kNumRelFeatures> values{};
  int schema_version = kFeatureSchemaVersion;

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Knobs for feature computation; read from a flat key=value config file.
struct FeatureParams {
  double k1 = 1.2;
  double b = 0.75;
  double mu = 2500.0;
  double lambda_r = 0.02;  // recency decay, per hour
  int mrf_ordered_window = 1;
  int mrf_unordered_window = 8;
  int plsa_topics = 5;
  int plsa_max_iters = 100;
  double plsa_tol = 1e-4;
  double kl_eps = 1e-6;
};

// Sum over query terms of tf * ln((N+1)/(df+1)).
double tf_idf_score(const Topic& topic, const Document& doc, const CorpusStats& stats);

double bm25_score(const Topic& topic, const Document& doc, const CorpusStats& stats,
                  double k1 = 1.2, double b = 0.75);

// Query-likelihood with Dirichlet prior; unseen terms get a floored
// collection probability of 1/(2*total_tokens).
double lm_dirichlet_score(const Topic& topic, const Document& doc, const CorpusStats& stats,
                          double mu = 2500.0);

// ln(1 + count) of consecutive query-term bigrams found in the document,
// in order within `window` / in any order within a span of `window`.
double mrf_ordered(const Topic& topic, const Document& doc, int window = 1);
double mrf_unordered(const Topic& topic, const Document& doc, int window = 8);

// exp(-lambda_r * hours before tracking time); documents newer than the
// tracking time are clamped to 1 and flagged via `clamped`.
double recency_feature(const Topic& topic, const Document& doc, double lambda_r = 0.02,
                       bool* clamped = nullptr);

double user_rank_feature(const Document& doc);
double retweet_feature(const Document& doc);

// Raw 8-feature vector in schema order (no normalization).
RelevanceVector raw_relevance_vector(const Topic& topic, const Document& doc,
                                     const CorpusStats& stats, const FeatureParams& params);

// Assembles the window's vectors and min-max normalizes each component
// across the window; a constant component maps to 0.5.
std::vector<RelevanceVector> assemble_relevance_vectors(const Topic& topic,
                                                        std::span<const Document> window_docs,
                                                        const CorpusStats& stats,
                                                        const FeatureParams& params);

void minmax_normalize(std::vector<RelevanceVector>& vectors);

}  // namespace tdif
