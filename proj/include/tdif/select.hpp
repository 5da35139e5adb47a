#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdif/features.hpp"

namespace tdif {

// Learned weights of the linear utility: relevance part over the 8
// relevance features, diversity part over the 3 aggregated diversity
// features.
struct WeightVector {
  std::array<double, kNumRelFeatures> omega_r{};
  std::array<double, kNumDivFeatures> omega_d{};
  int schema_version = kFeatureSchemaVersion;
};

struct ScoredItem {
  std::string doc_id;
  std::int64_t epoch_ms = 0;
  double utility_at_selection = 0.0;
  int window_index = 0;
};

// The maintained result set S_{K,t}; items are kept in chronological
// display order (non-decreasing epoch_ms, then doc_id).
struct ResultSet {
  std::vector<ScoredItem> items;
};

struct CandidateWindow {
  int window_index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;  // half-open [start_ms, end_ms)
  std::vector<Document> documents;
};

enum class Strategy { kDp, kTopRel, kAllBatch };

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

struct EvalCounter {
  std::uint64_t utility_evals = 0;
};

// f_S(x_i, R_i) = omega_r . x + omega_d . h_S(R_i); an empty relation set
// means the candidate is scored by relevance alone. The aggregated KL
// component passes through `scale` before entering the dot product.
double utility_score(const RelevanceVector& x, std::span<const DiversityVector> relations,
                     const WeightVector& weights, const KlScale& scale = {},
                     EvalCounter* counter = nullptr, Aggregate mode = Aggregate::kMin);

struct GreedyPick {
  std::size_t index = 0;  // into the FeatureBundle
  double utility = 0.0;
};

// Sequential argmax selection of `m` pool documents given the documents
// already selected. Ties break toward newer epoch_ms, then smaller
// doc_id. Each greedy step evaluates every remaining candidate once.
std::vector<GreedyPick> greedy_select(const FeatureBundle& features,
                                      std::span<const std::size_t> pool,
                                      std::span<const std::size_t> selected,
                                      const WeightVector& weights, std::size_t m,
                                      EvalCounter* counter = nullptr);

// Shared inputs of one strategy step.
struct ScoringContext {
  const Topic& topic;
  const CorpusStats& stats;
  const FeatureParams& params;
  const WeightVector& weights;
  std::uint64_t seed = 42;
  EvalCounter* counter = nullptr;
};

// Algorithm step of the dynamic preservation scheme: keep the top-(K-m)
// previous items by utility_at_selection, greedily admit m new ones
// relative to the kept set, display chronologically.
ResultSet dp_window_step(const ScoringContext& ctx, const ResultSet& previous,
                         std::span<const Document> previous_docs, const CandidateWindow& window,
                         int k, int m);

// Relevance-only per-window top-K baseline (no carry-over, no diversity).
ResultSet toprel_window_step(const ScoringContext& ctx, const CandidateWindow& window, int k);

// Greedy re-ranking of everything seen so far, from scratch.
ResultSet allbatch_step(const ScoringContext& ctx, std::span<const Document> all_docs, int k,
                        int window_index);

struct WindowResult {
  ResultSet result;
  int window_index = 0;
  std::int64_t window_start_ms = 0;
  std::int64_t window_end_ms = 0;
  std::size_t window_doc_count = 0;
  std::uint64_t utility_evals = 0;
  double wall_ms = 0.0;
};

struct StreamRunConfig {
  Strategy strategy = Strategy::kDp;
  int k = 20;
  int m = 10;
  std::int64_t window_length_ms = 48ll * 3600 * 1000;
  std::uint64_t seed = 42;
  FeatureParams features;
};

// Partitions the stream into consecutive half-open windows anchored at
// the first timestamp and applies the strategy step per window. Unsorted
// input is sorted internally (stable).
std::vector<WindowResult> run_stream(const Topic& topic, std::vector<Document> stream,
                                     const StreamRunConfig& config, const WeightVector& weights);

// Window boundary helper shared with evaluation: index of the window
// containing `epoch_ms` for a stream anchored at `anchor_ms`.
inline int window_index_of(std::int64_t epoch_ms, std::int64_t anchor_ms,
                           std::int64_t window_length_ms) {
  return static_cast<int>((epoch_ms - anchor_ms) / window_length_ms);
}

}  // namespace tdif
