#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdif/corpus.hpp"

namespace tdif {

// Subtopic-level graded judgments plus per-document recency and
// confidence grades. Grade maps are total after resolution: missing
// recency defaults to 0 (latest) and missing confidence to 1 (normal)
// unless derived from stream metadata.
struct Qrels {
  // topic -> doc -> subtopic -> grade in {0,1,2}
  std::map<std::string, std::map<std::string, std::map<std::string, int>>> judgments;
  // (topic, doc) -> t_rcy in {0,1,2}
  std::map<std::pair<std::string, std::string>, int> recency_grade;
  // (topic, doc) -> raw recency lag in ms (kept when grades were derived
  // from timestamps; backs the raw-exponent sensitivity mode)
  std::map<std::pair<std::string, std::string>, std::int64_t> recency_delta_ms;
  // doc -> u_r in {1,2,3}
  std::map<std::string, int> confidence_grade;

  int grade(const std::string& topic_id, const std::string& subtopic_id,
            const std::string& doc_id) const;
  int recency(const std::string& topic_id, const std::string& doc_id) const;
  int confidence(const std::string& doc_id) const;
};

enum class Discount { kNdcg, kErr, kNrbp };

struct MetricParams {
  double alpha = 0.5;
  double gamma = 0.5;
  double beta = 0.8;
  int cutoff = 20;
  Discount discount = Discount::kNdcg;
  bool dynamic = false;
  // sensitivity mode: gamma is exponentiated by the raw lag (in hours)
  // instead of the rescaled grade, where a raw lag is known
  bool raw_recency = false;
};

std::string metric_name(const MetricParams& params);
MetricParams metric_params_from_name(const std::string& name);

inline constexpr std::int64_t kDayMs = 24ll * 3600 * 1000;

// Three-grade recency: 0 latest, 1 recent, 2 history.
int rescale_recency_ms(std::int64_t delta_ms,
                       std::pair<std::int64_t, std::int64_t> thresholds = {2 * kDayMs,
                                                                           7 * kDayMs});
int rescale_recency(const Topic& topic, const Document& doc,
                    std::pair<std::int64_t, std::int64_t> thresholds = {2 * kDayMs, 7 * kDayMs});

// Three-grade account confidence: 1 normal, 2 important, 3 significant.
int rescale_confidence(std::int64_t followers,
                       std::pair<std::int64_t, std::int64_t> thresholds = {1000, 100000});

// Gain of the document at (1-based) rank k for one subtopic:
// g * (1-alpha)^c, times gamma^t_rcy * u_r in dynamic mode. g is the
// binarized judgment and c counts docs relevant to the subtopic ranked
// before k. Unjudged documents contribute 0.
double gain_at_rank(std::span<const std::string> ranking, std::size_t k,
                    const std::string& subtopic_id, const Topic& topic, const Qrels& qrels,
                    const MetricParams& params);

// The unified measure family, normalized by the greedy ideal ranking over
// the judged pool; 0 when the ideal sum is 0. Scores lie in [0,1].
double diversity_measure(std::span<const std::string> ranking, const Topic& topic,
                         const Qrels& qrels, const MetricParams& params);

// Greedy gain-maximizing ordering of the topic's judged pool (the
// normalization ranking), truncated at params.cutoff.
std::vector<std::string> ideal_ranking(const Topic& topic, const Qrels& qrels,
                                       const MetricParams& params);

struct RunItem {
  std::string topic_id;
  int window_index = 0;
  int rank = 0;
  std::string doc_id;
  std::int64_t epoch_ms = 0;
  double utility = 0.0;
};

struct EvalRow {
  std::string topic_id;  // "ALL" for the per-window mean
  int window_index = 0;
  double value = 0.0;
};

// When present, recency/confidence grades are re-derived per window from
// stream metadata (reference time = window end) and the judged pool is
// restricted to documents existing by then — the per-time-point view.
struct StreamEvalContext {
  std::unordered_map<std::string, Document> docs_by_id;
  std::int64_t anchor_ms = 0;
  std::int64_t window_length_ms = 0;
  std::pair<std::int64_t, std::int64_t> recency_thresholds{2 * kDayMs, 7 * kDayMs};
  std::pair<std::int64_t, std::int64_t> confidence_thresholds{1000, 100000};

  static StreamEvalContext from_stream(std::span<const Document> stream,
                                       std::int64_t window_length_ms);
};

struct EvalResult {
  std::vector<EvalRow> per_topic;        // one row per (topic, window)
  std::vector<EvalRow> mean_per_window;  // topic_id = "ALL"
};

// One score per (topic, window); the aggregate is the arithmetic mean
// over the run's topics per window. Topics missing from `topics`/`qrels`
// raise a DataError listing every offender.
EvalResult evaluate_run(std::span<const RunItem> run, std::span<const Topic> topics,
                        const Qrels& qrels, const MetricParams& params,
                        const StreamEvalContext* stream_ctx = nullptr);

// Fills missing recency/confidence grades from stream metadata measured
// against each topic's tracking time (the static, load-time resolution).
void resolve_grades_from_stream(Qrels& qrels, std::span<const Topic> topics,
                                std::span<const Document> stream);

}  // namespace tdif
