#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tdif/metrics.hpp"
#include "tdif/select.hpp"

namespace tdif {

// One topic's training material: an assembled candidate pool and the
// ideal selection sequence derived from qrels. step_h[s][c] caches the
// effective aggregated diversity vector of candidate c against the ideal
// prefix of length s (KL component already window-normalized); row 0 is
// empty because the first selection is relevance-only.
struct TrainingInstance {
  std::string topic_id;
  std::vector<std::string> doc_ids;
  std::vector<std::array<double, kNumRelFeatures>> x;
  std::vector<std::size_t> ideal;
  std::vector<std::vector<std::array<double, kNumDivFeatures>>> step_h;
  std::vector<int> label;  // max grade over subtopics, for the listwise objective
};

// Greedy gain-maximizing selection order over the judged part of `pool`,
// truncated at `k`; empty when nothing is relevant. Dynamic gain mode is
// selected through params.dynamic.
std::vector<std::string> build_ideal_sequence(const Topic& topic,
                                              std::span<const std::string> pool,
                                              const Qrels& qrels, const MetricParams& params,
                                              int k);

// Log-likelihood of reproducing the ideal sequence step by step under a
// softmax over the remaining candidates (teacher-forced prefixes).
double sequential_log_likelihood(const WeightVector& weights, const TrainingInstance& instance);

struct WeightGradient {
  std::array<double, kNumRelFeatures> omega_r{};
  std::array<double, kNumDivFeatures> omega_d{};
};

// Analytic gradient of sequential_log_likelihood.
WeightGradient sequential_gradient(const WeightVector& weights, const TrainingInstance& instance);

enum class Objective { kSequential, kListwise };

Objective objective_from_name(const std::string& name);
std::string objective_name(Objective o);

struct FitParams {
  double lr = 0.05;
  int iters = 200;
  std::uint64_t seed = 1;
};

struct FitResult {
  WeightVector weights;
  std::vector<double> likelihood_trace;  // total LL at the start of each iteration
};

// Gradient ascent from zero weights with a fixed learning rate. The
// listwise objective is the Plackett-Luce likelihood of the label-sorted
// permutation (grade ties in seeded-shuffle order) over omega_r only.
// Raises DataError after 10 consecutive likelihood decreases.
FitResult fit_weights(std::span<const TrainingInstance> instances, Objective objective,
                      const FitParams& params = {});

// Builds one instance per topic from the first stream window (the
// training slice); topics with no relevant pool documents are skipped
// with a note on stderr.
std::vector<TrainingInstance> build_training_set(std::span<const Topic> topics,
                                                 std::vector<Document> stream, const Qrels& qrels,
                                                 const FeatureParams& fparams,
                                                 const MetricParams& gain_params, int k,
                                                 std::int64_t window_length_ms,
                                                 std::uint64_t seed);

// Instance assembly for one explicit pool (exposed for tests).
TrainingInstance make_training_instance(const Topic& topic, std::vector<Document> pool,
                                        const CorpusStats& stats, const FeatureParams& fparams,
                                        const Qrels& qrels, const MetricParams& gain_params,
                                        int k, std::uint64_t seed);

}  // namespace tdif
