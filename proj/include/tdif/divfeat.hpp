#pragma once

#include <array>
#include <span>

#include "tdif/corpus.hpp"
#include "tdif/plsa.hpp"

namespace tdif {

enum DivFeature : std::size_t {
  kCosineDiv = 0,
  kJaccardDiv,
  kSubtopicKl,
  kNumDivFeatures,
};

// Pairwise diversity feature vector between a candidate and one selected
// document: (1-cosine, 1-jaccard, KL of subtopic posteriors).
struct DiversityVector {
  std::array<double, kNumDivFeatures> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

enum class Aggregate { kMin, kAvg, kMax };

// 1 - cosine over tf*idf weighted term vectors; 1 if either vector is
// all-zero. idf = ln((N+1)/(df+1)), matching tf_idf_score.
double cosine_diversity(const Document& a, const Document& b, const CorpusStats& stats);

// 1 - |A ∩ B| / |A ∪ B| over term sets; 0 when both sets are empty.
double jaccard_diversity(const Document& a, const Document& b);

// KL(P(.|a) || P(.|b)) over word-averaged subtopic posteriors, after
// eps-smoothing and renormalizing both sides. Asymmetric by design.
double subtopic_kl_diversity(const PlsaModel& model, const Document& a, const Document& b,
                             double eps = 1e-6);

double kl_divergence(std::span<const double> p, std::span<const double> q, double eps = 1e-6);

// Component-wise aggregate over the selected set (the relational function
// h_S). An empty set yields the neutral (0,0,0): the caller must make the
// diversity term contribute nothing for the first selection.
DiversityVector relational_aggregate(std::span<const DiversityVector> relations,
                                     Aggregate mode = Aggregate::kMin);

}  // namespace tdif
