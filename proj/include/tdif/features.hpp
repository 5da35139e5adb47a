#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tdif/corpus.hpp"
#include "tdif/divfeat.hpp"
#include "tdif/plsa.hpp"
#include "tdif/relfeat.hpp"

namespace tdif {

// Window min-max scale for the KL diversity component. Inactive scale is
// the identity, so unit tests can feed raw feature values through the
// utility unchanged.
struct KlScale {
  double lo = 0.0;
  double hi = 1.0;
  bool active = false;

  double apply(double v) const {
    if (!active) return v;
    if (hi <= lo) return 0.5;
    double n = (v - lo) / (hi - lo);
    return n < 0.0 ? 0.0 : (n > 1.0 ? 1.0 : n);
  }
};

// Per-(topic, candidate window) feature state: normalized relevance
// vectors for the pool, a PLSA model fit on the pool with carried-over
// documents folded in, cached tf*idf vectors/term sets/posteriors for
// pairwise features, and the window's KL scale.
//
// Documents are addressed by index: [0, pool_size) is the candidate pool,
// [pool_size, size) are context documents (e.g. the retained result set).
class FeatureBundle {
 public:
  FeatureBundle(const Topic& topic, std::vector<Document> pool, std::vector<Document> context,
                const CorpusStats& stats, const FeatureParams& params, std::uint64_t seed);

  std::size_t size() const { return docs_.size(); }
  std::size_t pool_size() const { return pool_size_; }
  const Document& doc(std::size_t i) const { return docs_[i]; }
  const Topic& topic() const { return *topic_; }

  // Normalized relevance vector; defined for pool indices only.
  const RelevanceVector& relevance(std::size_t i) const { return relevance_[i]; }

  // Raw pairwise diversity vector R_ij (KL unnormalized).
  DiversityVector pair(std::size_t i, std::size_t j) const;

  const KlScale& kl_scale() const { return kl_scale_; }
  const PlsaModel& plsa() const { return plsa_; }

 private:
  const Topic* topic_;
  std::size_t pool_size_;
  std::vector<Document> docs_;
  std::vector<RelevanceVector> relevance_;
  PlsaModel plsa_;
  double kl_eps_;
  KlScale kl_scale_;

  // cached per-doc representations
  std::vector<std::vector<std::pair<int, double>>> tfidf_;  // sorted by term id
  std::vector<double> tfidf_norm_;
  std::vector<std::vector<int>> term_sets_;  // sorted unique term ids
  std::vector<std::vector<double>> posterior_;
};

}  // namespace tdif
