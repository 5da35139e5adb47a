#include "tdif/features.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace tdif {

FeatureBundle::FeatureBundle(const Topic& topic, std::vector<Document> pool,
                             std::vector<Document> context, const CorpusStats& stats,
                             const FeatureParams& params, std::uint64_t seed)
    : topic_(&topic), pool_size_(pool.size()), kl_eps_(params.kl_eps) {
  docs_ = std::move(pool);
  docs_.insert(docs_.end(), std::make_move_iterator(context.begin()),
               std::make_move_iterator(context.end()));

  relevance_ = assemble_relevance_vectors(
      topic, std::span<const Document>(docs_.data(), pool_size_), stats, params);

  if (pool_size_ > 0) {
    plsa_ = plsa_fit(std::span<const Document>(docs_.data(), pool_size_), params.plsa_topics,
                     params.plsa_max_iters, params.plsa_tol, seed);
    for (std::size_t i = pool_size_; i < docs_.size(); ++i) plsa_.fold_in(docs_[i]);
  } else if (!docs_.empty()) {
    plsa_ = plsa_fit(std::span<const Document>(docs_.data(), docs_.size()), params.plsa_topics,
                     params.plsa_max_iters, params.plsa_tol, seed);
  }

  // Term-id keyed sparse vectors; ids are assigned in doc/token order so
  // the cache is deterministic.
  std::unordered_map<std::string, int> term_ids;
  std::vector<double> idf_by_id;
  auto id_of = [&](const std::string& term) {
    auto [it, inserted] = term_ids.emplace(term, static_cast<int>(term_ids.size()));
    if (inserted) {
      idf_by_id.push_back(std::log(static_cast<double>(stats.doc_count + 1) /
                                   static_cast<double>(stats.df(term) + 1)));
    }
    return it->second;
  };
  const int n = static_cast<int>(docs_.size());
  tfidf_.resize(n);
  tfidf_norm_.resize(n);
  term_sets_.resize(n);
  posterior_.resize(n);
  for (int i = 0; i < n; ++i) {
    std::unordered_map<int, double> counts;
    for (const auto& tok : docs_[i].tokens) counts[id_of(tok)] += 1.0;
    auto& vec = tfidf_[i];
    vec.assign(counts.begin(), counts.end());
    std::sort(vec.begin(), vec.end());
    double norm2 = 0.0;
    auto& tset = term_sets_[i];
    tset.reserve(vec.size());
    for (auto& [tid, w] : vec) {
      tset.push_back(tid);
      w *= idf_by_id[tid];
      norm2 += w * w;
    }
    tfidf_norm_[i] = std::sqrt(norm2);
    posterior_[i] = plsa_.doc_topic_posterior(docs_[i]);
  }

  // Window KL scale: exact min/max over all ordered pool pairs when small,
  // otherwise a seeded sample; applied to the aggregated KL component.
  if (pool_size_ >= 2) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto probe = [&](std::size_t i, std::size_t j) {
      double kl = kl_divergence(posterior_[i], posterior_[j], kl_eps_);
      lo = std::min(lo, kl);
      hi = std::max(hi, kl);
    };
    const std::size_t pairs = pool_size_ * (pool_size_ - 1);
    constexpr std::size_t kMaxExactPairs = 4096;
    if (pairs <= kMaxExactPairs) {
      for (std::size_t i = 0; i < pool_size_; ++i)
        for (std::size_t j = 0; j < pool_size_; ++j)
          if (i != j) probe(i, j);
    } else {
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
      std::uniform_int_distribution<std::size_t> pick(0, pool_size_ - 1);
      for (std::size_t s = 0; s < kMaxExactPairs; ++s) {
        std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        if (i != j) probe(i, j);
      }
    }
    if (hi > lo) {
      kl_scale_ = KlScale{lo, hi, true};
    }
  }
}

DiversityVector FeatureBundle::pair(std::size_t i, std::size_t j) const {
  DiversityVector out;

  // cosine over cached tf*idf vectors
  if (tfidf_norm_[i] == 0.0 || tfidf_norm_[j] == 0.0) {
    out[kCosineDiv] = 1.0;
  } else {
    double dot = 0.0;
    const auto& a = tfidf_[i];
    const auto& b = tfidf_[j];
    std::size_t x = 0, y = 0;
    while (x < a.size() && y < b.size()) {
      if (a[x].first == b[y].first) {
        dot += a[x].second * b[y].second;
        ++x;
        ++y;
      } else if (a[x].first < b[y].first) {
        ++x;
      } else {
        ++y;
      }
    }
    out[kCosineDiv] = std::clamp(1.0 - dot / (tfidf_norm_[i] * tfidf_norm_[j]), 0.0, 1.0);
  }

  // jaccard over cached term sets
  const auto& sa = term_sets_[i];
  const auto& sb = term_sets_[j];
  if (sa.empty() && sb.empty()) {
    out[kJaccardDiv] = 0.0;
  } else {
    std::size_t inter = 0, x = 0, y = 0;
    while (x < sa.size() && y < sb.size()) {
      if (sa[x] == sb[y]) {
        ++inter;
        ++x;
        ++y;
      } else if (sa[x] < sb[y]) {
        ++x;
      } else {
        ++y;
      }
    }
    std::size_t uni = sa.size() + sb.size() - inter;
    out[kJaccardDiv] = 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
  }

  out[kSubtopicKl] = kl_divergence(posterior_[i], posterior_[j], kl_eps_);
  return out;
}

}  // namespace tdif
