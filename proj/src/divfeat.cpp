#include "tdif/divfeat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace tdif {
namespace {

std::map<std::string, double> tfidf_vector(const Document& doc, const CorpusStats& stats) {
  std::map<std::string, double> weights;
  for (const auto& tok : doc.tokens) weights[tok] += 1.0;
  for (auto& [term, w] : weights) {
    w *= std::log(static_cast<double>(stats.doc_count + 1) /
                  static_cast<double>(stats.df(term) + 1));
  }
  return weights;
}

}  // namespace

double cosine_diversity(const Document& a, const Document& b, const CorpusStats& stats) {
  auto va = tfidf_vector(a, stats);
  auto vb = tfidf_vector(b, stats);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [term, w] : va) na += w * w;
  for (const auto& [term, w] : vb) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 1.0;
  for (const auto& [term, w] : va) {
    auto it = vb.find(term);
    if (it != vb.end()) dot += w * it->second;
  }
  return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double jaccard_diversity(const Document& a, const Document& b) {
  std::set<std::string> sa(a.tokens.begin(), a.tokens.end());
  std::set<std::string> sb(b.tokens.begin(), b.tokens.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  std::size_t uni = sa.size() + sb.size() - inter;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double kl_divergence(std::span<const double> p, std::span<const double> q, double eps) {
  double psum = 0.0, qsum = 0.0;
  for (double v : p) psum += v + eps;
  for (double v : q) qsum += v + eps;
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = (p[i] + eps) / psum;
    double qi = (q[i] + eps) / qsum;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

double subtopic_kl_diversity(const PlsaModel& model, const Document& a, const Document& b,
                             double eps) {
  auto pa = model.doc_topic_posterior(a);
  auto pb = model.doc_topic_posterior(b);
  return kl_divergence(pa, pb, eps);
}

DiversityVector relational_aggregate(std::span<const DiversityVector> relations,
                                     Aggregate mode) {
  DiversityVector out;
  if (relations.empty()) return out;
  out = relations.front();
  for (std::size_t r = 1; r < relations.size(); ++r) {
    for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
      switch (mode) {
        case Aggregate::kMin:
          out[f] = std::min(out[f], relations[r][f]);
          break;
        case Aggregate::kMax:
          out[f] = std::max(out[f], relations[r][f]);
          break;
        case Aggregate::kAvg:
          out[f] += relations[r][f];
          break;
      }
    }
  }
  if (mode == Aggregate::kAvg) {
    for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
      out[f] /= static_cast<double>(relations.size());
    }
  }
  return out;
}

}  // namespace tdif
