#include "tdif/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace tdif {

int Qrels::grade(const std::string& topic_id, const std::string& subtopic_id,
                 const std::string& doc_id) const {
  auto t = judgments.find(topic_id);
  if (t == judgments.end()) return 0;
  auto d = t->second.find(doc_id);
  if (d == t->second.end()) return 0;
  auto s = d->second.find(subtopic_id);
  return s == d->second.end() ? 0 : s->second;
}

int Qrels::recency(const std::string& topic_id, const std::string& doc_id) const {
  auto it = recency_grade.find({topic_id, doc_id});
  return it == recency_grade.end() ? 0 : it->second;
}

int Qrels::confidence(const std::string& doc_id) const {
  auto it = confidence_grade.find(doc_id);
  return it == confidence_grade.end() ? 1 : it->second;
}

int rescale_recency_ms(std::int64_t delta_ms, std::pair<std::int64_t, std::int64_t> thresholds) {
  if (thresholds.first >= thresholds.second) {
    throw DataError("recency thresholds must be increasing");
  }
  if (delta_ms < 0) delta_ms = 0;
  if (delta_ms <= thresholds.first) return 0;
  if (delta_ms <= thresholds.second) return 1;
  return 2;
}

int rescale_recency(const Topic& topic, const Document& doc,
                    std::pair<std::int64_t, std::int64_t> thresholds) {
  return rescale_recency_ms(topic.tracking_epoch_ms - doc.epoch_ms, thresholds);
}

int rescale_confidence(std::int64_t followers, std::pair<std::int64_t, std::int64_t> thresholds) {
  if (thresholds.first >= thresholds.second) {
    throw DataError("confidence thresholds must be increasing");
  }
  if (followers >= thresholds.second) return 3;
  if (followers >= thresholds.first) return 2;
  return 1;
}

std::string metric_name(const MetricParams& params) {
  switch (params.discount) {
    case Discount::kNdcg: return params.dynamic ? "d-ndcg" : "alpha-ndcg";
    case Discount::kErr: return params.dynamic ? "d-err" : "err-ia";
    case Discount::kNrbp: return params.dynamic ? "d-nrbp" : "nrbp";
  }
  return "?";
}

MetricParams metric_params_from_name(const std::string& name) {
  MetricParams p;
  std::string base = name;
  if (base.rfind("d-", 0) == 0) {
    p.dynamic = true;
    base = base.substr(2);
  }
  if (base == "ndcg" || base == "alpha-ndcg") {
    p.discount = Discount::kNdcg;
  } else if (base == "err" || base == "err-ia") {
    p.discount = Discount::kErr;
  } else if (base == "nrbp") {
    p.discount = Discount::kNrbp;
  } else {
    throw DataError("unknown metric " + name);
  }
  return p;
}

namespace {

void validate(const MetricParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw DataError("alpha must be in (0,1]");
  if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw DataError("gamma must be in (0,1]");
  if (!(p.beta > 0.0 && p.beta < 1.0)) throw DataError("beta must be in (0,1)");
  if (p.cutoff <= 0) throw DataError("cutoff must be positive");
}

double discount_at(const MetricParams& p, int k) {
  switch (p.discount) {
    case Discount::kNdcg: return std::log2(static_cast<double>(k) + 1.0);
    case Discount::kErr: return static_cast<double>(k);
    case Discount::kNrbp: return std::pow(1.0 / p.beta, k - 1);
  }
  return 1.0;
}

// One judged document with grades resolved for the evaluation at hand.
struct PoolDoc {
  std::string id;
  std::vector<int> grades;  // binarized, by topic subtopic order
  double dyn_factor = 1.0;  // gamma^t_rcy * u_r (1 in classic mode)
};

struct ResolvedTopic {
  const Topic* topic = nullptr;
  std::vector<PoolDoc> pool;  // ascending id
  std::unordered_map<std::string, std::size_t> index;

  const PoolDoc* find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? nullptr : &pool[it->second];
  }
};

double dynamic_factor(const MetricParams& params, const Qrels& qrels, const Topic& topic,
                      const std::string& doc_id) {
  if (!params.dynamic) return 1.0;
  double exponent = static_cast<double>(qrels.recency(topic.id, doc_id));
  if (params.raw_recency) {
    auto raw = qrels.recency_delta_ms.find({topic.id, doc_id});
    if (raw != qrels.recency_delta_ms.end()) {
      exponent = static_cast<double>(std::max<std::int64_t>(raw->second, 0)) / 3.6e6;
    }
  }
  return std::pow(params.gamma, exponent) * qrels.confidence(doc_id);
}

ResolvedTopic resolve_topic(const Topic& topic, const Qrels& qrels, const MetricParams& params) {
  auto t = qrels.judgments.find(topic.id);
  if (t == qrels.judgments.end()) {
    throw DataError("topic " + topic.id + " absent from qrels");
  }
  ResolvedTopic rt;
  rt.topic = &topic;
  for (const auto& [doc_id, subtopic_grades] : t->second) {
    PoolDoc pd;
    pd.id = doc_id;
    pd.grades.resize(topic.subtopics.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < topic.subtopics.size(); ++i) {
      auto g = subtopic_grades.find(topic.subtopics[i].id);
      if (g != subtopic_grades.end() && g->second >= 1) {
        pd.grades[i] = 1;
        any = true;
      }
    }
    if (!any) continue;  // judged irrelevant everywhere
    pd.dyn_factor = dynamic_factor(params, qrels, topic, doc_id);
    rt.index.emplace(pd.id, rt.pool.size());
    rt.pool.push_back(std::move(pd));
  }
  return rt;
}

// Raw discounted gain sum of a ranking, advancing per-subtopic redundancy
// counts as it walks.
double raw_sum(std::span<const std::string> ranking, const ResolvedTopic& rt,
               const MetricParams& params) {
  const auto& subtopics = rt.topic->subtopics;
  std::vector<int> counts(subtopics.size(), 0);
  double total = 0.0;
  const std::size_t depth = std::min<std::size_t>(ranking.size(), params.cutoff);
  for (std::size_t pos = 0; pos < depth; ++pos) {
    const PoolDoc* pd = rt.find(ranking[pos]);
    if (!pd) continue;
    double gain = 0.0;
    for (std::size_t i = 0; i < subtopics.size(); ++i) {
      if (!pd->grades[i]) continue;
      gain += subtopics[i].probability * std::pow(1.0 - params.alpha, counts[i]);
      ++counts[i];
    }
    total += gain * pd->dyn_factor / discount_at(params, static_cast<int>(pos) + 1);
  }
  return total;
}

std::vector<std::string> greedy_ideal(const ResolvedTopic& rt, const MetricParams& params) {
  const auto& subtopics = rt.topic->subtopics;
  std::vector<int> counts(subtopics.size(), 0);
  std::vector<bool> used(rt.pool.size(), false);
  std::vector<std::string> order;
  const std::size_t depth = std::min<std::size_t>(rt.pool.size(), params.cutoff);
  for (std::size_t pos = 0; pos < depth; ++pos) {
    double best_gain = 0.0;
    std::size_t best = rt.pool.size();
    for (std::size_t d = 0; d < rt.pool.size(); ++d) {
      if (used[d]) continue;
      double gain = 0.0;
      for (std::size_t i = 0; i < subtopics.size(); ++i) {
        if (!rt.pool[d].grades[i]) continue;
        gain += subtopics[i].probability * std::pow(1.0 - params.alpha, counts[i]);
      }
      gain *= rt.pool[d].dyn_factor;
      if (gain > best_gain) {  // pool is id-sorted: first max wins ties
        best_gain = gain;
        best = d;
      }
    }
    if (best == rt.pool.size()) break;  // nothing adds gain
    used[best] = true;
    order.push_back(rt.pool[best].id);
    for (std::size_t i = 0; i < subtopics.size(); ++i) {
      if (rt.pool[best].grades[i]) ++counts[i];
    }
  }
  return order;
}

double measure_resolved(std::span<const std::string> ranking, const ResolvedTopic& rt,
                        const MetricParams& params) {
  auto ideal = greedy_ideal(rt, params);
  double norm = raw_sum(ideal, rt, params);
  if (norm <= 0.0) return 0.0;
  return raw_sum(ranking, rt, params) / norm;
}

}  // namespace

double gain_at_rank(std::span<const std::string> ranking, std::size_t k,
                    const std::string& subtopic_id, const Topic& topic, const Qrels& qrels,
                    const MetricParams& params) {
  validate(params);
  if (k < 1 || k > ranking.size()) throw DataError("gain_at_rank: rank out of range");
  int g = qrels.grade(topic.id, subtopic_id, ranking[k - 1]) >= 1 ? 1 : 0;
  if (!g) return 0.0;
  int c = 0;
  for (std::size_t pos = 0; pos + 1 < k; ++pos) {
    if (qrels.grade(topic.id, subtopic_id, ranking[pos]) >= 1) ++c;
  }
  return std::pow(1.0 - params.alpha, c) * dynamic_factor(params, qrels, topic, ranking[k - 1]);
}

double diversity_measure(std::span<const std::string> ranking, const Topic& topic,
                         const Qrels& qrels, const MetricParams& params) {
  validate(params);
  ResolvedTopic rt = resolve_topic(topic, qrels, params);
  return measure_resolved(ranking, rt, params);
}

std::vector<std::string> ideal_ranking(const Topic& topic, const Qrels& qrels,
                                       const MetricParams& params) {
  validate(params);
  ResolvedTopic rt = resolve_topic(topic, qrels, params);
  return greedy_ideal(rt, params);
}

StreamEvalContext StreamEvalContext::from_stream(std::span<const Document> stream,
                                                 std::int64_t window_length_ms) {
  if (window_length_ms <= 0) throw DataError("window_length must be positive");
  StreamEvalContext ctx;
  ctx.window_length_ms = window_length_ms;
  ctx.anchor_ms = std::numeric_limits<std::int64_t>::max();
  for (const Document& d : stream) {
    ctx.anchor_ms = std::min(ctx.anchor_ms, d.epoch_ms);
    ctx.docs_by_id.emplace(d.id, d);
  }
  if (stream.empty()) ctx.anchor_ms = 0;
  return ctx;
}

void resolve_grades_from_stream(Qrels& qrels, std::span<const Topic> topics,
                                std::span<const Document> stream) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& d : stream) by_id.emplace(d.id, &d);
  for (const Topic& topic : topics) {
    auto t = qrels.judgments.find(topic.id);
    if (t == qrels.judgments.end()) continue;
    for (const auto& [doc_id, grades] : t->second) {
      auto doc = by_id.find(doc_id);
      if (doc == by_id.end()) continue;
      auto key = std::make_pair(topic.id, doc_id);
      if (!qrels.recency_grade.count(key)) {
        qrels.recency_grade[key] = rescale_recency(topic, *doc->second);
        qrels.recency_delta_ms[key] = topic.tracking_epoch_ms - doc->second->epoch_ms;
      }
      if (!qrels.confidence_grade.count(doc_id)) {
        qrels.confidence_grade[doc_id] = rescale_confidence(doc->second->followers);
      }
    }
  }
}

namespace {

// Per-window grade view: recency measured against the window end, pool
// restricted to documents existing by then.
ResolvedTopic resolve_topic_at(const Topic& topic, const Qrels& qrels, const MetricParams& params,
                               const StreamEvalContext& ctx, std::int64_t reference_ms) {
  auto t = qrels.judgments.find(topic.id);
  if (t == qrels.judgments.end()) {
    throw DataError("topic " + topic.id + " absent from qrels");
  }
  ResolvedTopic rt;
  rt.topic = &topic;
  for (const auto& [doc_id, subtopic_grades] : t->second) {
    auto doc = ctx.docs_by_id.find(doc_id);
    PoolDoc pd;
    pd.id = doc_id;
    pd.grades.resize(topic.subtopics.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < topic.subtopics.size(); ++i) {
      auto g = subtopic_grades.find(topic.subtopics[i].id);
      if (g != subtopic_grades.end() && g->second >= 1) {
        pd.grades[i] = 1;
        any = true;
      }
    }
    if (!any) continue;
    if (doc != ctx.docs_by_id.end()) {
      const Document& d = doc->second;
      if (d.epoch_ms >= reference_ms) continue;  // not yet published
      if (params.dynamic) {
        std::int64_t delta = reference_ms - d.epoch_ms;
        double exponent = params.raw_recency
                              ? static_cast<double>(delta) / 3.6e6
                              : static_cast<double>(rescale_recency_ms(delta,
                                                                       ctx.recency_thresholds));
        pd.dyn_factor = std::pow(params.gamma, exponent) *
                        rescale_confidence(d.followers, ctx.confidence_thresholds);
      }
    } else {
      pd.dyn_factor = dynamic_factor(params, qrels, topic, doc_id);
    }
    rt.index.emplace(pd.id, rt.pool.size());
    rt.pool.push_back(std::move(pd));
  }
  return rt;
}

}  // namespace

EvalResult evaluate_run(std::span<const RunItem> run, std::span<const Topic> topics,
                        const Qrels& qrels, const MetricParams& params,
                        const StreamEvalContext* stream_ctx) {
  validate(params);
  std::unordered_map<std::string, const Topic*> topic_by_id;
  for (const Topic& t : topics) topic_by_id.emplace(t.id, &t);

  std::set<std::string> unknown;
  std::set<std::string> run_topics;
  std::set<int> windows;
  std::map<std::pair<std::string, int>, std::vector<std::pair<int, std::string>>> blocks;
  for (const RunItem& item : run) {
    if (!topic_by_id.count(item.topic_id) || !qrels.judgments.count(item.topic_id)) {
      unknown.insert(item.topic_id);
      continue;
    }
    run_topics.insert(item.topic_id);
    windows.insert(item.window_index);
    blocks[{item.topic_id, item.window_index}].emplace_back(item.rank, item.doc_id);
  }
  if (!unknown.empty()) {
    std::string msg = "run references unknown topics:";
    for (const auto& id : unknown) msg += " " + id;
    throw DataError(msg);
  }

  EvalResult result;
  for (int w : windows) {
    double sum = 0.0;
    for (const auto& topic_id : run_topics) {
      const Topic& topic = *topic_by_id.at(topic_id);
      std::vector<std::string> ranking;
      auto block = blocks.find({topic_id, w});
      if (block != blocks.end()) {
        std::sort(block->second.begin(), block->second.end());
        for (const auto& [rank, doc_id] : block->second) ranking.push_back(doc_id);
      }
      double score;
      if (stream_ctx) {
        std::int64_t reference =
            stream_ctx->anchor_ms + (static_cast<std::int64_t>(w) + 1) * stream_ctx->window_length_ms;
        ResolvedTopic rt = resolve_topic_at(topic, qrels, params, *stream_ctx, reference);
        score = measure_resolved(ranking, rt, params);
      } else {
        score = diversity_measure(ranking, topic, qrels, params);
      }
      result.per_topic.push_back({topic_id, w, score});
      sum += score;
    }
    if (!run_topics.empty()) {
      result.mean_per_window.push_back(
          {"ALL", w, sum / static_cast<double>(run_topics.size())});
    }
  }
  return result;
}

}  // namespace tdif
