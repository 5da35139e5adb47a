#include "tdif/select.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace tdif {

Strategy strategy_from_name(const std::string& name) {
  if (name == "dp") return Strategy::kDp;
  if (name == "toprel") return Strategy::kTopRel;
  if (name == "allbatch") return Strategy::kAllBatch;
  throw DataError("unknown strategy " + name);
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kDp: return "dp";
    case Strategy::kTopRel: return "toprel";
    case Strategy::kAllBatch: return "allbatch";
  }
  return "?";
}

namespace {

double dot_relevance(const RelevanceVector& x, const WeightVector& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < kNumRelFeatures; ++i) s += w.omega_r[i] * x[i];
  return s;
}

double utility_from_aggregate(double relevance_part, const DiversityVector& h, bool have_relations,
                              const WeightVector& w, const KlScale& scale, EvalCounter* counter) {
  if (counter) ++counter->utility_evals;
  if (!have_relations) return relevance_part;
  return relevance_part + w.omega_d[kCosineDiv] * h[kCosineDiv] +
         w.omega_d[kJaccardDiv] * h[kJaccardDiv] +
         w.omega_d[kSubtopicKl] * scale.apply(h[kSubtopicKl]);
}

// true if (utility, epoch, id) of `a` beats the incumbent
bool beats(double ua, std::int64_t epoch_a, const std::string& id_a, double ub,
           std::int64_t epoch_b, const std::string& id_b) {
  if (ua != ub) return ua > ub;
  if (epoch_a != epoch_b) return epoch_a > epoch_b;
  return id_a < id_b;
}

void sort_chronological(ResultSet& rs) {
  std::sort(rs.items.begin(), rs.items.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.epoch_ms != b.epoch_ms) return a.epoch_ms < b.epoch_ms;
    return a.doc_id < b.doc_id;
  });
}

}  // namespace

double utility_score(const RelevanceVector& x, std::span<const DiversityVector> relations,
                     const WeightVector& weights, const KlScale& scale, EvalCounter* counter,
                     Aggregate mode) {
  if (x.schema_version != weights.schema_version) {
    throw DataError("feature schema version " + std::to_string(x.schema_version) +
                    " does not match weights schema version " +
                    std::to_string(weights.schema_version));
  }
  DiversityVector h = relational_aggregate(relations, mode);
  return utility_from_aggregate(dot_relevance(x, weights), h, !relations.empty(), weights, scale,
                                counter);
}

std::vector<GreedyPick> greedy_select(const FeatureBundle& features,
                                      std::span<const std::size_t> pool,
                                      std::span<const std::size_t> selected,
                                      const WeightVector& weights, std::size_t m,
                                      EvalCounter* counter) {
  const KlScale& scale = features.kl_scale();
  std::vector<std::size_t> remaining(pool.begin(), pool.end());

  // Running component-wise min of R_ij over the selected set, maintained
  // incrementally; this is what keeps one step at O(|pool|).
  struct CandState {
    double relevance = 0.0;
    DiversityVector min_div;
    bool has_relations = false;
  };
  std::unordered_map<std::size_t, CandState> state;
  state.reserve(remaining.size());
  for (std::size_t idx : remaining) {
    CandState cs;
    cs.relevance = dot_relevance(features.relevance(idx), weights);
    for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
      cs.min_div[f] = std::numeric_limits<double>::infinity();
    }
    for (std::size_t sel : selected) {
      DiversityVector r = features.pair(idx, sel);
      for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
        cs.min_div[f] = std::min(cs.min_div[f], r[f]);
      }
      cs.has_relations = true;
    }
    state.emplace(idx, cs);
  }

  std::vector<GreedyPick> picks;
  picks.reserve(m);
  while (picks.size() < m && !remaining.empty()) {
    std::size_t best_pos = 0;
    double best_utility = 0.0;
    bool first = true;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      std::size_t idx = remaining[pos];
      const CandState& cs = state[idx];
      double u = utility_from_aggregate(cs.relevance, cs.min_div, cs.has_relations, weights, scale,
                                        counter);
      const Document& d = features.doc(idx);
      const Document& inc = features.doc(remaining[best_pos]);
      if (first || beats(u, d.epoch_ms, d.id, best_utility, inc.epoch_ms, inc.id)) {
        best_pos = pos;
        best_utility = u;
        first = false;
      }
    }
    std::size_t chosen = remaining[best_pos];
    picks.push_back({chosen, best_utility});
    remaining.erase(remaining.begin() + best_pos);
    for (std::size_t idx : remaining) {
      CandState& cs = state[idx];
      DiversityVector r = features.pair(idx, chosen);
      for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
        cs.min_div[f] = std::min(cs.min_div[f], r[f]);
      }
      cs.has_relations = true;
    }
  }
  return picks;
}

namespace {

// Candidates with no tokens carry no content signal and break PLSA
// fitting; they are never admitted to a pool.
std::vector<Document> usable_docs(std::span<const Document> docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const Document& d : docs) {
    if (!d.tokens.empty()) out.push_back(d);
  }
  return out;
}

ResultSet finalize(std::vector<ScoredItem> items) {
  ResultSet rs;
  rs.items = std::move(items);
  sort_chronological(rs);
  return rs;
}

}  // namespace

ResultSet dp_window_step(const ScoringContext& ctx, const ResultSet& previous,
                         std::span<const Document> previous_docs, const CandidateWindow& window,
                         int k, int m) {
  if (m <= 0 || m > k) {
    throw DataError("dp_window_step requires 0 < m <= K (got m=" + std::to_string(m) +
                    ", K=" + std::to_string(k) + ")");
  }

  // top-(K-m) of the previous set by the utility recorded at selection
  std::vector<ScoredItem> retained = previous.items;
  std::sort(retained.begin(), retained.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.utility_at_selection != b.utility_at_selection) {
      return a.utility_at_selection > b.utility_at_selection;
    }
    if (a.epoch_ms != b.epoch_ms) return a.epoch_ms > b.epoch_ms;
    return a.doc_id < b.doc_id;
  });
  if (retained.size() > static_cast<std::size_t>(k - m)) {
    retained.resize(static_cast<std::size_t>(k - m));
  }

  std::unordered_set<std::string> retained_ids;
  for (const auto& it : retained) retained_ids.insert(it.doc_id);

  // window candidates, minus any doc already retained
  std::vector<Document> pool;
  pool.reserve(window.documents.size());
  for (const Document& d : usable_docs(window.documents)) {
    if (!retained_ids.count(d.id)) pool.push_back(d);
  }

  std::unordered_map<std::string, const Document*> doc_by_id;
  for (const Document& d : previous_docs) doc_by_id.emplace(d.id, &d);
  std::vector<Document> context;
  context.reserve(retained.size());
  for (const auto& it : retained) {
    auto found = doc_by_id.find(it.doc_id);
    if (found == doc_by_id.end()) {
      throw DataError("dp_window_step: no document payload for retained item " + it.doc_id);
    }
    context.push_back(*found->second);
  }

  std::vector<ScoredItem> items = retained;
  if (!pool.empty()) {
    const std::size_t pool_n = pool.size();
    FeatureBundle features(ctx.topic, std::move(pool), std::move(context), ctx.stats, ctx.params,
                           ctx.seed);
    std::vector<std::size_t> pool_idx(pool_n);
    std::vector<std::size_t> selected_idx(features.size() - pool_n);
    for (std::size_t i = 0; i < pool_idx.size(); ++i) pool_idx[i] = i;
    for (std::size_t i = 0; i < selected_idx.size(); ++i) selected_idx[i] = pool_n + i;

    auto picks = greedy_select(features, pool_idx, selected_idx, ctx.weights,
                               static_cast<std::size_t>(m), ctx.counter);
    for (const auto& p : picks) {
      const Document& d = features.doc(p.index);
      items.push_back({d.id, d.epoch_ms, p.utility, window.window_index});
    }
  }
  return finalize(std::move(items));
}

ResultSet toprel_window_step(const ScoringContext& ctx, const CandidateWindow& window, int k) {
  std::vector<Document> pool = usable_docs(window.documents);
  if (pool.empty()) return {};
  auto vectors = assemble_relevance_vectors(ctx.topic, pool, ctx.stats, ctx.params);

  struct Scored {
    std::size_t idx;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (ctx.counter) ++ctx.counter->utility_evals;
    scored.push_back({i, dot_relevance(vectors[i], ctx.weights)});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    return beats(a.score, pool[a.idx].epoch_ms, pool[a.idx].id, b.score, pool[b.idx].epoch_ms,
                 pool[b.idx].id);
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));

  std::vector<ScoredItem> items;
  items.reserve(scored.size());
  for (const auto& s : scored) {
    items.push_back({pool[s.idx].id, pool[s.idx].epoch_ms, s.score, window.window_index});
  }
  return finalize(std::move(items));
}

ResultSet allbatch_step(const ScoringContext& ctx, std::span<const Document> all_docs, int k,
                        int window_index) {
  std::vector<Document> pool = usable_docs(all_docs);
  if (pool.empty()) return {};
  const std::size_t pool_n = pool.size();
  FeatureBundle features(ctx.topic, std::move(pool), {}, ctx.stats, ctx.params, ctx.seed);
  std::vector<std::size_t> pool_idx(pool_n);
  for (std::size_t i = 0; i < pool_idx.size(); ++i) pool_idx[i] = i;

  auto picks = greedy_select(features, pool_idx, {}, ctx.weights, static_cast<std::size_t>(k),
                             ctx.counter);
  std::vector<ScoredItem> items;
  items.reserve(picks.size());
  for (const auto& p : picks) {
    const Document& d = features.doc(p.index);
    items.push_back({d.id, d.epoch_ms, p.utility, window_index});
  }
  return finalize(std::move(items));
}

std::vector<WindowResult> run_stream(const Topic& topic, std::vector<Document> stream,
                                     const StreamRunConfig& config, const WeightVector& weights) {
  if (config.window_length_ms <= 0) throw DataError("window_length must be positive");
  if (config.strategy == Strategy::kDp && (config.m <= 0 || config.m > config.k)) {
    throw DataError("dp strategy requires 0 < m <= K");
  }

  std::vector<WindowResult> results;
  if (stream.empty()) return results;

  std::stable_sort(stream.begin(), stream.end(), [](const Document& a, const Document& b) {
    return a.epoch_ms < b.epoch_ms;
  });
  const std::int64_t anchor = stream.front().epoch_ms;
  const int last_window =
      window_index_of(stream.back().epoch_ms, anchor, config.window_length_ms);

  // Per-topic sub-seed so distinct topics decorrelate deterministically.
  const std::uint64_t topic_seed = config.seed ^ fnv1a(topic.id);

  CorpusStats stats;
  ResultSet current;
  std::unordered_map<std::string, Document> current_docs;
  std::vector<Document> accumulated;  // allbatch only
  std::size_t next_doc = 0;

  for (int w = 0; w <= last_window; ++w) {
    CandidateWindow window;
    window.window_index = w;
    window.start_ms = anchor + w * config.window_length_ms;
    window.end_ms = window.start_ms + config.window_length_ms;
    while (next_doc < stream.size() && stream[next_doc].epoch_ms < window.end_ms) {
      window.documents.push_back(stream[next_doc]);
      ++next_doc;
    }
    update_stats(stats, window.documents);

    EvalCounter counter;
    ScoringContext ctx{topic,   stats, config.features, weights,
                       topic_seed + static_cast<std::uint64_t>(w) * 0x9e3779b9ull, &counter};

    auto t0 = std::chrono::steady_clock::now();
    switch (config.strategy) {
      case Strategy::kDp: {
        std::vector<Document> prev_docs;
        prev_docs.reserve(current.items.size());
        for (const auto& it : current.items) prev_docs.push_back(current_docs.at(it.doc_id));
        current = dp_window_step(ctx, current, prev_docs, window, config.k, config.m);
        break;
      }
      case Strategy::kTopRel:
        current = toprel_window_step(ctx, window, config.k);
        break;
      case Strategy::kAllBatch:
        accumulated.insert(accumulated.end(), window.documents.begin(), window.documents.end());
        current = allbatch_step(ctx, accumulated, config.k, w);
        break;
    }
    auto t1 = std::chrono::steady_clock::now();

    // keep payloads of the docs in the current result set
    std::unordered_map<std::string, Document> next_docs;
    for (const auto& it : current.items) {
      auto found = current_docs.find(it.doc_id);
      if (found != current_docs.end()) {
        next_docs.emplace(it.doc_id, std::move(found->second));
        continue;
      }
      for (const Document& d : window.documents) {
        if (d.id == it.doc_id) {
          next_docs.emplace(d.id, d);
          break;
        }
      }
      if (config.strategy == Strategy::kAllBatch && !next_docs.count(it.doc_id)) {
        for (const Document& d : accumulated) {
          if (d.id == it.doc_id) {
            next_docs.emplace(d.id, d);
            break;
          }
        }
      }
    }
    current_docs = std::move(next_docs);

    WindowResult wr;
    wr.result = current;
    wr.window_index = w;
    wr.window_start_ms = window.start_ms;
    wr.window_end_ms = window.end_ms;
    wr.window_doc_count = window.documents.size();
    wr.utility_evals = counter.utility_evals;
    wr.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    results.push_back(std::move(wr));
  }
  return results;
}

}  // namespace tdif
