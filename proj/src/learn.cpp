#include "tdif/learn.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>

namespace tdif {

Objective objective_from_name(const std::string& name) {
  if (name == "sequential") return Objective::kSequential;
  if (name == "listwise") return Objective::kListwise;
  throw DataError("unknown objective " + name);
}

std::string objective_name(Objective o) {
  return o == Objective::kSequential ? "sequential" : "listwise";
}

std::vector<std::string> build_ideal_sequence(const Topic& topic,
                                              std::span<const std::string> pool,
                                              const Qrels& qrels, const MetricParams& params,
                                              int k) {
  auto t = qrels.judgments.find(topic.id);
  if (t == qrels.judgments.end()) return {};

  // restrict the qrels view to the pool, then reuse the metrics-side
  // greedy gain maximizer
  Qrels view;
  auto& docs = view.judgments[topic.id];
  for (const auto& id : pool) {
    auto j = t->second.find(id);
    if (j == t->second.end()) continue;
    docs.emplace(id, j->second);
    auto rg = qrels.recency_grade.find({topic.id, id});
    if (rg != qrels.recency_grade.end()) view.recency_grade[{topic.id, id}] = rg->second;
    auto cg = qrels.confidence_grade.find(id);
    if (cg != qrels.confidence_grade.end()) view.confidence_grade[id] = cg->second;
  }
  MetricParams p = params;
  p.cutoff = k;
  return ideal_ranking(topic, view, p);
}

namespace {

double dot8(const std::array<double, kNumRelFeatures>& a,
            const std::array<double, kNumRelFeatures>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot3(const std::array<double, kNumDivFeatures>& a,
            const std::array<double, kNumDivFeatures>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Walks the teacher-forced steps, handing each step's candidate scores
// to `consume(step, remaining_indices, scores, target_pos)`.
template <typename F>
void for_each_step(const WeightVector& w, const TrainingInstance& inst, F&& consume) {
  const std::size_t n = inst.doc_ids.size();
  std::vector<bool> in_prefix(n, false);
  std::vector<std::size_t> remaining;
  std::vector<double> scores;
  for (std::size_t s = 0; s < inst.ideal.size(); ++s) {
    remaining.clear();
    scores.clear();
    std::size_t target_pos = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (in_prefix[c]) continue;
      double f = dot8(inst.x[c], w.omega_r);
      if (s > 0) f += dot3(inst.step_h[s][c], w.omega_d);
      if (c == inst.ideal[s]) target_pos = remaining.size();
      remaining.push_back(c);
      scores.push_back(f);
    }
    consume(s, remaining, scores, target_pos);
    in_prefix[inst.ideal[s]] = true;
  }
}

}  // namespace

double sequential_log_likelihood(const WeightVector& weights, const TrainingInstance& instance) {
  double ll = 0.0;
  for_each_step(weights, instance,
                [&](std::size_t, const std::vector<std::size_t>&, const std::vector<double>& f,
                    std::size_t target) {
                  double mx = *std::max_element(f.begin(), f.end());
                  double sum = 0.0;
                  for (double v : f) sum += std::exp(v - mx);
                  ll += f[target] - mx - std::log(sum);
                });
  return ll;
}

WeightGradient sequential_gradient(const WeightVector& weights, const TrainingInstance& instance) {
  WeightGradient grad;
  for_each_step(weights, instance,
                [&](std::size_t s, const std::vector<std::size_t>& remaining,
                    const std::vector<double>& f, std::size_t target) {
                  double mx = *std::max_element(f.begin(), f.end());
                  double sum = 0.0;
                  std::vector<double> e(f.size());
                  for (std::size_t i = 0; i < f.size(); ++i) {
                    e[i] = std::exp(f[i] - mx);
                    sum += e[i];
                  }
                  for (std::size_t i = 0; i < f.size(); ++i) {
                    double p = e[i] / sum;
                    std::size_t c = remaining[i];
                    for (std::size_t d = 0; d < kNumRelFeatures; ++d) {
                      grad.omega_r[d] -= p * instance.x[c][d];
                    }
                    if (s > 0) {
                      for (std::size_t d = 0; d < kNumDivFeatures; ++d) {
                        grad.omega_d[d] -= p * instance.step_h[s][c][d];
                      }
                    }
                  }
                  std::size_t t = remaining[target];
                  for (std::size_t d = 0; d < kNumRelFeatures; ++d) {
                    grad.omega_r[d] += instance.x[t][d];
                  }
                  if (s > 0) {
                    for (std::size_t d = 0; d < kNumDivFeatures; ++d) {
                      grad.omega_d[d] += instance.step_h[s][t][d];
                    }
                  }
                });
  return grad;
}

namespace {

// Plackett-Luce over the label-sorted permutation; O(n) per instance via
// suffix sums of exp(f) and prefix sums of their reciprocals.
double listwise_ll_grad(const WeightVector& w, const TrainingInstance& inst,
                        const std::vector<std::size_t>& perm, WeightGradient* grad) {
  const std::size_t n = perm.size();
  if (n == 0) return 0.0;
  std::vector<double> f(n);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = dot8(inst.x[perm[i]], w.omega_r);
    mx = std::max(mx, f[i]);
  }
  std::vector<double> e(n), suffix(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    e[i] = std::exp(f[i] - mx);
    acc += e[i];
    suffix[i] = acc;
  }
  double ll = 0.0;
  double inv_acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ll += (f[i] - mx) - std::log(suffix[i]);
    if (grad) {
      inv_acc += 1.0 / suffix[i];
      double coeff = 1.0 - e[i] * inv_acc;  // own term minus summed softmax mass
      for (std::size_t d = 0; d < kNumRelFeatures; ++d) {
        grad->omega_r[d] += coeff * inst.x[perm[i]][d];
      }
    }
  }
  return ll;
}

std::vector<std::size_t> listwise_permutation(const TrainingInstance& inst, std::uint64_t seed) {
  std::vector<std::size_t> perm(inst.doc_ids.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return inst.label[a] > inst.label[b]; });
  return perm;
}

}  // namespace

FitResult fit_weights(std::span<const TrainingInstance> instances, Objective objective,
                      const FitParams& params) {
  if (instances.empty()) throw DataError("fit_weights: no training instances");

  std::vector<std::vector<std::size_t>> perms;
  if (objective == Objective::kListwise) {
    perms.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      perms.push_back(listwise_permutation(instances[i], params.seed + i));
    }
  }

  FitResult out;
  WeightVector& w = out.weights;
  int decreases = 0;
  for (int iter = 0; iter < params.iters; ++iter) {
    WeightGradient grad;
    double ll = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (objective == Objective::kSequential) {
        ll += sequential_log_likelihood(w, instances[i]);
        WeightGradient g = sequential_gradient(w, instances[i]);
        for (std::size_t d = 0; d < kNumRelFeatures; ++d) grad.omega_r[d] += g.omega_r[d];
        for (std::size_t d = 0; d < kNumDivFeatures; ++d) grad.omega_d[d] += g.omega_d[d];
      } else {
        ll += listwise_ll_grad(w, instances[i], perms[i], &grad);
      }
    }
    if (!std::isfinite(ll)) {
      throw DataError("fit_weights diverged (likelihood is no longer finite); use a smaller lr");
    }
    if (!out.likelihood_trace.empty() && ll < out.likelihood_trace.back()) {
      if (++decreases >= 10) {
        throw DataError("fit_weights diverged (likelihood fell 10 iterations in a row); "
                        "use a smaller lr");
      }
    } else {
      decreases = 0;
    }
    out.likelihood_trace.push_back(ll);
    for (std::size_t d = 0; d < kNumRelFeatures; ++d) w.omega_r[d] += params.lr * grad.omega_r[d];
    if (objective == Objective::kSequential) {
      for (std::size_t d = 0; d < kNumDivFeatures; ++d) {
        w.omega_d[d] += params.lr * grad.omega_d[d];
      }
    }
  }
  return out;
}

TrainingInstance make_training_instance(const Topic& topic, std::vector<Document> pool,
                                        const CorpusStats& stats, const FeatureParams& fparams,
                                        const Qrels& qrels, const MetricParams& gain_params,
                                        int k, std::uint64_t seed) {
  TrainingInstance inst;
  inst.topic_id = topic.id;

  const std::size_t n = pool.size();
  std::vector<std::string> pool_ids;
  pool_ids.reserve(n);
  for (const auto& d : pool) pool_ids.push_back(d.id);

  FeatureBundle features(topic, std::move(pool), {}, stats, fparams, seed);
  inst.doc_ids = pool_ids;
  inst.x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) inst.x.push_back(features.relevance(i).values);

  inst.label.resize(n, 0);
  auto t = qrels.judgments.find(topic.id);
  if (t != qrels.judgments.end()) {
    for (std::size_t i = 0; i < n; ++i) {
      auto j = t->second.find(inst.doc_ids[i]);
      if (j == t->second.end()) continue;
      for (const auto& [sub, g] : j->second) inst.label[i] = std::max(inst.label[i], g);
    }
  }

  auto ideal_ids = build_ideal_sequence(topic, pool_ids, qrels, gain_params, k);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(inst.doc_ids[i], i);
  for (const auto& id : ideal_ids) inst.ideal.push_back(index.at(id));

  // per-step running min of pairwise diversity against the ideal prefix
  inst.step_h.resize(inst.ideal.size());
  std::vector<std::array<double, kNumDivFeatures>> running(
      n, {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()});
  const KlScale& scale = features.kl_scale();
  for (std::size_t s = 1; s < inst.ideal.size(); ++s) {
    std::size_t added = inst.ideal[s - 1];
    for (std::size_t c = 0; c < n; ++c) {
      DiversityVector r = features.pair(c, added);
      for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
        running[c][f] = std::min(running[c][f], r[f]);
      }
    }
    auto& row = inst.step_h[s];
    row.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      row[c] = {running[c][kCosineDiv], running[c][kJaccardDiv],
                scale.apply(running[c][kSubtopicKl])};
    }
  }
  return inst;
}

std::vector<TrainingInstance> build_training_set(std::span<const Topic> topics,
                                                 std::vector<Document> stream, const Qrels& qrels,
                                                 const FeatureParams& fparams,
                                                 const MetricParams& gain_params, int k,
                                                 std::int64_t window_length_ms,
                                                 std::uint64_t seed) {
  if (window_length_ms <= 0) throw DataError("window_length must be positive");
  std::vector<TrainingInstance> instances;
  if (stream.empty()) return instances;

  std::stable_sort(stream.begin(), stream.end(), [](const Document& a, const Document& b) {
    return a.epoch_ms < b.epoch_ms;
  });
  const std::int64_t anchor = stream.front().epoch_ms;
  std::vector<Document> pool;
  for (const Document& d : stream) {
    if (d.epoch_ms - anchor >= window_length_ms) break;
    if (!d.tokens.empty()) pool.push_back(d);
  }
  CorpusStats stats = build_stats(pool);

  for (const Topic& topic : topics) {
    TrainingInstance inst = make_training_instance(topic, pool, stats, fparams, qrels,
                                                   gain_params, k, seed ^ fnv1a(topic.id));
    if (inst.ideal.empty()) {
      std::cerr << "warning: topic " << topic.id
                << " has no relevant training documents; skipping\n";
      continue;
    }
    instances.push_back(std::move(inst));
  }
  return instances;
}

}  // namespace tdif
