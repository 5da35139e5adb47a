#include "tdif/plsa.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace tdif {
namespace {

// (term_index, count) pairs in first-occurrence order — fixed iteration
// order keeps fits bit-identical across runs.
std::vector<std::pair<int, double>> count_terms(const std::vector<std::string>& tokens,
                                                const std::unordered_map<std::string, int>& index) {
  std::vector<std::pair<int, double>> counts;
  for (const auto& tok : tokens) {
    auto it = index.find(tok);
    if (it == index.end()) continue;
    bool found = false;
    for (auto& [t, c] : counts) {
      if (t == it->second) {
        c += 1.0;
        found = true;
        break;
      }
    }
    if (!found) counts.emplace_back(it->second, 1.0);
  }
  return counts;
}

void normalize(std::vector<double>& row) {
  double sum = 0.0;
  for (double v : row) sum += v;
  if (sum > 0) {
    for (double& v : row) v /= sum;
  } else if (!row.empty()) {
    for (double& v : row) v = 1.0 / static_cast<double>(row.size());
  }
}

}  // namespace

PlsaModel plsa_fit(std::span<const Document> documents, int num_topics, int max_iters,
                   double tol, std::uint64_t seed) {
  if (documents.empty()) throw DataError("plsa_fit: no documents");
  if (num_topics < 1) throw DataError("plsa_fit: num_topics must be >= 1");
  for (const Document& d : documents) {
    if (d.tokens.empty()) throw DataError("plsa_fit: empty document " + d.id);
  }

  PlsaModel model;
  model.num_topics_ = num_topics;
  for (const Document& d : documents) {
    if (!model.doc_index_.emplace(d.id, static_cast<int>(model.doc_ids_.size())).second) {
      throw DataError("plsa_fit: duplicate doc_id " + d.id);
    }
    model.doc_ids_.push_back(d.id);
    for (const auto& tok : d.tokens) {
      if (model.term_index_.emplace(tok, static_cast<int>(model.vocab_.size())).second) {
        model.vocab_.push_back(tok);
      }
    }
  }
  const int V = static_cast<int>(model.vocab_.size());
  const int D = static_cast<int>(documents.size());
  const int Z = num_topics;

  std::vector<std::vector<std::pair<int, double>>> doc_terms(D);
  std::vector<double> doc_len(D);
  for (int d = 0; d < D; ++d) {
    doc_terms[d] = count_terms(documents[d].tokens, model.term_index_);
    doc_len[d] = static_cast<double>(documents[d].tokens.size());
  }

  // Seeded uniform-plus-noise init breaks topic symmetry deterministically.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double noise = 1e-2;
  model.p_w_z_.assign(Z, std::vector<double>(V));
  for (int z = 0; z < Z; ++z) {
    for (int w = 0; w < V; ++w) model.p_w_z_[z][w] = 1.0 + noise * unit(rng);
    normalize(model.p_w_z_[z]);
  }
  model.p_z_d_.assign(D, std::vector<double>(Z));
  for (int d = 0; d < D; ++d) {
    for (int z = 0; z < Z; ++z) model.p_z_d_[d][z] = 1.0 + noise * unit(rng);
    normalize(model.p_z_d_[d]);
  }

  std::vector<std::vector<double>> next_pwz(Z, std::vector<double>(V));
  std::vector<double> post(Z);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (auto& row : next_pwz) std::fill(row.begin(), row.end(), 0.0);
    double ll = 0.0;
    for (int d = 0; d < D; ++d) {
      std::vector<double> next_pzd(Z, 0.0);
      for (const auto& [w, n] : doc_terms[d]) {
        double denom = 0.0;
        for (int z = 0; z < Z; ++z) {
          post[z] = model.p_z_d_[d][z] * model.p_w_z_[z][w];
          denom += post[z];
        }
        ll += n * std::log(denom);
        for (int z = 0; z < Z; ++z) {
          double weighted = n * post[z] / denom;
          next_pwz[z][w] += weighted;
          next_pzd[z] += weighted;
        }
      }
      for (int z = 0; z < Z; ++z) model.p_z_d_[d][z] = next_pzd[z] / doc_len[d];
    }
    for (int z = 0; z < Z; ++z) normalize(next_pwz[z]);
    model.p_w_z_ = next_pwz;

    model.ll_trace_.push_back(ll);
    if (iter > 0 && ll - model.ll_trace_[iter - 1] < tol) break;
  }
  return model;
}

double PlsaModel::p_word_given_topic(int z, const std::string& term) const {
  auto it = term_index_.find(term);
  if (it == term_index_.end()) return 0.0;
  return p_w_z_[z][it->second];
}

std::vector<double> PlsaModel::p_topic_given_doc(const std::string& doc_id) const {
  auto it = doc_index_.find(doc_id);
  if (it == doc_index_.end()) throw DataError("plsa: unknown document " + doc_id);
  return p_z_d_[it->second];
}

std::vector<double> PlsaModel::word_averaged_posterior(std::span<const std::string> tokens,
                                                       std::span<const double> p_z_d) const {
  std::vector<double> acc(num_topics_, 0.0);
  std::vector<double> post(num_topics_);
  int known = 0;
  for (const auto& tok : tokens) {
    auto it = term_index_.find(tok);
    if (it == term_index_.end()) continue;
    int w = it->second;
    double denom = 0.0;
    for (int z = 0; z < num_topics_; ++z) {
      post[z] = p_z_d[z] * p_w_z_[z][w];
      denom += post[z];
    }
    if (denom <= 0) continue;
    ++known;
    for (int z = 0; z < num_topics_; ++z) acc[z] += post[z] / denom;
  }
  if (known == 0) {
    std::fill(acc.begin(), acc.end(), 1.0 / static_cast<double>(num_topics_));
    return acc;
  }
  normalize(acc);
  return acc;
}

std::vector<double> PlsaModel::doc_topic_posterior(const Document& doc) const {
  auto it = doc_index_.find(doc.id);
  if (it == doc_index_.end()) {
    throw DataError("plsa: document " + doc.id + " not in the fitted pool (fold it in first)");
  }
  return word_averaged_posterior(doc.tokens, p_z_d_[it->second]);
}

std::vector<double> PlsaModel::fold_in(const Document& doc, int iters) {
  auto existing = doc_index_.find(doc.id);
  if (existing != doc_index_.end()) return p_z_d_[existing->second];

  std::vector<double> p_z(num_topics_, 1.0 / static_cast<double>(num_topics_));
  auto counts = count_terms(doc.tokens, term_index_);
  double known_len = 0.0;
  for (const auto& [w, n] : counts) known_len += n;
  std::vector<double> post(num_topics_);
  if (known_len > 0) {
    for (int it = 0; it < iters; ++it) {
      std::vector<double> next(num_topics_, 0.0);
      for (const auto& [w, n] : counts) {
        double denom = 0.0;
        for (int z = 0; z < num_topics_; ++z) {
          post[z] = p_z[z] * p_w_z_[z][w];
          denom += post[z];
        }
        if (denom <= 0) continue;
        for (int z = 0; z < num_topics_; ++z) next[z] += n * post[z] / denom;
      }
      for (int z = 0; z < num_topics_; ++z) next[z] /= known_len;
      double delta = 0.0;
      for (int z = 0; z < num_topics_; ++z) delta += std::abs(next[z] - p_z[z]);
      p_z = next;
      if (delta < 1e-10) break;
    }
  }
  doc_index_.emplace(doc.id, static_cast<int>(doc_ids_.size()));
  doc_ids_.push_back(doc.id);
  p_z_d_.push_back(p_z);
  return p_z;
}

std::string PlsaModel::to_json() const {
  nlohmann::json j;
  j["num_topics"] = num_topics_;
  j["vocabulary"] = vocab_;
  j["p_w_z"] = p_w_z_;
  nlohmann::json docs = nlohmann::json::object();
  for (const auto& id : doc_ids_) {
    docs[id] = p_z_d_[doc_index_.at(id)];
  }
  j["p_z_d"] = docs;
  j["log_likelihood_trace"] = ll_trace_;
  return j.dump(2);
}

PlsaModel PlsaModel::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed PLSA model JSON");
  PlsaModel model;
  model.num_topics_ = j.at("num_topics").get<int>();
  model.vocab_ = j.at("vocabulary").get<std::vector<std::string>>();
  for (int i = 0; i < static_cast<int>(model.vocab_.size()); ++i) {
    model.term_index_[model.vocab_[i]] = i;
  }
  model.p_w_z_ = j.at("p_w_z").get<std::vector<std::vector<double>>>();
  for (const auto& [id, row] : j.at("p_z_d").items()) {
    model.doc_index_[id] = static_cast<int>(model.doc_ids_.size());
    model.doc_ids_.push_back(id);
    model.p_z_d_.push_back(row.get<std::vector<double>>());
  }
  model.ll_trace_ = j.at("log_likelihood_trace").get<std::vector<double>>();
  return model;
}

}  // namespace tdif
