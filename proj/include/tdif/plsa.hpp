#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdif/corpus.hpp"

namespace tdif {

// PLSA over (document, term) counts. Fitting is deterministic for a
// given (documents, num_topics, seed).
class PlsaModel {
 public:
  int num_topics() const { return num_topics_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const std::vector<double>& log_likelihood_trace() const { return ll_trace_; }

  // p(w|z), row-major [z][term_index]; each row sums to 1.
  double p_word_given_topic(int z, const std::string& term) const;
  // p(z|d) for a fitted document; rows sum to 1.
  std::vector<double> p_topic_given_doc(const std::string& doc_id) const;
  bool has_doc(const std::string& doc_id) const { return doc_index_.count(doc_id) > 0; }

  // Word-averaged E-step posterior of the document under the fitted
  // parameters: (1/|d|) * sum over tokens of p(z|d,w), normalized.
  std::vector<double> doc_topic_posterior(const Document& doc) const;

  // Estimates p(z|d) for an unseen document with p(w|z) frozen; the new
  // posterior is registered on the model. Terms outside the fitted
  // vocabulary are ignored; a document with no known terms stays uniform.
  std::vector<double> fold_in(const Document& doc, int iters = 50);

  std::string to_json() const;
  static PlsaModel from_json(const std::string& text);

  friend PlsaModel plsa_fit(std::span<const Document>, int, int, double, std::uint64_t);

 private:
  int num_topics_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> term_index_;
  std::unordered_map<std::string, int> doc_index_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<double>> p_w_z_;  // [z][term]
  std::vector<std::vector<double>> p_z_d_;  // [doc][z]
  std::vector<double> ll_trace_;

  std::vector<double> word_averaged_posterior(std::span<const std::string> tokens,
                                              std::span<const double> p_z_d) const;
};

// Standard EM. Stops after max_iters or when the log-likelihood gain
// drops below tol; the trace is non-decreasing. Documents must be
// non-empty (token-wise) and have unique ids.
PlsaModel plsa_fit(std::span<const Document> documents, int num_topics, int max_iters = 100,
                   double tol = 1e-4, std::uint64_t seed = 42);

}  // namespace tdif
