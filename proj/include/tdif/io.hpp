#pragma once

#include <string>
#include <vector>

#include "tdif/learn.hpp"
#include "tdif/metrics.hpp"
#include "tdif/relfeat.hpp"
#include "tdif/select.hpp"

namespace tdif {

// Run file (TSV): topic_id window_index rank doc_id epoch_ms utility,
// one block per window, rank in chronological display order.
void write_run_file(const std::string& path, const std::string& topic_id,
                    std::span<const WindowResult> windows);
void append_run_windows(std::ostream& out, const std::string& topic_id,
                        std::span<const WindowResult> windows);
std::vector<RunItem> read_run_file(const std::string& path);

// Weights JSON: {schema_version, omega_r[8], omega_d[3], objective, trained_on}.
void save_weights(const std::string& path, const WeightVector& weights,
                  const std::string& objective, const std::string& trained_on);
struct LoadedWeights {
  WeightVector weights;
  std::string objective;
  std::string trained_on;
};
LoadedWeights load_weights(const std::string& path);

// Qrels TSV: topic_id subtopic_id doc_id grade. Sidecar TSV:
// topic_id doc_id t_rcy u_r.
Qrels load_qrels(const std::string& path);
void save_qrels(const std::string& path, const Qrels& qrels);
void load_qrels_sidecar(const std::string& path, Qrels& qrels);
void save_qrels_sidecar(const std::string& path, const Qrels& qrels);

// Flat key=value config (feature parameters and run settings); '#' opens
// a comment line.
std::vector<std::pair<std::string, std::string>> load_config_pairs(const std::string& path);
void apply_feature_config(FeatureParams& params,
                          std::span<const std::pair<std::string, std::string>> pairs);

// Eval CSV: header topic_id,window_index,metric,value; per-topic rows
// then the per-window means with topic_id=ALL.
void write_eval_csv(const std::string& path, const EvalResult& result,
                    const std::string& metric);

std::string format_double(double v);

}  // namespace tdif
