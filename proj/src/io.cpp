#include "tdif/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tdif {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void append_run_windows(std::ostream& out, const std::string& topic_id,
                        std::span<const WindowResult> windows) {
  for (const WindowResult& wr : windows) {
    int rank = 0;
    for (const ScoredItem& item : wr.result.items) {
      out << topic_id << '\t' << wr.window_index << '\t' << ++rank << '\t' << item.doc_id << '\t'
          << item.epoch_ms << '\t' << format_double(item.utility_at_selection) << '\n';
    }
  }
}

void write_run_file(const std::string& path, const std::string& topic_id,
                    std::span<const WindowResult> windows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write run file " + path);
  append_run_windows(out, topic_id, windows);
}

std::vector<RunItem> read_run_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run file " + path);
  std::vector<RunItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    RunItem item;
    if (!(ss >> item.topic_id >> item.window_index >> item.rank >> item.doc_id >>
          item.epoch_ms >> item.utility)) {
      throw DataError("run file " + path + " line " + std::to_string(line_no) + ": malformed");
    }
    items.push_back(std::move(item));
  }
  return items;
}

void save_weights(const std::string& path, const WeightVector& weights,
                  const std::string& objective, const std::string& trained_on) {
  nlohmann::json j;
  j["schema_version"] = weights.schema_version;
  j["omega_r"] = weights.omega_r;
  j["omega_d"] = weights.omega_d;
  j["objective"] = objective;
  j["trained_on"] = trained_on;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write weights file " + path);
  out << j.dump(2) << '\n';
}

LoadedWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weights file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed weights file " + path);
  LoadedWeights lw;
  lw.weights.schema_version = j.at("schema_version").get<int>();
  if (lw.weights.schema_version != kFeatureSchemaVersion) {
    throw DataError("weights file " + path + " has schema version " +
                    std::to_string(lw.weights.schema_version) + ", expected " +
                    std::to_string(kFeatureSchemaVersion));
  }
  auto omega_r = j.at("omega_r").get<std::vector<double>>();
  auto omega_d = j.at("omega_d").get<std::vector<double>>();
  if (omega_r.size() != kNumRelFeatures || omega_d.size() != kNumDivFeatures) {
    throw DataError("weights file " + path + " has wrong vector lengths");
  }
  std::copy(omega_r.begin(), omega_r.end(), lw.weights.omega_r.begin());
  std::copy(omega_d.begin(), omega_d.end(), lw.weights.omega_d.begin());
  lw.objective = j.value("objective", "");
  lw.trained_on = j.value("trained_on", "");
  return lw;
}

Qrels load_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open qrels file " + path);
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string topic_id, subtopic_id, doc_id;
    int grade;
    if (!(ss >> topic_id >> subtopic_id >> doc_id >> grade)) {
      throw DataError("qrels " + path + " line " + std::to_string(line_no) + ": malformed");
    }
    if (grade < 0 || grade > 2) {
      throw DataError("qrels " + path + " line " + std::to_string(line_no) +
                      ": grade out of range");
    }
    qrels.judgments[topic_id][doc_id][subtopic_id] = grade;
  }
  return qrels;
}

void save_qrels(const std::string& path, const Qrels& qrels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write qrels file " + path);
  for (const auto& [topic_id, docs] : qrels.judgments) {
    for (const auto& [doc_id, subs] : docs) {
      for (const auto& [subtopic_id, grade] : subs) {
        out << topic_id << '\t' << subtopic_id << '\t' << doc_id << '\t' << grade << '\n';
      }
    }
  }
}

void load_qrels_sidecar(const std::string& path, Qrels& qrels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open qrels sidecar " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string topic_id, doc_id;
    int t_rcy, u_r;
    if (!(ss >> topic_id >> doc_id >> t_rcy >> u_r)) {
      throw DataError("sidecar " + path + " line " + std::to_string(line_no) + ": malformed");
    }
    if (t_rcy < 0 || t_rcy > 2 || u_r < 1 || u_r > 3) {
      throw DataError("sidecar " + path + " line " + std::to_string(line_no) +
                      ": grade out of range");
    }
    qrels.recency_grade[{topic_id, doc_id}] = t_rcy;
    qrels.confidence_grade[doc_id] = u_r;
  }
}

void save_qrels_sidecar(const std::string& path, const Qrels& qrels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write qrels sidecar " + path);
  for (const auto& [key, t_rcy] : qrels.recency_grade) {
    const auto& [topic_id, doc_id] = key;
    int u_r = qrels.confidence(doc_id);
    out << topic_id << '\t' << doc_id << '\t' << t_rcy << '\t' << u_r << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> load_config_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DataError("config " + path + " line " + std::to_string(line_no) +
                      ": expected key=value");
    }
    pairs.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return pairs;
}

void apply_feature_config(FeatureParams& params,
                          std::span<const std::pair<std::string, std::string>> pairs) {
  for (const auto& [key, value] : pairs) {
    try {
      if (key == "k1") params.k1 = std::stod(value);
      else if (key == "b") params.b = std::stod(value);
      else if (key == "mu") params.mu = std::stod(value);
      else if (key == "lambda_r") params.lambda_r = std::stod(value);
      else if (key == "mrf_ordered_window") params.mrf_ordered_window = std::stoi(value);
      else if (key == "mrf_unordered_window") params.mrf_unordered_window = std::stoi(value);
      else if (key == "plsa_topics") params.plsa_topics = std::stoi(value);
      else if (key == "plsa_max_iters") params.plsa_max_iters = std::stoi(value);
      else if (key == "plsa_tol") params.plsa_tol = std::stod(value);
      else if (key == "kl_eps") params.kl_eps = std::stod(value);
      // unknown keys are left for the caller (CLI-level settings)
    } catch (const std::exception&) {
      throw DataError("config value for " + key + " is not numeric: " + value);
    }
  }
}

void write_eval_csv(const std::string& path, const EvalResult& result,
                    const std::string& metric) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write eval file " + path);
  out << "topic_id,window_index,metric,value\n";
  for (const EvalRow& row : result.per_topic) {
    out << row.topic_id << ',' << row.window_index << ',' << metric << ','
        << format_double(row.value) << '\n';
  }
  for (const EvalRow& row : result.mean_per_window) {
    out << row.topic_id << ',' << row.window_index << ',' << metric << ','
        << format_double(row.value) << '\n';
  }
}

}  // namespace tdif
