// Command-line front end: synthesize benchmarks, train weights, run
// filtering strategies over a stream, evaluate run files and benchmark
// strategy timings.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "tdif/io.hpp"
#include "tdif/synth.hpp"

namespace fs = std::filesystem;
using namespace tdif;

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 42;
  bool seed_given = false;
};

std::uint64_t resolve_seed(const CommonOpts& opts,
                           const std::vector<std::pair<std::string, std::string>>& cfg) {
  for (const auto& [k, v] : cfg) {
    if (k == "seed") return std::stoull(v);
  }
  if (opts.seed_given) return opts.seed;
  if (const char* env = std::getenv("TDIF_SEED")) return std::stoull(env);
  return opts.seed;
}

// Config file values override flags.
std::vector<std::pair<std::string, std::string>> load_config(const std::string& path) {
  if (path.empty()) return {};
  return load_config_pairs(path);
}

Qrels load_qrels_with_sidecar(const std::string& qrels_path, const std::string& sidecar_path) {
  Qrels qrels = load_qrels(qrels_path);
  if (!sidecar_path.empty()) load_qrels_sidecar(sidecar_path, qrels);
  return qrels;
}

int cmd_synth(const SynthConfig& cfg, const std::string& out_dir) {
  SynthOutput out = synthesize(cfg);
  fs::create_directories(out_dir);
  write_jsonl((fs::path(out_dir) / "stream.jsonl").string(), out.stream);
  write_topics((fs::path(out_dir) / "topics.json").string(), out.topics);
  save_qrels((fs::path(out_dir) / "qrels.tsv").string(), out.qrels);
  save_qrels_sidecar((fs::path(out_dir) / "qrels_meta.tsv").string(), out.qrels);
  std::cout << "wrote " << out.stream.size() << " stream docs, " << out.topics.size()
            << " topics to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topic-focused dynamic information filtering"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic benchmark");
  SynthConfig synth_cfg;
  std::string synth_out;
  CommonOpts synth_common;
  synth->add_option("--topics", synth_cfg.topics, "number of topics");
  synth->add_option("--days", synth_cfg.days, "stream horizon in days");
  synth->add_option("--docs-per-day", synth_cfg.docs_per_day, "documents per topic per day");
  auto* synth_seed = synth->add_option("--seed", synth_common.seed, "generator seed");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--config", synth_common.config_path, "key=value config file");

  // ---- train ----
  auto* train = app.add_subcommand("train", "fit utility weights on the first stream window");
  std::string train_stream, train_topics, train_qrels, train_sidecar, train_out;
  std::string train_objective = "sequential", train_gain = "classic";
  FitParams train_fit;
  int train_k = 20;
  double train_window_hours = 48.0;
  CommonOpts train_common;
  train->add_option("--stream", train_stream)->required();
  train->add_option("--topics", train_topics)->required();
  train->add_option("--qrels", train_qrels)->required();
  train->add_option("--sidecar", train_sidecar, "recency/confidence sidecar TSV");
  train->add_option("--objective", train_objective, "sequential|listwise");
  train->add_option("--gain", train_gain, "classic|dynamic ideal-sequence gain");
  train->add_option("--k", train_k, "ideal sequence length");
  train->add_option("--window-hours", train_window_hours, "training window length");
  train->add_option("--lr", train_fit.lr, "learning rate");
  train->add_option("--iters", train_fit.iters, "gradient ascent iterations");
  auto* train_seed = train->add_option("--seed", train_common.seed);
  train->add_option("--out", train_out, "weights JSON path")->required();
  train->add_option("--config", train_common.config_path, "key=value config file");

  // ---- run ----
  auto* run = app.add_subcommand("run", "run a filtering strategy over a stream");
  std::string run_stream_path, run_topics_path, run_weights, run_out;
  std::string run_strategy = "dp";
  StreamRunConfig run_cfg;
  double run_window_hours = 48.0;
  CommonOpts run_common;
  run->add_option("--stream", run_stream_path)->required();
  run->add_option("--topics", run_topics_path)->required();
  run->add_option("--weights", run_weights)->required();
  run->add_option("--strategy", run_strategy, "dp|toprel|allbatch");
  run->add_option("--k", run_cfg.k, "result set size");
  run->add_option("--m", run_cfg.m, "new items admitted per window (dp)");
  run->add_option("--window-hours", run_window_hours, "window length in hours");
  auto* run_seed = run->add_option("--seed", run_common.seed);
  run->add_option("--out", run_out, "run file path")->required();
  run->add_option("--config", run_common.config_path, "key=value config file");

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "score a run file with a diversity measure");
  std::string eval_run, eval_qrels, eval_sidecar, eval_topics, eval_stream, eval_out;
  std::string eval_metric = "alpha-ndcg";
  MetricParams eval_params;
  double eval_window_hours = 48.0;
  CommonOpts eval_common;
  eval->add_option("--run", eval_run)->required();
  eval->add_option("--qrels", eval_qrels)->required();
  eval->add_option("--topics", eval_topics)->required();
  eval->add_option("--metric", eval_metric, "alpha-ndcg|err-ia|nrbp|d-ndcg|d-err|d-nrbp");
  eval->add_option("--alpha", eval_params.alpha);
  eval->add_option("--gamma", eval_params.gamma);
  eval->add_option("--beta", eval_params.beta);
  eval->add_option("--cutoff", eval_params.cutoff);
  eval->add_flag("--raw-recency", eval_params.raw_recency,
                 "exponentiate gamma by the raw lag in hours");
  eval->add_option("--sidecar", eval_sidecar, "recency/confidence sidecar TSV");
  eval->add_option("--stream", eval_stream,
                   "stream JSONL; enables per-window recency grading");
  eval->add_option("--window-hours", eval_window_hours);
  eval->add_option("--out", eval_out, "scores CSV path")->required();
  eval->add_option("--config", eval_common.config_path, "key=value config file");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "per-strategy timing and utility-evaluation counts");
  std::string bench_stream, bench_topics, bench_weights, bench_out;
  std::string bench_strategies = "dp,toprel,allbatch";
  StreamRunConfig bench_cfg;
  double bench_window_hours = 48.0;
  CommonOpts bench_common;
  bench->add_option("--stream", bench_stream)->required();
  bench->add_option("--topics", bench_topics)->required();
  bench->add_option("--weights", bench_weights)->required();
  bench->add_option("--strategies", bench_strategies, "comma-separated strategy list");
  bench->add_option("--k", bench_cfg.k);
  bench->add_option("--m", bench_cfg.m);
  bench->add_option("--window-hours", bench_window_hours);
  auto* bench_seed = bench->add_option("--seed", bench_common.seed);
  bench->add_option("--out", bench_out, "timing CSV path")->required();
  bench->add_option("--config", bench_common.config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      synth_common.seed_given = synth_seed->count() > 0;
      auto cfg = load_config(synth_common.config_path);
      for (const auto& [k, v] : cfg) {
        if (k == "topics") synth_cfg.topics = std::stoi(v);
        else if (k == "days") synth_cfg.days = std::stoi(v);
        else if (k == "docs_per_day") synth_cfg.docs_per_day = std::stoi(v);
      }
      synth_cfg.seed = resolve_seed(synth_common, cfg);
      return cmd_synth(synth_cfg, synth_out);
    }

    if (train->parsed()) {
      train_common.seed_given = train_seed->count() > 0;
      auto cfg = load_config(train_common.config_path);
      FeatureParams fparams;
      apply_feature_config(fparams, cfg);
      for (const auto& [k, v] : cfg) {
        if (k == "objective") train_objective = v;
        else if (k == "gain") train_gain = v;
        else if (k == "k") train_k = std::stoi(v);
        else if (k == "window_hours") train_window_hours = std::stod(v);
        else if (k == "lr") train_fit.lr = std::stod(v);
        else if (k == "iters") train_fit.iters = std::stoi(v);
      }
      train_fit.seed = resolve_seed(train_common, cfg);

      auto stream = ingest_jsonl(train_stream);
      auto topics = load_topics(train_topics);
      Qrels qrels = load_qrels_with_sidecar(train_qrels, train_sidecar);
      resolve_grades_from_stream(qrels, topics, stream);

      MetricParams gain_params;
      if (train_gain == "dynamic") gain_params.dynamic = true;
      else if (train_gain != "classic") throw DataError("unknown gain mode " + train_gain);

      auto instances = build_training_set(
          topics, std::move(stream), qrels, fparams, gain_params, train_k,
          static_cast<std::int64_t>(train_window_hours * 3600.0 * 1000.0), train_fit.seed);
      FitResult fit = fit_weights(instances, objective_from_name(train_objective), train_fit);
      save_weights(train_out, fit.weights, train_objective, train_stream);
      std::cout << "trained " << train_objective << " weights on " << instances.size()
                << " topics; final log-likelihood "
                << format_double(fit.likelihood_trace.back()) << "\n";
      return 0;
    }

    if (run->parsed()) {
      run_common.seed_given = run_seed->count() > 0;
      auto cfg = load_config(run_common.config_path);
      apply_feature_config(run_cfg.features, cfg);
      for (const auto& [k, v] : cfg) {
        if (k == "strategy") run_strategy = v;
        else if (k == "k") run_cfg.k = std::stoi(v);
        else if (k == "m") run_cfg.m = std::stoi(v);
        else if (k == "window_hours") run_window_hours = std::stod(v);
      }
      run_cfg.seed = resolve_seed(run_common, cfg);
      run_cfg.strategy = strategy_from_name(run_strategy);
      run_cfg.window_length_ms = static_cast<std::int64_t>(run_window_hours * 3600.0 * 1000.0);

      auto stream = ingest_jsonl(run_stream_path);
      auto topics = load_topics(run_topics_path);
      WeightVector weights = load_weights(run_weights).weights;

      std::ofstream out(run_out);
      if (!out) throw DataError("cannot write run file " + run_out);
      for (const Topic& topic : topics) {
        auto windows = run_stream(topic, stream, run_cfg, weights);
        append_run_windows(out, topic.id, windows);
      }
      return 0;
    }

    if (eval->parsed()) {
      auto cfg = load_config(eval_common.config_path);
      for (const auto& [k, v] : cfg) {
        if (k == "metric") eval_metric = v;
        else if (k == "alpha") eval_params.alpha = std::stod(v);
        else if (k == "gamma") eval_params.gamma = std::stod(v);
        else if (k == "beta") eval_params.beta = std::stod(v);
        else if (k == "cutoff") eval_params.cutoff = std::stoi(v);
        else if (k == "window_hours") eval_window_hours = std::stod(v);
      }
      MetricParams named = metric_params_from_name(eval_metric);
      eval_params.discount = named.discount;
      eval_params.dynamic = named.dynamic;

      auto run_items = read_run_file(eval_run);
      auto topics = load_topics(eval_topics);
      Qrels qrels = load_qrels_with_sidecar(eval_qrels, eval_sidecar);

      EvalResult result;
      if (!eval_stream.empty()) {
        auto stream = ingest_jsonl(eval_stream);
        resolve_grades_from_stream(qrels, topics, stream);
        StreamEvalContext ctx = StreamEvalContext::from_stream(
            stream, static_cast<std::int64_t>(eval_window_hours * 3600.0 * 1000.0));
        result = evaluate_run(run_items, topics, qrels, eval_params, &ctx);
      } else {
        result = evaluate_run(run_items, topics, qrels, eval_params);
      }
      write_eval_csv(eval_out, result, metric_name(eval_params));
      return 0;
    }

    if (bench->parsed()) {
      bench_common.seed_given = bench_seed->count() > 0;
      auto cfg = load_config(bench_common.config_path);
      apply_feature_config(bench_cfg.features, cfg);
      bench_cfg.seed = resolve_seed(bench_common, cfg);
      bench_cfg.window_length_ms =
          static_cast<std::int64_t>(bench_window_hours * 3600.0 * 1000.0);

      auto stream = ingest_jsonl(bench_stream);
      auto topics = load_topics(bench_topics);
      WeightVector weights = load_weights(bench_weights).weights;

      std::ofstream out(bench_out);
      if (!out) throw DataError("cannot write bench file " + bench_out);
      out << "strategy,topic_id,windows,mean_window_ms,total_ms,utility_evals\n";
      std::stringstream strategies(bench_strategies);
      std::string name;
      while (std::getline(strategies, name, ',')) {
        StreamRunConfig cfg_s = bench_cfg;
        cfg_s.strategy = strategy_from_name(name);
        double all_mean = 0.0;
        std::uint64_t all_evals = 0;
        for (const Topic& topic : topics) {
          auto windows = run_stream(topic, stream, cfg_s, weights);
          double total = 0.0;
          std::uint64_t evals = 0;
          for (const auto& w : windows) {
            total += w.wall_ms;
            evals += w.utility_evals;
          }
          double mean = windows.empty() ? 0.0 : total / windows.size();
          all_mean += mean;
          all_evals += evals;
          out << name << ',' << topic.id << ',' << windows.size() << ','
              << format_double(mean) << ',' << format_double(total) << ',' << evals << '\n';
        }
        if (!topics.empty()) {
          out << name << ",ALL,0," << format_double(all_mean / topics.size()) << ",0.000000,"
              << all_evals << '\n';
        }
      }
      return 0;
    }
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
