#include "tdif/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "tdif/stem.hpp"

namespace tdif {
namespace {

constexpr std::int64_t kDay = 24ll * 3600 * 1000;

class WordMint {
 public:
  explicit WordMint(std::uint64_t seed) : rng_(seed) {}

  // letters-only pseudo-word whose porter stem collides with nothing
  // minted before
  std::string next() {
    std::uniform_int_distribution<int> len(5, 7);
    std::uniform_int_distribution<int> letter(0, 25);
    while (true) {
      std::string w;
      int n = len(rng_);
      for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('a' + letter(rng_)));
      if (stems_.insert(porter_stem(w)).second) return w;
    }
  }

 private:
  std::mt19937_64 rng_;
  std::set<std::string> stems_;
};

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

}  // namespace

SynthOutput synthesize(const SynthConfig& config) {
  if (config.topics <= 0 || config.days <= 0 || config.docs_per_day <= 0) {
    throw DataError("synth counts must be positive");
  }
  constexpr int kSubtopics = 4;
  constexpr int kQueryWords = 3;
  constexpr int kSubtopicWords = 5;
  constexpr int kBackgroundWords = 150;

  WordMint mint(config.seed);
  std::mt19937_64 rng(config.seed ^ 0xda3e39cb94b95bdbull);

  std::vector<std::string> background;
  background.reserve(kBackgroundWords);
  for (int i = 0; i < kBackgroundWords; ++i) background.push_back(mint.next());

  struct TopicVocab {
    std::vector<std::string> query;
    std::vector<std::vector<std::string>> subtopic;  // [kSubtopics][kSubtopicWords]
  };
  std::vector<TopicVocab> vocab(config.topics);
  for (auto& tv : vocab) {
    for (int i = 0; i < kQueryWords; ++i) tv.query.push_back(mint.next());
    tv.subtopic.resize(kSubtopics);
    for (auto& sub : tv.subtopic) {
      for (int i = 0; i < kSubtopicWords; ++i) sub.push_back(mint.next());
    }
  }

  SynthOutput out;
  const std::int64_t horizon_end = config.start_epoch_ms + config.days * kDay;
  for (int t = 0; t < config.topics; ++t) {
    Topic topic;
    topic.id = "T" + std::string(t + 1 < 10 ? "0" : "") + std::to_string(t + 1);
    topic.query = join(vocab[t].query);
    topic.query_tokens = tokenize(topic.query);
    topic.tracking_epoch_ms = horizon_end;
    for (int s = 0; s < kSubtopics; ++s) {
      topic.subtopics.push_back({"s" + std::to_string(s), 1.0 / kSubtopics});
    }
    out.topics.push_back(std::move(topic));
  }

  std::uniform_int_distribution<std::int64_t> in_day(0, kDay - 1);
  std::normal_distribution<double> follower_log(5.0, 2.0);
  std::normal_distribution<double> retweet_log(2.0, 1.5);
  std::uniform_int_distribution<int> bg_pick(0, kBackgroundWords - 1);
  std::uniform_int_distribution<int> bg_len(8, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n_dup = std::max(1, config.docs_per_day * 15 / 100);
  const int n_div = std::max(2, config.docs_per_day * 20 / 100);

  int next_id = 0;
  auto make_doc = [&](const std::vector<std::string>& words, std::int64_t epoch) {
    Document d;
    int id = ++next_id;
    std::string num = std::to_string(id);
    d.id = "d" + std::string(6 - std::min<std::size_t>(6, num.size()), '0') + num;
    d.epoch_ms = epoch;
    d.raw_text = join(words);
    d.tokens = tokenize(d.raw_text);
    d.followers = static_cast<std::int64_t>(std::exp(follower_log(rng)));
    d.retweets = static_cast<std::int64_t>(std::exp(retweet_log(rng)));
    return d;
  };

  for (int t = 0; t < config.topics; ++t) {
    const TopicVocab& tv = vocab[t];
    const std::string& topic_id = out.topics[t].id;
    for (int day = 0; day < config.days; ++day) {
      const std::int64_t day_start = config.start_epoch_ms + day * kDay;
      const bool strong_day = day < 2;  // the training window holds the richest docs
      for (int slot = 0; slot < config.docs_per_day; ++slot) {
        std::int64_t epoch = day_start + in_day(rng);
        std::vector<std::string> words;
        if (slot < n_dup) {
          // near-duplicate cluster on subtopic 0: maximal query mass,
          // one rotating background word
          for (int rep = 0; rep < 3; ++rep) {
            words.insert(words.end(), tv.query.begin(), tv.query.end());
          }
          words.insert(words.end(), tv.subtopic[0].begin(), tv.subtopic[0].begin() + 3);
          words.push_back(background[slot % kBackgroundWords]);
          Document d = make_doc(words, epoch);
          out.qrels.judgments[topic_id][d.id]["s0"] = 2;
          out.stream.push_back(std::move(d));
        } else if (slot < n_dup + n_div) {
          // diverse relevant doc on a rotating non-dominant subtopic
          int s = 1 + (slot - n_dup) % (kSubtopics - 1);
          int reps = strong_day ? 2 : 1;
          int sub_words = strong_day ? kSubtopicWords : 3;
          for (int rep = 0; rep < reps; ++rep) {
            words.insert(words.end(), tv.query.begin(), tv.query.end());
          }
          int offset = slot % (kSubtopicWords - sub_words + 1);
          words.insert(words.end(), tv.subtopic[s].begin() + offset,
                       tv.subtopic[s].begin() + offset + sub_words);
          words.push_back(background[bg_pick(rng)]);
          words.push_back(background[bg_pick(rng)]);
          Document d = make_doc(words, epoch);
          out.qrels.judgments[topic_id][d.id]["s" + std::to_string(s)] = strong_day ? 2 : 1;
          out.stream.push_back(std::move(d));
        } else {
          // background chatter; one in ten mentions a query word without
          // being relevant
          int n = bg_len(rng);
          for (int i = 0; i < n; ++i) words.push_back(background[bg_pick(rng)]);
          if (unit(rng) < 0.1) words.push_back(tv.query[slot % kQueryWords]);
          out.stream.push_back(make_doc(words, epoch));
        }
      }
    }
  }

  std::sort(out.stream.begin(), out.stream.end(), [](const Document& a, const Document& b) {
    if (a.epoch_ms != b.epoch_ms) return a.epoch_ms < b.epoch_ms;
    return a.id < b.id;
  });

  resolve_grades_from_stream(out.qrels, out.topics, out.stream);
  return out;
}

}  // namespace tdif
