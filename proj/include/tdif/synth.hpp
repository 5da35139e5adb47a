#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdif/corpus.hpp"
#include "tdif/metrics.hpp"

namespace tdif {

// Seeded stream/topic/qrels generator standing in for a real tracked
// corpus. Construction places the strongest relevant documents in the
// first window and near-duplicate clusters in every window, so that
// diversity-aware strategies separate from relevance-only ones and
// fresh selections separate from batch re-ranking under the dynamic
// measures.
struct SynthConfig {
  int topics = 5;
  int days = 16;
  int docs_per_day = 200;  // per topic
  std::uint64_t seed = 42;
  std::int64_t start_epoch_ms = 1300000000000;
};

struct SynthOutput {
  std::vector<Document> stream;  // sorted by (epoch_ms, id)
  std::vector<Topic> topics;
  Qrels qrels;  // judgments + static recency/confidence grades
};

SynthOutput synthesize(const SynthConfig& config);

}  // namespace tdif
