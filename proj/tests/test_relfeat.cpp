#include <doctest.h>

#include <cmath>
#include <random>

#include "tdif/relfeat.hpp"
#include "test_util.hpp"

using namespace tdif;
using test::doc_with_tokens;
using test::topic_with_query;

namespace {

// Independent naive scorers kept deliberately simple; the oracle side of
// the randomized agreement checks below.
double naive_bm25(const Topic& topic, const Document& doc, const CorpusStats& stats, double k1,
                  double b) {
  double total = 0.0;
  for (const auto& q : topic.query_tokens) {
    double tf = 0;
    for (const auto& t : doc.tokens) tf += t == q;
    if (tf == 0) continue;
    double df = stats.df(q);
    double idf = std::log((stats.doc_count - df + 0.5) / (df + 0.5) + 1.0);
    total += idf * tf * (k1 + 1.0) /
             (tf + k1 * (1.0 - b + b * doc.tokens.size() / stats.avg_doc_len()));
  }
  return total;
}

double naive_lm(const Topic& topic, const Document& doc, const CorpusStats& stats, double mu) {
  double total = 0.0;
  for (const auto& q : topic.query_tokens) {
    double tf = 0;
    for (const auto& t : doc.tokens) tf += t == q;
    double cf = stats.cf(q);
    double pc = cf > 0 ? cf / stats.total_tokens : 1.0 / (2.0 * stats.total_tokens);
    total += std::log((tf + mu * pc) / (doc.tokens.size() + mu));
  }
  return total;
}

// the 2-doc hand fixture shared by bm25/lm tests
struct Fixture {
  std::vector<Document> docs{doc_with_tokens("d1", {"x", "x", "y"}),
                             doc_with_tokens("d2", {"y", "z"})};
  Topic topic = topic_with_query("T", {"x", "y"});
  CorpusStats stats = build_stats(docs);
};

}  // namespace

TEST_CASE("tf_idf_score") {
  Fixture f;
  SUBCASE("absent query term contributes nothing") {
    Topic t = topic_with_query("T", {"nope"});
    CHECK(tf_idf_score(t, f.docs[0], f.stats) == 0.0);
  }
  SUBCASE("single-doc corpus idf vanishes") {
    std::vector<Document> one{doc_with_tokens("d", {"a"})};
    CorpusStats s = build_stats(one);
    Topic t = topic_with_query("T", {"a"});
    CHECK(tf_idf_score(t, one[0], s) == doctest::Approx(0.0));
  }
  SUBCASE("direct formula") {
    // tf=2, doc_count=10, df=4 -> 2*ln(11/5)
    std::vector<Document> docs;
    for (int i = 0; i < 10; ++i) {
      docs.push_back(doc_with_tokens("d" + std::to_string(i), i < 4 ? std::vector<std::string>{"a"}
                                                                    : std::vector<std::string>{"b"}));
    }
    CorpusStats s = build_stats(docs);
    Topic t = topic_with_query("T", {"a"});
    Document d = doc_with_tokens("q", {"a", "a"});
    CHECK(tf_idf_score(t, d, s) == doctest::Approx(1.5769147207285406).epsilon(1e-12));
  }
}

TEST_CASE("bm25_score") {
  Fixture f;
  SUBCASE("no query term -> 0") {
    Topic t = topic_with_query("T", {"w"});
    CHECK(bm25_score(t, f.docs[0], f.stats) == 0.0);
  }
  SUBCASE("hand-computed fixture") {
    CHECK(bm25_score(f.topic, f.docs[0], f.stats) ==
          doctest::Approx(1.0708543050001982).epsilon(1e-12));
    CHECK(bm25_score(f.topic, f.docs[1], f.stats) ==
          doctest::Approx(0.19856803215183175).epsilon(1e-12));
  }
  SUBCASE("tf saturation approaches idf*(k1+1)") {
    // two equally long docs so dl/avgdl = 1 and only tf saturates
    std::vector<std::string> xs(1000000, "x");
    std::vector<std::string> ys(1000000, "y");
    std::vector<Document> docs{doc_with_tokens("big", std::move(xs)),
                               doc_with_tokens("other", std::move(ys))};
    CorpusStats stats = build_stats(docs);
    Topic t = topic_with_query("T", {"x"});
    double df = stats.df("x");
    double bound = std::log((stats.doc_count - df + 0.5) / (df + 0.5) + 1.0) * (1.2 + 1.0);
    double score = bm25_score(t, docs[0], stats);
    CHECK(score < bound);
    CHECK(score == doctest::Approx(bound).epsilon(0.01));
  }
}

TEST_CASE("lm_dirichlet_score") {
  Fixture f;
  SUBCASE("empty collection errors") {
    CorpusStats empty;
    CHECK_THROWS_WITH_AS(lm_dirichlet_score(f.topic, f.docs[0], empty), "empty collection",
                         DataError);
  }
  SUBCASE("mle limit at tiny mu") {
    // all query terms in doc: sum ln(tf/|d|)
    double expect = std::log(2.0 / 3.0) + std::log(1.0 / 3.0);
    CHECK(lm_dirichlet_score(f.topic, f.docs[0], f.stats, 1e-9) ==
          doctest::Approx(expect).epsilon(1e-6));
  }
  SUBCASE("background-only case") {
    Document none = doc_with_tokens("n", {"w", "w"});
    double mu = 2500;
    double expect = 0.0;
    for (const char* q : {"x", "y"}) {
      double pc = static_cast<double>(f.stats.cf(q)) / f.stats.total_tokens;
      expect += std::log(mu * pc / (2 + mu));
    }
    CHECK(lm_dirichlet_score(f.topic, none, f.stats, mu) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("hand-computed fixture at mu=2") {
    CHECK(lm_dirichlet_score(f.topic, f.docs[0], f.stats, 2.0) ==
          doctest::Approx(-1.6014697427849236).epsilon(1e-12));
    CHECK(lm_dirichlet_score(f.topic, f.docs[1], f.stats, 2.0) ==
          doctest::Approx(-2.407945608651872).epsilon(1e-12));
  }
}

TEST_CASE("bm25 and lm agree with the naive oracle on random micro-corpora") {
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<int> vocab_size(2, 20);
  std::uniform_int_distribution<int> n_docs(1, 10);
  std::uniform_int_distribution<int> doc_len(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    int v = vocab_size(rng);
    std::uniform_int_distribution<int> term(0, v - 1);
    std::vector<Document> docs;
    int n = n_docs(rng);
    for (int d = 0; d < n; ++d) {
      std::vector<std::string> tokens;
      int len = doc_len(rng);
      for (int i = 0; i < len; ++i) tokens.push_back("t" + std::to_string(term(rng)));
      docs.push_back(doc_with_tokens("d" + std::to_string(d), std::move(tokens)));
    }
    CorpusStats stats = build_stats(docs);
    Topic topic = topic_with_query("T", {"t" + std::to_string(term(rng)),
                                         "t" + std::to_string(term(rng))});
    for (const Document& d : docs) {
      double impl = bm25_score(topic, d, stats);
      double oracle = naive_bm25(topic, d, stats, 1.2, 0.75);
      CHECK(impl == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(lm_dirichlet_score(topic, d, stats) ==
            doctest::Approx(naive_lm(topic, d, stats, 2500)).epsilon(1e-9));
    }
  }
}

TEST_CASE("mrf features") {
  Topic t = topic_with_query("T", {"a", "b"});
  SUBCASE("single-term query has no bigrams") {
    Topic single = topic_with_query("T", {"a"});
    Document d = doc_with_tokens("d", {"a", "a", "a"});
    CHECK(mrf_ordered(single, d) == 0.0);
    CHECK(mrf_unordered(single, d) == 0.0);
  }
  SUBCASE("adjacent pair counts once") {
    Document d = doc_with_tokens("d", {"a", "b", "c"});
    CHECK(mrf_ordered(t, d) == doctest::Approx(std::log(2.0)));
    CHECK(mrf_unordered(t, d) == doctest::Approx(std::log(2.0)));
  }
  SUBCASE("reversed pair is unordered-only") {
    Document d = doc_with_tokens("d", {"b", "x", "a"});
    CHECK(mrf_ordered(t, d) == 0.0);
    CHECK(mrf_unordered(t, d, 8) == doctest::Approx(std::log(2.0)));
  }
  SUBCASE("window limits the unordered span") {
    Document d = doc_with_tokens("d", {"a", "x", "x", "b"});
    CHECK(mrf_unordered(t, d, 3) == 0.0);
    CHECK(mrf_unordered(t, d, 4) == doctest::Approx(std::log(2.0)));
  }
}

TEST_CASE("recency feature") {
  Topic t = topic_with_query("T", {"q"}, 1000 * 3600 * 1000ll);
  SUBCASE("zero lag -> 1") {
    Document d = doc_with_tokens("d", {"q"}, t.tracking_epoch_ms);
    CHECK(recency_feature(t, d) == doctest::Approx(1.0));
  }
  SUBCASE("lag of 2/lambda hours -> e^-2") {
    double lambda = 0.02;
    Document d = doc_with_tokens(
        "d", {"q"}, t.tracking_epoch_ms - static_cast<std::int64_t>(2 / lambda * 3.6e6));
    CHECK(recency_feature(t, d, lambda) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  }
  SUBCASE("strictly decreasing in the lag") {
    double prev = 2.0;
    for (int hours : {0, 1, 5, 24, 100}) {
      Document d = doc_with_tokens("d", {"q"}, t.tracking_epoch_ms - hours * 3600000ll);
      double v = recency_feature(t, d);
      CHECK(v < prev);
      prev = v;
    }
  }
  SUBCASE("future document clamps and flags") {
    Document d = doc_with_tokens("d", {"q"}, t.tracking_epoch_ms + 1000);
    bool clamped = false;
    CHECK(recency_feature(t, d, 0.02, &clamped) == doctest::Approx(1.0));
    CHECK(clamped);
  }
}

TEST_CASE("user rank and retweet features") {
  CHECK(user_rank_feature(doc_with_tokens("d", {}, 0, 0)) == 0.0);
  CHECK(retweet_feature(doc_with_tokens("d", {}, 0, 0, 99)) ==
        doctest::Approx(std::log(100.0)).epsilon(1e-12));
  double prev = -1;
  for (int n : {0, 1, 10, 1000}) {
    double v = user_rank_feature(doc_with_tokens("d", {}, 0, n));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("assemble_relevance_vectors") {
  Topic topic = topic_with_query("T", {"x", "y"}, 100 * 3600 * 1000ll);
  SUBCASE("identical docs normalize to 0.5 everywhere") {
    std::vector<Document> docs;
    for (int i = 0; i < 3; ++i) {
      docs.push_back(doc_with_tokens("d" + std::to_string(i), {"x", "y"}, 50, 10, 5));
    }
    CorpusStats stats = build_stats(docs);
    auto vecs = assemble_relevance_vectors(topic, docs, stats, {});
    for (const auto& v : vecs) {
      for (std::size_t f = 0; f < kNumRelFeatures; ++f) CHECK(v[f] == 0.5);
    }
  }
  SUBCASE("normalized values live in [0,1] and extremes are hit") {
    std::vector<Document> docs{
        doc_with_tokens("a", {"x", "x", "y"}, 10, 100, 3),
        doc_with_tokens("b", {"y", "z"}, 3600000, 5, 0),
        doc_with_tokens("c", {"z", "w", "w"}, 7200000, 50000, 80),
    };
    CorpusStats stats = build_stats(docs);
    auto vecs = assemble_relevance_vectors(topic, docs, stats, {});
    REQUIRE(vecs.size() == 3);
    for (std::size_t f = 0; f < kNumRelFeatures; ++f) {
      double lo = 1e9, hi = -1e9;
      for (const auto& v : vecs) {
        CHECK(v[f] >= 0.0);
        CHECK(v[f] <= 1.0);
        lo = std::min(lo, v[f]);
        hi = std::max(hi, v[f]);
      }
      CHECK(lo == doctest::Approx(0.0));
      CHECK(hi == doctest::Approx(1.0));
    }
  }
}
