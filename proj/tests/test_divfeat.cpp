#include <doctest.h>

#include <cmath>
#include <random>

#include "tdif/divfeat.hpp"
#include "tdif/features.hpp"
#include "test_util.hpp"

using namespace tdif;
using test::doc_with_tokens;
using test::topic_with_query;

TEST_CASE("cosine_diversity") {
  std::vector<Document> docs{doc_with_tokens("a", {"x", "y"}),
                             doc_with_tokens("b", {"x", "y"}),
                             doc_with_tokens("c", {"p", "q"}),
                             doc_with_tokens("d", {"x", "p"})};
  CorpusStats stats = build_stats(docs);
  SUBCASE("identical docs -> 0") {
    CHECK(cosine_diversity(docs[0], docs[1], stats) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("disjoint vocabularies -> 1") {
    CHECK(cosine_diversity(docs[0], docs[2], stats) == doctest::Approx(1.0));
  }
  SUBCASE("fixture pair matches the direct computation") {
    // weights: idf(t) = ln(5/(df+1)); a=(x,y), d=(x,p)
    auto idf = [&](const char* t) { return std::log(5.0 / (stats.df(t) + 1)); };
    double dot = idf("x") * idf("x");
    double na = std::hypot(idf("x"), idf("y"));
    double nd = std::hypot(idf("x"), idf("p"));
    CHECK(cosine_diversity(docs[0], docs[3], stats) ==
          doctest::Approx(1.0 - dot / (na * nd)).epsilon(1e-12));
  }
  SUBCASE("empty doc -> 1 by convention") {
    Document none = doc_with_tokens("e", {});
    CHECK(cosine_diversity(docs[0], none, stats) == 1.0);
  }
}

TEST_CASE("jaccard_diversity") {
  CHECK(jaccard_diversity(doc_with_tokens("a", {"x", "y", "x"}),
                          doc_with_tokens("b", {"y", "x"})) == doctest::Approx(0.0));
  CHECK(jaccard_diversity(doc_with_tokens("a", {"a", "b"}), doc_with_tokens("b", {"b", "c"})) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(jaccard_diversity(doc_with_tokens("a", {"a"}), doc_with_tokens("b", {"b"})) ==
        doctest::Approx(1.0));
  CHECK(jaccard_diversity(doc_with_tokens("a", {}), doc_with_tokens("b", {})) == 0.0);
}

TEST_CASE("subtopic KL diversity") {
  SUBCASE("direct distribution fixture") {
    std::vector<double> p{0.9, 0.1}, q{0.1, 0.9};
    CHECK(kl_divergence(p, q) == doctest::Approx(1.7577690352592996).epsilon(1e-12));
    CHECK(kl_divergence(p, q) == doctest::Approx(1.7578).epsilon(1e-4));
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  }
  SUBCASE("asymmetry on a skewed fixture") {
    std::vector<double> p{0.7, 0.2, 0.1}, q{0.1, 0.1, 0.8};
    CHECK(kl_divergence(p, q) != doctest::Approx(kl_divergence(q, p)));
    CHECK(kl_divergence(p, q) >= 0.0);
    CHECK(kl_divergence(q, p) >= 0.0);
  }
  SUBCASE("non-negative on random distributions") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> p(4), q(4);
      double ps = 0, qs = 0;
      for (int i = 0; i < 4; ++i) {
        p[i] = unit(rng);
        q[i] = unit(rng);
        ps += p[i];
        qs += q[i];
      }
      for (int i = 0; i < 4; ++i) {
        p[i] /= ps;
        q[i] /= qs;
      }
      CHECK(kl_divergence(p, q) >= 0.0);
    }
  }
  SUBCASE("model-backed pair") {
    std::vector<Document> docs;
    for (int i = 0; i < 4; ++i) {
      docs.push_back(doc_with_tokens("a" + std::to_string(i), {"cat", "dog", "cat"}));
      docs.push_back(doc_with_tokens("b" + std::to_string(i), {"bond", "fund", "bond"}));
    }
    PlsaModel model = plsa_fit(docs, 2, 50, 1e-8, 3);
    CHECK(subtopic_kl_diversity(model, docs[0], docs[2]) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(subtopic_kl_diversity(model, docs[0], docs[1]) > 1.0);
  }
}

TEST_CASE("relational_aggregate") {
  DiversityVector a{{0.2, 0.5, 1.0}};
  DiversityVector b{{0.4, 0.1, 2.0}};
  std::vector<DiversityVector> rel{a, b};

  SUBCASE("component-wise min") {
    DiversityVector h = relational_aggregate(rel, Aggregate::kMin);
    CHECK(h[0] == 0.2);
    CHECK(h[1] == 0.1);
    CHECK(h[2] == 1.0);
  }
  SUBCASE("singleton returns the vector under any mode") {
    std::vector<DiversityVector> one{a};
    for (auto mode : {Aggregate::kMin, Aggregate::kAvg, Aggregate::kMax}) {
      DiversityVector h = relational_aggregate(one, mode);
      for (std::size_t f = 0; f < kNumDivFeatures; ++f) CHECK(h[f] == a[f]);
    }
  }
  SUBCASE("avg") {
    DiversityVector z{{0.0, 0.0, 0.0}};
    DiversityVector o{{1.0, 1.0, 2.0}};
    std::vector<DiversityVector> two{z, o};
    DiversityVector h = relational_aggregate(two, Aggregate::kAvg);
    CHECK(h[0] == doctest::Approx(0.5));
    CHECK(h[1] == doctest::Approx(0.5));
    CHECK(h[2] == doctest::Approx(1.0));
  }
  SUBCASE("min aggregate never grows as the set grows") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<DiversityVector> rels;
    DiversityVector prev{{1e9, 1e9, 1e9}};
    for (int i = 0; i < 20; ++i) {
      rels.push_back(DiversityVector{{unit(rng), unit(rng), 3 * unit(rng)}});
      DiversityVector h = relational_aggregate(rels, Aggregate::kMin);
      for (std::size_t f = 0; f < kNumDivFeatures; ++f) {
        CHECK(h[f] <= prev[f]);
        prev[f] = h[f];
      }
    }
  }
}

TEST_CASE("pairwise features are symmetric where required (random pairs)") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<int> term(0, 11);
  std::vector<Document> docs;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> tokens;
    int n = len(rng);
    for (int j = 0; j < n; ++j) tokens.push_back("w" + std::to_string(term(rng)));
    docs.push_back(doc_with_tokens("d" + std::to_string(i), std::move(tokens)));
  }
  CorpusStats stats = build_stats(docs);
  std::uniform_int_distribution<int> pick(0, 39);
  for (int trial = 0; trial < 300; ++trial) {
    const Document& a = docs[pick(rng)];
    const Document& b = docs[pick(rng)];
    double c1 = cosine_diversity(a, b, stats);
    double c2 = cosine_diversity(b, a, stats);
    CHECK(c1 == c2);
    CHECK(c1 >= 0.0);
    CHECK(c1 <= 1.0);
    double j1 = jaccard_diversity(a, b);
    CHECK(j1 == jaccard_diversity(b, a));
    CHECK(j1 >= 0.0);
    CHECK(j1 <= 1.0);
  }
}

TEST_CASE("feature bundle pairwise cache agrees with the public per-pair ops") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> len(2, 9);
  std::uniform_int_distribution<int> term(0, 9);
  std::vector<Document> docs;
  for (int i = 0; i < 12; ++i) {
    std::vector<std::string> tokens;
    int n = len(rng);
    for (int j = 0; j < n; ++j) tokens.push_back("w" + std::to_string(term(rng)));
    docs.push_back(doc_with_tokens("d" + std::to_string(i), std::move(tokens), i * 1000));
  }
  CorpusStats stats = build_stats(docs);
  Topic topic = topic_with_query("T", {"w1", "w2"}, 100000);
  FeatureParams params;
  params.plsa_topics = 3;
  FeatureBundle fb(topic, docs, {}, stats, params, 9);

  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = 0; j < docs.size(); ++j) {
      if (i == j) continue;
      DiversityVector r = fb.pair(i, j);
      CHECK(r[kCosineDiv] ==
            doctest::Approx(cosine_diversity(docs[i], docs[j], stats)).epsilon(1e-12));
      CHECK(r[kJaccardDiv] ==
            doctest::Approx(jaccard_diversity(docs[i], docs[j])).epsilon(1e-12));
      CHECK(r[kSubtopicKl] ==
            doctest::Approx(subtopic_kl_diversity(fb.plsa(), docs[i], docs[j])).epsilon(1e-12));
      CHECK(r[kSubtopicKl] >= 0.0);
    }
  }
}
