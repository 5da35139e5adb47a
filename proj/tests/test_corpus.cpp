#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tdif/corpus.hpp"
#include "tdif/stem.hpp"
#include "test_util.hpp"

using namespace tdif;

TEST_CASE("porter stemmer matches the reference vocabulary") {
  const std::pair<const char*, const char*> pairs[] = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},
      {"caress", "caress"},   {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"motoring", "motor"},
      {"sing", "sing"},       {"conflated", "conflat"}, {"troubled", "troubl"},
      {"sized", "size"},      {"hopping", "hop"},       {"tanned", "tan"},
      {"falling", "fall"},    {"hissing", "hiss"},      {"fizzed", "fizz"},
      {"failing", "fail"},    {"filing", "file"},       {"happy", "happi"},
      {"sky", "sky"},         {"relational", "relat"},  {"conditional", "condit"},
      {"rational", "ration"}, {"valenci", "valenc"},    {"hesitanci", "hesit"},
      {"digitizer", "digit"}, {"radicalli", "radic"},   {"differentli", "differ"},
      {"vileli", "vile"},     {"analogousli", "analog"},{"operator", "oper"},
      {"feudalism", "feudal"},{"decisiveness", "decis"},{"hopefulness", "hope"},
      {"formaliti", "formal"},{"sensitiviti", "sensit"},{"sensibiliti", "sensibl"},
      {"triplicate", "triplic"},{"formative", "form"},  {"formalize", "formal"},
      {"electriciti", "electr"},{"electrical", "electr"},{"hopeful", "hope"},
      {"goodness", "good"},   {"revival", "reviv"},     {"allowance", "allow"},
      {"inference", "infer"}, {"airliner", "airlin"},   {"gyroscopic", "gyroscop"},
      {"adjustable", "adjust"},{"defensible", "defens"},{"irritant", "irrit"},
      {"replacement", "replac"},{"adjustment", "adjust"},{"dependent", "depend"},
      {"adoption", "adopt"},  {"communism", "commun"},  {"activate", "activ"},
      {"effective", "effect"},{"bowdlerize", "bowdler"},{"probate", "probat"},
      {"rate", "rate"},       {"cease", "ceas"},        {"controll", "control"},
      {"roll", "roll"},       {"oscillate", "oscil"},   {"abilities", "abil"},
      {"generalization", "gener"},
  };
  for (const auto& [word, want] : pairs) {
    CAPTURE(word);
    CHECK(porter_stem(word) == want);
  }
}

TEST_CASE("porter stemming is idempotent on the test lexicon") {
  for (const char* word :
       {"caresses", "relational", "hopefulness", "debates", "motoring", "electriciti"}) {
    std::string once = porter_stem(word);
    CHECK(porter_stem(once) == once);
  }
}

TEST_CASE("tokenize") {
  SUBCASE("empty input") { CHECK(tokenize("").empty()); }

  SUBCASE("stems words and lowercases") {
    CHECK(tokenize("Obama Debates debate") ==
          std::vector<std::string>{"obama", "debat", "debat"});
  }

  SUBCASE("strips urls and keeps mentions") {
    CHECK(tokenize("RT @bbc: win http://t.co/x") ==
          std::vector<std::string>{"rt", "@bbc", "win"});
    CHECK(tokenize("see HTTPS://Example.com/Path?q=1 now") ==
          std::vector<std::string>{"see", "now"});
  }

  SUBCASE("hashtags survive as single tokens") {
    CHECK(tokenize("#Egypt rising") == std::vector<std::string>{"#egypt", "rise"});
  }

  SUBCASE("mixed alphanumerics are split only on separators") {
    CHECK(tokenize("win2 the-game") == std::vector<std::string>{"win2", "the", "game"});
  }

  SUBCASE("deterministic") { CHECK(tokenize("Obama debates") == tokenize("Obama debates")); }
}

TEST_CASE("build_stats counts") {
  SUBCASE("empty") {
    CorpusStats s = build_stats({});
    CHECK(s.doc_count == 0);
    CHECK(s.total_tokens == 0);
    CHECK(s.doc_frequency.empty());
  }

  SUBCASE("two docs") {
    std::vector<Document> docs{test::doc_with_tokens("d1", {"a", "b"}),
                               test::doc_with_tokens("d2", {"b", "b"})};
    CorpusStats s = build_stats(docs);
    CHECK(s.doc_count == 2);
    CHECK(s.df("b") == 2);
    CHECK(s.cf("b") == 3);
    CHECK(s.df("a") == 1);
    CHECK(s.avg_doc_len() == doctest::Approx(2.0));
  }

  SUBCASE("additivity over concatenation") {
    std::vector<Document> first{test::doc_with_tokens("d1", {"a", "b", "c"}),
                                test::doc_with_tokens("d2", {"c"})};
    std::vector<Document> second{test::doc_with_tokens("d3", {"a", "a"}),
                                 test::doc_with_tokens("d4", {"b", "c", "d"})};
    std::vector<Document> both = first;
    both.insert(both.end(), second.begin(), second.end());

    CorpusStats incremental = build_stats(first);
    update_stats(incremental, second);
    CorpusStats whole = build_stats(both);

    CHECK(incremental.doc_count == whole.doc_count);
    CHECK(incremental.total_tokens == whole.total_tokens);
    CHECK(incremental.doc_frequency == whole.doc_frequency);
    CHECK(incremental.collection_frequency == whole.collection_frequency);
  }
}

TEST_CASE("ingest_jsonl") {
  SUBCASE("valid three-line file keeps order") {
    std::istringstream in(
        R"({"id":"a","epoch_ms":1,"text":"one","followers":0,"retweets":0})" "\n"
        R"({"id":"b","epoch_ms":2,"text":"two","followers":3,"retweets":1})" "\n"
        R"({"id":"c","epoch_ms":3,"text":"three","followers":0,"retweets":0})" "\n");
    auto docs = parse_jsonl(in);
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].id == "a");
    CHECK(docs[2].id == "c");
    CHECK(docs[1].tokens == std::vector<std::string>{"two"});
  }

  SUBCASE("missing field names the line and field") {
    std::istringstream in(
        R"({"id":"a","epoch_ms":1,"text":"x","followers":0,"retweets":0})" "\n"
        R"({"id":"b","text":"y","followers":0,"retweets":0})" "\n");
    CHECK_THROWS_WITH_AS(parse_jsonl(in), "line 2: missing field epoch_ms", DataError);
  }

  SUBCASE("malformed line reports its number") {
    std::istringstream in(
        R"({"id":"a","epoch_ms":1,"text":"x","followers":0,"retweets":0})" "\n"
        "not json\n");
    CHECK_THROWS_WITH_AS(parse_jsonl(in), "line 2: malformed JSON", DataError);
  }

  SUBCASE("duplicate id rejected") {
    std::istringstream in(
        R"({"id":"a","epoch_ms":1,"text":"x","followers":0,"retweets":0})" "\n"
        R"({"id":"a","epoch_ms":2,"text":"y","followers":0,"retweets":0})" "\n");
    CHECK_THROWS_AS(parse_jsonl(in), DataError);
  }

  SUBCASE("empty file yields empty sequence") {
    std::istringstream in("");
    CHECK(parse_jsonl(in).empty());
  }

  SUBCASE("write/ingest round-trip") {
    std::vector<Document> docs;
    docs.push_back(test::doc_with_tokens("d1", {}, 10, 5, 2));
    docs.back().raw_text = "Debates #tag http://x.co/y";
    docs.back().tokens = tokenize(docs.back().raw_text);
    docs.push_back(test::doc_with_tokens("d2", {}, 20, 0, 0));
    docs.back().raw_text = "plain words";
    docs.back().tokens = tokenize(docs.back().raw_text);

    std::string path = "roundtrip_test.jsonl";
    write_jsonl(path, docs);
    auto loaded = ingest_jsonl(path);
    std::remove(path.c_str());
    REQUIRE(loaded.size() == docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      CHECK(loaded[i].id == docs[i].id);
      CHECK(loaded[i].epoch_ms == docs[i].epoch_ms);
      CHECK(loaded[i].raw_text == docs[i].raw_text);
      CHECK(loaded[i].tokens == docs[i].tokens);
      CHECK(loaded[i].followers == docs[i].followers);
      CHECK(loaded[i].retweets == docs[i].retweets);
    }
  }
}

TEST_CASE("topic loading") {
  SUBCASE("omitted p becomes uniform") {
    std::string path = "topics_test.json";
    {
      std::ofstream out(path);
      out << R"([{"topic_id":"T1","query":"Obama debates","tracking_epoch_ms":100,)"
          << R"("subtopics":[{"id":"s0"},{"id":"s1"}]}])";
    }
    auto topics = load_topics(path);
    std::remove(path.c_str());
    REQUIRE(topics.size() == 1);
    CHECK(topics[0].query_tokens == std::vector<std::string>{"obama", "debat"});
    REQUIRE(topics[0].subtopics.size() == 2);
    CHECK(topics[0].subtopics[0].probability == doctest::Approx(0.5));
    CHECK(topics[0].subtopics[1].probability == doctest::Approx(0.5));
  }

  SUBCASE("probabilities must sum to one") {
    std::string path = "topics_bad.json";
    {
      std::ofstream out(path);
      out << R"({"topic_id":"T1","query":"x","tracking_epoch_ms":0,)"
          << R"("subtopics":[{"id":"s0","p":0.4},{"id":"s1","p":0.4}]})";
    }
    CHECK_THROWS_AS(load_topics(path), DataError);
    std::remove(path.c_str());
  }

  SUBCASE("topics round-trip") {
    Topic t = test::topic_with_query("T9", {"win"}, 1234, 3);
    std::string path = "topics_rt.json";
    write_topics(path, std::vector<Topic>{t});
    auto loaded = load_topics(path);
    std::remove(path.c_str());
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].id == "T9");
    CHECK(loaded[0].query_tokens == t.query_tokens);
    CHECK(loaded[0].tracking_epoch_ms == 1234);
    CHECK(loaded[0].subtopics.size() == 3);
  }
}
