#include <doctest.h>

#include <algorithm>
#include <random>

#include "imitate/io.hpp"
#include "imitate/knowledge.hpp"
#include "support/oracles.hpp"

using namespace imitate;
using P = Primitive;

namespace {

Lexicon small_lexicon() {
  return Lexicon({{"pick", P::pick},
                  {"grasp", P::pick},
                  {"put", P::place},
                  {"place", P::place},
                  {"push", P::push},
                  {"shove", P::push},
                  {"pour", P::tilt},
                  {"open", P::rotate}},
                 {"apple", "banana", "pear", "plate", "white plate", "black-bottle", "carrot", "grape", "croissant"});
}

Lexicon fixture_lexicon() { return read_lexicon(IMITATE_FIXTURES_DIR "/lexicon.json"); }
std::vector<std::string> fixture_corpus() { return read_corpus(IMITATE_FIXTURES_DIR "/corpus.txt"); }

CooccurrenceModel push_model(std::initializer_list<std::pair<const char*, int>> counts) {
  CooccurrenceModel m;
  for (auto [obj, n] : counts) {
    for (int i = 0; i < n; ++i) m.add_sentence({{P::push, obj}});
  }
  return m;
}

}  // namespace

TEST_CASE("lexicon and tokenizer") {
  CHECK(tokenize("Push the Pear, to the white-plate!") ==
        std::vector<std::string>{"push", "the", "pear", "to", "the", "white-plate"});
  const Lexicon lex = small_lexicon();
  CHECK(lex.verb("grasp") == P::pick);
  CHECK_FALSE(lex.verb("grab"));
  CHECK(lex.has_object("white plate"));
  CHECK(lex.match_object({"the", "white", "plate"}, 1) == std::pair<std::string, std::size_t>{"white plate", 2});
  CHECK(lex.match_object({"plate"}, 0).first == "plate");
  CHECK(lex.match_object({"white"}, 0).second == 0);
  CHECK_THROWS_AS(Lexicon({{"pick up", P::pick}}, {"apple"}), std::invalid_argument);
}

TEST_CASE("parse_sentence") {
  const Lexicon lex = small_lexicon();
  CHECK(parse_sentence("pick the apple", lex) == std::vector<ActionObject>{{P::pick, "apple"}});
  CHECK(parse_sentence("push the pear to the white plate", lex) ==
        std::vector<ActionObject>{{P::push, "pear"}, {P::push, "white plate"}});
  CHECK(parse_sentence("hello world", lex).empty());
  CHECK(parse_sentence("the apple is red", lex).empty());
  CHECK(parse_sentence("pick", lex).empty());
  CHECK(parse_sentence("open the black-bottle and pour it", lex) ==
        std::vector<ActionObject>{{P::rotate, "black-bottle"}});
  CHECK(parse_sentence("grasp the pear then put it on the plate", lex) ==
        std::vector<ActionObject>{{P::pick, "pear"}, {P::place, "plate"}});
}

TEST_CASE("build_model and conditional_probability") {
  const Lexicon lex = small_lexicon();
  const auto m = build_model({"pick the apple", "pick the apple", "pick the banana"}, lex);
  CHECK(m.count(P::pick, "apple") == 2);
  CHECK(m.count(P::pick, "banana") == 1);
  CHECK(m.total(P::pick) == 3);
  CHECK(conditional_probability(m, "apple", P::pick) == doctest::Approx(2.0 / 3.0));
  CHECK(conditional_probability(m, "apple", P::push) == 0.0);
  CHECK(conditional_probability(m, "kiwi", P::pick) == 0.0);

  SUBCASE("a sentence counts each pair once") {
    const auto d = build_model({"pick the apple and the apple"}, lex);
    CHECK(d.count(P::pick, "apple") == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_model({}, lex), std::invalid_argument);
    CHECK_THROWS_AS(build_model({"hello world", "nothing here"}, lex), EmptyModelError);
  }
  SUBCASE("unparseable sentences are counted as skipped") {
    const auto s = build_model({"hello world", "pick the pear"}, lex);
    CHECK(s.sentence_count() == 1);
    CHECK(s.skipped_count() == 1);
  }
}

TEST_CASE("fixture corpus matches the naive counter") {
  const Lexicon lex = fixture_lexicon();
  const auto corpus = fixture_corpus();
  REQUIRE(corpus.size() >= 50);
  const auto model = build_model(corpus, lex);
  const auto table = oracle::NaiveCounter(lex.verbs(), lex.objects()).count(corpus);
  std::size_t cells = 0;
  for (Primitive a : kAllPrimitives) {
    for (const std::string& o : lex.objects()) {
      auto it = table.find({a, o});
      const std::size_t expected = it == table.end() ? 0 : it->second;
      CHECK_MESSAGE(model.count(a, o) == expected, to_string(a), " ", o);
      cells += expected > 0;
    }
    if (model.total(a) == 0) continue;
    double sum = 0;
    for (const std::string& o : lex.objects()) sum += conditional_probability(model, o, a);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(cells > 20);
}

TEST_CASE("select_single_object") {
  const Lexicon lex = small_lexicon();
  const auto m = build_model({"put the banana on the plate", "place the apple on the plate", "pick the apple",
                              "pick the apple", "pick the banana"},
                             lex);
  CHECK(select_single_object(m, P::place, {"banana", "plate"}).object == "plate");
  CHECK(select_single_object(m, P::pick, {"apple", "banana"}).object == "apple");
  CHECK(select_single_object(m, P::pick, {"grape"}).object == "grape");
  CHECK(select_single_object(m, P::pick, {"grape"}).low_confidence);
  CHECK(select_single_object(m, P::rotate, {"pear", "carrot"}).object == "carrot");
  CHECK_THROWS_AS(select_single_object(m, P::push, {"apple"}), std::invalid_argument);
  CHECK_THROWS_AS(select_single_object(m, P::move, {"apple"}), std::invalid_argument);
  CHECK_THROWS_AS(select_single_object(m, P::pick, {}), std::invalid_argument);
}

TEST_CASE("select_object_pair") {
  SUBCASE("ranked then filtered by the detected set") {
    const auto m = push_model({{"carrot", 5}, {"plate", 4}, {"grape", 1}});
    const auto s = select_object_pair(m, P::push, {"grape", "plate"});
    CHECK(s.primary == "plate");
    CHECK(s.target == "grape");
    CHECK_FALSE(s.low_confidence);
  }
  SUBCASE("push-away workspace pair") {
    const auto s = select_object_pair(push_model({{"grape", 3}, {"croissant", 2}}), P::push, {"grape", "croissant"});
    CHECK(s.primary == "grape");
    CHECK(s.target == "croissant");
  }
  SUBCASE("zero-count fallback is deterministic") {
    const auto s = select_object_pair(push_model({{"carrot", 1}}), P::push, {"pear", "apple"});
    CHECK(s.primary == "apple");
    CHECK(s.target == "pear");
    CHECK(s.low_confidence);
  }
  SUBCASE("one ranked object, one fallback") {
    const auto s = select_object_pair(push_model({{"pear", 2}}), P::push, {"pear", "apple", "grape"});
    CHECK(s.primary == "pear");
    CHECK(s.target == "apple");
    CHECK(s.low_confidence);
  }
  SUBCASE("errors") {
    const auto m = push_model({{"grape", 1}});
    CHECK_THROWS_AS(select_object_pair(m, P::push, {"grape"}), SelectionError);
    CHECK_THROWS_AS(select_object_pair(m, P::pick, {"grape", "pear"}), std::invalid_argument);
  }
}

TEST_CASE("selection properties") {
  const Lexicon lex = fixture_lexicon();
  auto corpus = fixture_corpus();
  const auto model = build_model(corpus, lex);
  const std::vector<std::string>& objects = lex.objects();
  std::mt19937 gen(11);

  SUBCASE("order independence of the corpus") {
    for (int k = 0; k < 5; ++k) {
      std::shuffle(corpus.begin(), corpus.end(), gen);
      const auto shuffled = build_model(corpus, lex);
      for (Primitive a : kAllPrimitives) CHECK(shuffled.counts(a) == model.counts(a));
    }
  }

  SUBCASE("scale invariance and monotonicity") {
    for (int q = 0; q < 300; ++q) {
      DetectedSet detected;
      const std::size_t size = 1 + gen() % 5;
      while (detected.size() < size) detected.insert(objects[gen() % objects.size()]);
      for (Primitive a : {P::pick, P::place, P::rotate, P::tilt}) {
        const auto base = select_single_object(model, a, detected);
        for (std::size_t f : {2u, 10u, 1000u}) CHECK(select_single_object(model.scaled(f), a, detected).object == base.object);
        // more evidence for the winner never dethrones it
        CooccurrenceModel boosted = model;
        boosted.add_sentence({{a, base.object}});
        CHECK(select_single_object(boosted, a, detected).object == base.object);
      }
    }
  }
}
