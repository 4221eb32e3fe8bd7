#include <doctest.h>

#include <random>

#include "imitate/action_stream.hpp"
#include "support/oracles.hpp"

using namespace imitate;
using P = Primitive;

namespace {

std::vector<Primitive> runs(std::initializer_list<std::pair<Primitive, std::size_t>> r) {
  return oracle::expand(std::vector<std::pair<Primitive, std::size_t>>(r));
}

std::vector<Primitive> keys_of(const KeySequence& k) { return {k.keys().begin(), k.keys().end()}; }

}  // namespace

TEST_CASE("primitive names round-trip and reject unknown tokens") {
  CHECK(kAllPrimitives.size() == 7);
  for (Primitive p : kAllPrimitives) CHECK(primitive_from_string(to_string(p)) == p);
  CHECK_FALSE(parse_primitive("grab"));
  CHECK_FALSE(parse_primitive("Idle"));
  CHECK_FALSE(parse_primitive(""));
  CHECK_THROWS_AS(primitive_from_string("grab"), std::invalid_argument);
}

TEST_CASE("stream and key-sequence invariants") {
  CHECK_THROWS_AS(PrimitiveStream({}), std::invalid_argument);
  CHECK_THROWS_AS(KeySequence({P::pick, P::pick}), std::invalid_argument);
  CHECK_THROWS_AS(WindowWidth(0), std::invalid_argument);
  KeySequence k;
  CHECK(k.push_collapsed(P::idle));
  CHECK_FALSE(k.push_collapsed(P::idle));
  CHECK(k.push_collapsed(P::move));
  CHECK(k.size() == 2);
}

TEST_CASE("window_mode") {
  CHECK(window_mode(std::vector{P::idle, P::idle, P::move}) == P::idle);
  CHECK(window_mode(std::vector{P::pick, P::pick, P::pick}) == P::pick);
  // tie at two each; move occurs first
  CHECK(window_mode(std::vector{P::move, P::pick, P::pick, P::move}) == P::move);
  CHECK_THROWS_AS(window_mode(std::span<const Primitive>{}), std::invalid_argument);

  SUBCASE("incumbent wins ties it is part of, and only those") {
    const std::vector w{P::move, P::pick, P::pick, P::move};
    CHECK(window_mode(w, P::pick) == P::pick);
    CHECK(window_mode(w, P::idle) == P::move);
    CHECK(window_mode(std::vector{P::pick, P::pick, P::move}, P::move) == P::pick);
  }
}

TEST_CASE("window_filter examples") {
  SUBCASE("18-frame pick-place hand trace") {
    auto s = runs({{P::idle, 4}, {P::move, 3}, {P::pick, 4}, {P::move, 3}, {P::place, 4}});
    REQUIRE(s.size() == 18);
    const std::vector expected{P::idle, P::move, P::pick, P::move, P::place};
    CHECK(keys_of(window_filter(PrimitiveStream(s), WindowWidth(3))) == expected);
    CHECK(oracle::reference_filter(s, 3) == expected);
  }
  SUBCASE("constant stream") {
    CHECK(keys_of(window_filter(PrimitiveStream(runs({{P::push, 10}})), WindowWidth(4))) == std::vector{P::push});
  }
  SUBCASE("single window of four frames") {
    auto k = window_filter(PrimitiveStream({P::idle, P::pick, P::idle, P::idle}), WindowWidth(3));
    CHECK(keys_of(k) == std::vector{P::idle});
  }
  SUBCASE("stream no longer than the window") {
    auto k = window_filter(PrimitiveStream({P::move, P::pick, P::pick}), WindowWidth(15));
    CHECK(keys_of(k) == std::vector{P::pick});
    CHECK(keys_of(window_filter(PrimitiveStream({P::tilt}), WindowWidth(15))) == std::vector{P::tilt});
  }
}

TEST_CASE("window_filter matches the reference transcription on random streams") {
  std::mt19937 gen(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + gen() % 80;
    const std::size_t w = 1 + gen() % 12;
    std::vector<Primitive> s(n);
    // short runs so windows straddle boundaries often
    for (std::size_t i = 0; i < n; ++i) s[i] = (i > 0 && gen() % 3) ? s[i - 1] : kAllPrimitives[gen() % 7];
    const auto k = window_filter(PrimitiveStream(s), WindowWidth(w));
    CHECK(keys_of(k) == oracle::reference_filter(s, w));
    for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] != k[i - 1]);
    CHECK(k.size() <= s.size());
  }
}

TEST_CASE("synthesize_stream") {
  SUBCASE("zero noise is plain expansion") {
    CHECK(synthesize_stream(KeySequence({P::pick}), 5, 0.0, 99) == PrimitiveStream(std::vector(5, P::pick)));
    CHECK(synthesize_stream(KeySequence({P::idle, P::move}), 3, 0.0, 7) ==
          PrimitiveStream({P::idle, P::idle, P::idle, P::move, P::move, P::move}));
  }
  SUBCASE("seeded noisy stream is recovered by the filter") {
    const KeySequence keys({P::idle, P::move, P::pick});
    const auto clean = synthesize_stream(keys, 30, 0.0, 42);
    const auto noisy = synthesize_stream(keys, 30, 0.1, 42);
    REQUIRE(noisy.size() == 90);
    std::size_t corrupted = 0;
    for (std::size_t i = 0; i < 90; ++i) corrupted += noisy[i] != clean[i];
    // Counted from this generator: 9 of 90 frames.
    CHECK(corrupted == 9);
    CHECK(window_filter(noisy, WindowWidth(15)) == keys);
  }
  SUBCASE("determinism and seed sensitivity") {
    const KeySequence keys({P::idle, P::move, P::pick, P::move, P::place});
    CHECK(synthesize_stream(keys, 30, 0.2, 5) == synthesize_stream(keys, 30, 0.2, 5));
    CHECK_FALSE(synthesize_stream(keys, 30, 0.2, 5) == synthesize_stream(keys, 30, 0.2, 6));
  }
  SUBCASE("full noise changes every frame") {
    const auto s = synthesize_stream(KeySequence({P::rotate}), 50, 1.0, 3);
    for (Primitive p : s.frames()) CHECK(p != P::rotate);
  }
  SUBCASE("argument errors") {
    CHECK_THROWS_AS(synthesize_stream(KeySequence({P::pick}), 3, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_stream(KeySequence({P::pick}), 3, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_stream(KeySequence(), 3, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(synthesize_stream(KeySequence({P::pick}), 0, 0.1, 1), std::invalid_argument);
  }
}

TEST_CASE("idempotence on clean runs of length >= w + 1") {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + gen() % 20;
    std::vector<Primitive> keys;
    const std::size_t len = 1 + gen() % 8;
    while (keys.size() < len) {
      Primitive p = kAllPrimitives[gen() % 7];
      if (keys.empty() || keys.back() != p) keys.push_back(p);
    }
    std::vector<Primitive> s;
    for (Primitive p : keys) s.insert(s.end(), w + 1 + gen() % (3 * w), p);
    CHECK(keys_of(window_filter(PrimitiveStream(s), WindowWidth(w))) == keys);
  }
}
