#include "imitate/action_stream.hpp"

#include <algorithm>
#include <stdexcept>

#include "imitate/random.hpp"

namespace imitate {

namespace {

constexpr std::array<std::string_view, kPrimitiveCount> kNames = {
    "idle", "move", "pick", "place", "push", "tilt", "rotate"};

}  // namespace

std::string_view to_string(Primitive p) { return kNames[static_cast<std::size_t>(p)]; }

std::optional<Primitive> parse_primitive(std::string_view token) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == token) return static_cast<Primitive>(i);
  }
  return std::nullopt;
}

Primitive primitive_from_string(std::string_view token) {
  if (auto p = parse_primitive(token)) return *p;
  throw std::invalid_argument("unknown action primitive '" + std::string(token) + "'");
}

PrimitiveStream::PrimitiveStream(std::vector<Primitive> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw std::invalid_argument("primitive stream must have at least one frame");
}

KeySequence::KeySequence(std::vector<Primitive> keys) : keys_(std::move(keys)) {
  for (std::size_t i = 1; i < keys_.size(); ++i) {
    if (keys_[i] == keys_[i - 1]) {
      throw std::invalid_argument("key sequence repeats '" + std::string(to_string(keys_[i])) +
                                  "' at position " + std::to_string(i));
    }
  }
}

bool KeySequence::push_collapsed(Primitive p) {
  if (!keys_.empty() && keys_.back() == p) return false;
  keys_.push_back(p);
  return true;
}

WindowWidth::WindowWidth(std::size_t frames) : value(frames) {
  if (frames < 1) throw std::invalid_argument("window width must be at least 1");
}

Primitive window_mode(std::span<const Primitive> window, std::optional<Primitive> incumbent) {
  if (window.empty()) throw std::invalid_argument("window_mode: empty window");

  std::array<std::size_t, kPrimitiveCount> count{};
  std::array<std::size_t, kPrimitiveCount> first{};
  first.fill(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    auto k = static_cast<std::size_t>(window[i]);
    if (count[k]++ == 0) first[k] = i;
  }

  std::size_t best = static_cast<std::size_t>(window[0]);
  for (std::size_t k = 0; k < kPrimitiveCount; ++k) {
    if (count[k] > count[best] || (count[k] == count[best] && count[k] > 0 && first[k] < first[best])) {
      best = k;
    }
  }
  if (incumbent && count[static_cast<std::size_t>(*incumbent)] == count[best]) return *incumbent;
  return static_cast<Primitive>(best);
}

Primitive window_mode(std::span<const Primitive> window) { return window_mode(window, std::nullopt); }

KeySequence window_filter(const PrimitiveStream& stream, WindowWidth w) {
  const auto frames = stream.frames();
  const std::size_t n = frames.size();
  KeySequence keys;
  if (n <= w.value) {
    keys.push_collapsed(window_mode(frames));
    return keys;
  }
  for (std::size_t i = 0; i + w.value < n; ++i) {
    const auto last = keys.empty() ? std::nullopt : std::optional<Primitive>(keys[keys.size() - 1]);
    keys.push_collapsed(window_mode(frames.subspan(i, w.value + 1), last));
  }
  return keys;
}

PrimitiveStream synthesize_stream(const KeySequence& keys, std::size_t frames_per_key,
                                  double noise_rate, std::uint64_t seed) {
  if (keys.empty()) throw std::invalid_argument("synthesize_stream: empty key sequence");
  if (frames_per_key < 1) throw std::invalid_argument("synthesize_stream: frames_per_key must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw std::invalid_argument("synthesize_stream: noise_rate must lie in [0, 1]");
  }

  std::vector<Primitive> frames;
  frames.reserve(keys.size() * frames_per_key);
  for (Primitive k : keys.keys()) frames.insert(frames.end(), frames_per_key, k);

  Rng rng(seed);
  for (Primitive& f : frames) {
    // Two draws per frame for every noise_rate.
    const double u = rng.uniform();
    auto other = static_cast<std::size_t>(rng.index(kPrimitiveCount - 1));
    if (u < noise_rate) {
      if (other >= static_cast<std::size_t>(f)) ++other;
      f = static_cast<Primitive>(other);
    }
  }
  return PrimitiveStream(std::move(frames));
}

std::string to_string(const KeySequence& keys) {
  std::string out = "[";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    out += to_string(keys[i]);
  }
  return out + "]";
}

}  // namespace imitate
