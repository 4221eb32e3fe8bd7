#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imitate {

/// The seven action primitives used both to describe a human demonstration
/// and to drive the robot. `idle` means no hand (or end effector) is visible.
enum class Primitive : std::uint8_t { idle, move, pick, place, push, tilt, rotate };

inline constexpr std::size_t kPrimitiveCount = 7;

inline constexpr std::array<Primitive, kPrimitiveCount> kAllPrimitives = {
    Primitive::idle, Primitive::move, Primitive::pick,  Primitive::place,
    Primitive::push, Primitive::tilt, Primitive::rotate};

std::string_view to_string(Primitive p);

/// Exact, lowercase match against the seven names.
std::optional<Primitive> parse_primitive(std::string_view token);

/// Same as parse_primitive but throws std::invalid_argument on unknown tokens.
Primitive primitive_from_string(std::string_view token);

/// Per-frame primitive labels; index is the frame number. Never empty.
class PrimitiveStream {
 public:
  explicit PrimitiveStream(std::vector<Primitive> frames);

  std::span<const Primitive> frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  Primitive operator[](std::size_t i) const { return frames_[i]; }

  bool operator==(const PrimitiveStream&) const = default;

 private:
  std::vector<Primitive> frames_;
};

/// Filtered key primitives. No two consecutive entries are equal.
class KeySequence {
 public:
  KeySequence() = default;
  /// Throws std::invalid_argument if two consecutive keys are equal.
  explicit KeySequence(std::vector<Primitive> keys);

  std::span<const Primitive> keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  Primitive operator[](std::size_t i) const { return keys_[i]; }

  /// Appends `p` unless it equals the current last key. Returns true if appended.
  bool push_collapsed(Primitive p);

  bool operator==(const KeySequence&) const = default;

 private:
  std::vector<Primitive> keys_;
};

struct WindowWidth {
  explicit WindowWidth(std::size_t frames);
  std::size_t value;
};

inline constexpr std::size_t kDefaultWindowWidth = 15;

/// Most frequent primitive in `window`; ties go to the primitive whose first
/// occurrence in the window comes earliest. Throws on an empty window.
Primitive window_mode(std::span<const Primitive> window);

/// As above, except that a tie involving `incumbent` resolves to `incumbent`.
Primitive window_mode(std::span<const Primitive> window, std::optional<Primitive> incumbent);

/// Sliding-window key extraction. Each window covers frames i..i+w (w+1
/// frames) for i = 0 .. n-w-1; a stream with n <= w is treated as a single
/// window. A window's mode is appended only when it differs from the last key;
/// a tie between the last key and another primitive keeps the last key.
KeySequence window_filter(const PrimitiveStream& stream, WindowWidth w);

/// Expands `keys` into `frames_per_key` frames each, then replaces every frame
/// with probability `noise_rate` by a uniformly chosen different primitive.
/// Output depends only on the arguments (seeded mt19937_64, fixed mapping).
PrimitiveStream synthesize_stream(const KeySequence& keys, std::size_t frames_per_key,
                                  double noise_rate, std::uint64_t seed);

std::string to_string(const KeySequence& keys);

}  // namespace imitate
