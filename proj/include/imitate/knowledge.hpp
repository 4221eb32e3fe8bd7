#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imitate/action_stream.hpp"

namespace imitate {

/// Surface verbs mapped onto primitives, plus the object vocabulary.
/// Object names may span several words ("white plate") or be hyphenated.
class Lexicon {
 public:
  Lexicon(std::map<std::string, Primitive> verbs, std::vector<std::string> objects);

  const std::map<std::string, Primitive>& verbs() const { return verbs_; }
  const std::vector<std::string>& objects() const { return objects_; }

  std::optional<Primitive> verb(std::string_view token) const;
  bool has_object(std::string_view name) const;

  /// Longest object name whose tokens start at tokens[pos]; returns the
  /// object and how many tokens it spans, or {"", 0}.
  std::pair<std::string, std::size_t> match_object(const std::vector<std::string>& tokens,
                                                   std::size_t pos) const;

 private:
  std::map<std::string, Primitive> verbs_;
  std::vector<std::string> objects_;
  std::vector<std::vector<std::string>> object_tokens_;
};

/// Lowercase, split on anything other than ASCII letters, digits and '-'.
std::vector<std::string> tokenize(std::string_view text);

struct ActionObject {
  Primitive action;
  std::string object;
  bool operator==(const ActionObject&) const = default;
};

/// Pairs each recognised verb with every object named after it, up to the
/// next verb. Sentences without a verb or without an object give {}.
std::vector<ActionObject> parse_sentence(std::string_view line, const Lexicon& lex);

class EmptyModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sentence-presence counts N(a, o). N(a) is the sum over objects, so
/// P(o | a) = N(a, o) / N(a) is normalised for every action with evidence.
class CooccurrenceModel {
 public:
  std::size_t count(Primitive a, const std::string& object) const;
  std::size_t total(Primitive a) const;
  double probability(const std::string& object, Primitive a) const;

  /// Objects with N(a, o) > 0, by count descending then name ascending.
  std::vector<std::string> ranked_objects(Primitive a) const;
  const std::map<std::string, std::size_t>& counts(Primitive a) const;

  std::size_t sentence_count() const { return sentences_; }
  std::size_t skipped_count() const { return skipped_; }

  /// Used by build_model; adds one to N(a, o) for every distinct pair.
  void add_sentence(const std::vector<ActionObject>& pairs);
  void note_skipped() { ++skipped_; }
  /// Multiplies every count by `factor` (> 0).
  CooccurrenceModel scaled(std::size_t factor) const;

 private:
  std::map<Primitive, std::map<std::string, std::size_t>> counts_;
  std::map<Primitive, std::size_t> totals_;
  std::size_t sentences_ = 0;
  std::size_t skipped_ = 0;
};

/// Throws std::invalid_argument for an empty corpus and EmptyModelError
/// when no sentence parses.
CooccurrenceModel build_model(const std::vector<std::string>& corpus, const Lexicon& lex);

double conditional_probability(const CooccurrenceModel& model, const std::string& object, Primitive a);

using DetectedSet = std::set<std::string>;

struct Selection {
  std::string object;
  bool low_confidence = false;
};

struct PairSelection {
  std::string primary;
  std::string target;
  bool low_confidence = false;
};

/// argmax over `detected` of P(o | a). Ties: higher count, then smaller name.
/// Without any evidence, the smallest name is returned with low_confidence set.
/// `a` must take a single object: pick, place, rotate, or tilt with the
/// poured object already in hand.
Selection select_single_object(const CooccurrenceModel& model, Primitive a, const DetectedSet& detected);

/// Walks corpus objects by N(a, o) descending (ties by name) and keeps the
/// first two that are detected: manipulated object, then target. Missing
/// slots are filled from the remaining detected names in order, flagged
/// low_confidence. `a` must be push or tilt; needs two detected objects.
PairSelection select_object_pair(const CooccurrenceModel& model, Primitive a, const DetectedSet& detected);

}  // namespace imitate
