#include "imitate/knowledge.hpp"

#include <algorithm>
#include <cctype>

namespace imitate {

Lexicon::Lexicon(std::map<std::string, Primitive> verbs, std::vector<std::string> objects)
    : verbs_(std::move(verbs)), objects_(std::move(objects)) {
  for (const auto& [surface, _] : verbs_) {
    if (tokenize(surface) != std::vector<std::string>{surface}) {
      throw std::invalid_argument("lexicon verb '" + surface + "' must be a single lowercase token");
    }
  }
  std::sort(objects_.begin(), objects_.end());
  objects_.erase(std::unique(objects_.begin(), objects_.end()), objects_.end());
  for (const std::string& o : objects_) {
    auto toks = tokenize(o);
    if (toks.empty()) throw std::invalid_argument("lexicon object '" + o + "' has no tokens");
    object_tokens_.push_back(std::move(toks));
  }
}

std::optional<Primitive> Lexicon::verb(std::string_view token) const {
  auto it = verbs_.find(std::string(token));
  if (it == verbs_.end()) return std::nullopt;
  return it->second;
}

bool Lexicon::has_object(std::string_view name) const {
  return std::binary_search(objects_.begin(), objects_.end(), name);
}

std::pair<std::string, std::size_t> Lexicon::match_object(const std::vector<std::string>& tokens,
                                                          std::size_t pos) const {
  std::pair<std::string, std::size_t> best{"", 0};
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const auto& ot = object_tokens_[i];
    if (ot.size() <= best.second || pos + ot.size() > tokens.size()) continue;
    if (std::equal(ot.begin(), ot.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos))) {
      best = {objects_[i], ot.size()};
    }
  }
  return best;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u) || ch == '-') {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<ActionObject> parse_sentence(std::string_view line, const Lexicon& lex) {
  const auto tokens = tokenize(line);
  std::vector<ActionObject> pairs;
  std::optional<Primitive> action;
  for (std::size_t i = 0; i < tokens.size();) {
    // An object name takes precedence over a verb at the same position.
    auto [object, span] = lex.match_object(tokens, i);
    if (span > 0) {
      if (action) pairs.push_back({*action, object});
      i += span;
      continue;
    }
    if (auto v = lex.verb(tokens[i])) action = v;
    ++i;
  }
  return pairs;
}

std::size_t CooccurrenceModel::count(Primitive a, const std::string& object) const {
  auto it = counts_.find(a);
  if (it == counts_.end()) return 0;
  auto jt = it->second.find(object);
  return jt == it->second.end() ? 0 : jt->second;
}

std::size_t CooccurrenceModel::total(Primitive a) const {
  auto it = totals_.find(a);
  return it == totals_.end() ? 0 : it->second;
}

double CooccurrenceModel::probability(const std::string& object, Primitive a) const {
  const std::size_t n = total(a);
  if (n == 0) return 0.0;
  return static_cast<double>(count(a, object)) / static_cast<double>(n);
}

const std::map<std::string, std::size_t>& CooccurrenceModel::counts(Primitive a) const {
  static const std::map<std::string, std::size_t> kEmpty;
  auto it = counts_.find(a);
  return it == counts_.end() ? kEmpty : it->second;
}

std::vector<std::string> CooccurrenceModel::ranked_objects(Primitive a) const {
  std::vector<std::pair<std::string, std::size_t>> rows(counts(a).begin(), counts(a).end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& l, const auto& r) { return l.second > r.second; });
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (auto& [name, _] : rows) out.push_back(name);
  return out;
}

void CooccurrenceModel::add_sentence(const std::vector<ActionObject>& pairs) {
  std::set<std::pair<Primitive, std::string>> seen;
  for (const auto& p : pairs) {
    if (!seen.emplace(p.action, p.object).second) continue;
    ++counts_[p.action][p.object];
    ++totals_[p.action];
  }
  ++sentences_;
}

CooccurrenceModel CooccurrenceModel::scaled(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("scale factor must be positive");
  CooccurrenceModel out = *this;
  for (auto& [_, row] : out.counts_) {
    for (auto& [__, n] : row) n *= factor;
  }
  for (auto& [_, n] : out.totals_) n *= factor;
  return out;
}

CooccurrenceModel build_model(const std::vector<std::string>& corpus, const Lexicon& lex) {
  if (corpus.empty()) throw std::invalid_argument("build_model: corpus is empty");
  CooccurrenceModel model;
  for (const std::string& line : corpus) {
    auto pairs = parse_sentence(line, lex);
    if (pairs.empty()) {
      model.note_skipped();
      continue;
    }
    model.add_sentence(pairs);
  }
  if (model.sentence_count() == 0) throw EmptyModelError("corpus contains no parseable sentence");
  return model;
}

double conditional_probability(const CooccurrenceModel& model, const std::string& object, Primitive a) {
  return model.probability(object, a);
}

Selection select_single_object(const CooccurrenceModel& model, Primitive a, const DetectedSet& detected) {
  if (a != Primitive::pick && a != Primitive::place && a != Primitive::rotate && a != Primitive::tilt) {
    throw std::invalid_argument("select_single_object: '" + std::string(to_string(a)) +
                                "' does not take a single object");
  }
  if (detected.empty()) throw std::invalid_argument("select_single_object: no detected objects");

  // detected is ordered by name, so a strict comparison keeps the smallest name on ties.
  const std::string* best = &*detected.begin();
  std::size_t best_count = model.count(a, *best);
  for (const std::string& o : detected) {
    const std::size_t c = model.count(a, o);
    if (c > best_count) {
      best = &o;
      best_count = c;
    }
  }
  return {*best, best_count == 0};
}

PairSelection select_object_pair(const CooccurrenceModel& model, Primitive a, const DetectedSet& detected) {
  if (a != Primitive::push && a != Primitive::tilt) {
    throw std::invalid_argument("select_object_pair: '" + std::string(to_string(a)) +
                                "' does not take two objects");
  }
  if (detected.size() < 2) {
    throw SelectionError("'" + std::string(to_string(a)) + "' needs two detected objects, found " +
                         std::to_string(detected.size()));
  }

  std::vector<std::string> chosen;
  for (const std::string& o : model.ranked_objects(a)) {
    if (detected.contains(o)) chosen.push_back(o);
    if (chosen.size() == 2) return {chosen[0], chosen[1], false};
  }
  for (const std::string& o : detected) {
    if (std::find(chosen.begin(), chosen.end(), o) == chosen.end()) chosen.push_back(o);
    if (chosen.size() == 2) break;
  }
  return {chosen[0], chosen[1], true};
}

}  // namespace imitate
