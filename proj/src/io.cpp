#include "imitate/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace imitate {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::pair<double, double> pair_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(std::string(what) + " must be a two-element numeric array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json optional_pose(const std::optional<ObjectPose>& p) { return p ? pose_to_json(*p) : json(nullptr); }

std::optional<ObjectPose> optional_pose_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return pose_from_json(j.at(key));
}

/// Runs `fn`, rewrapping JSON and argument errors as ParseError.
template <typename Fn>
auto parse_guard(const std::string& source, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(source, 0, e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, 0, e.what());
  }
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ": line " + std::to_string(line) : std::string()) + ": " + what), line_(line) {}

PrimitiveStream parse_label_stream(std::istream& in, const std::string& source) {
  std::vector<Primitive> frames;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      throw ParseError(source, lineno, "not valid JSON");
    }
    if (!rec.is_object() || !rec.contains("frame") || !rec.contains("label") || !rec["frame"].is_number_integer() ||
        !rec["label"].is_string()) {
      throw ParseError(source, lineno, "expected {\"frame\": <int>, \"label\": <string>}");
    }
    if (rec["frame"].get<long long>() != static_cast<long long>(frames.size())) {
      throw ParseError(source, lineno, "expected frame " + std::to_string(frames.size()));
    }
    const auto label = rec["label"].get<std::string>();
    auto p = parse_primitive(label);
    if (!p) throw ParseError(source, lineno, "unknown primitive '" + label + "'");
    frames.push_back(*p);
  }
  if (frames.empty()) throw ParseError(source, 0, "label stream has no frames");
  return PrimitiveStream(std::move(frames));
}

PrimitiveStream read_label_stream(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_label_stream(in, path.string());
}

std::string format_label_stream(const PrimitiveStream& stream) {
  std::string out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    out += json{{"frame", i}, {"label", to_string(stream[i])}}.dump() + "\n";
  }
  return out;
}

json key_sequence_to_json(const KeySequence& keys) {
  json j = json::array();
  for (Primitive p : keys.keys()) j.push_back(to_string(p));
  return j;
}

KeySequence key_sequence_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("key sequence must be a JSON list");
  std::vector<Primitive> keys;
  for (const auto& e : j) keys.push_back(primitive_from_string(e.get<std::string>()));
  return KeySequence(std::move(keys));
}

KeySequence read_key_sequence(const std::filesystem::path& path) {
  return parse_guard(path.string(), [&] { return key_sequence_from_json(read_json(path)); });
}

MaskFile masks_from_json(const json& j, const std::string& source) {
  return parse_guard(source, [&] {
    MaskFile out;
    if (j.contains("image_size")) {
      auto [w, h] = pair_of(j.at("image_size"), "image_size");
      out.image_width = static_cast<int>(w);
      out.image_height = static_cast<int>(h);
    }
    auto in_image = [&](int x, int y) { return x >= 0 && y >= 0 && x < out.image_width && y < out.image_height; };
    for (const auto& obj : j.at("objects")) {
      const auto cls = obj.at("class").get<std::string>();
      const bool has_points = obj.contains("points");
      const bool has_rle = obj.contains("rle_rows");
      if (has_points == has_rle) {
        throw std::invalid_argument("object '" + cls + "' needs exactly one of points / rle_rows");
      }
      std::vector<Pixel> pts;
      if (has_points) {
        for (const auto& p : obj.at("points")) pts.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
      } else {
        for (const auto& r : obj.at("rle_rows")) {
          const int y = r.at(0).get<int>();
          const int x0 = r.at(1).get<int>();
          const int len = r.at(2).get<int>();
          if (len < 1) throw std::invalid_argument("object '" + cls + "' has a run of length < 1");
          for (int x = x0; x < x0 + len; ++x) pts.push_back({x, y});
        }
      }
      for (const Pixel& p : pts) {
        if (!in_image(p.x, p.y)) throw std::invalid_argument("object '" + cls + "' has a point outside the image");
      }
      out.scene.masks.emplace_back(cls, std::move(pts));
    }
    return out;
  });
}

MaskFile read_masks(const std::filesystem::path& path) { return masks_from_json(read_json(path), path.string()); }

json masks_to_json(const MaskFile& masks) {
  json objects = json::array();
  for (const Mask& m : masks.scene.masks) {
    std::vector<Pixel> pts(m.points().begin(), m.points().end());
    std::sort(pts.begin(), pts.end(), [](const Pixel& a, const Pixel& b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    json rows = json::array();
    for (std::size_t i = 0; i < pts.size();) {
      std::size_t k = i + 1;
      while (k < pts.size() && pts[k].y == pts[i].y && pts[k].x == pts[k - 1].x + 1) ++k;
      rows.push_back({pts[i].y, pts[i].x, static_cast<int>(k - i)});
      i = k;
    }
    objects.push_back({{"class", m.class_label()}, {"rle_rows", std::move(rows)}});
  }
  return {{"image_size", {masks.image_width, masks.image_height}}, {"objects", std::move(objects)}};
}

std::vector<std::string> parse_corpus(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    const auto first = line.find_first_not_of(" \t");
    if (line[first] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> read_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

Lexicon lexicon_from_json(const json& j) {
  std::map<std::string, Primitive> verbs;
  for (const auto& [surface, prim] : j.at("verbs").items()) {
    verbs.emplace(surface, primitive_from_string(prim.get<std::string>()));
  }
  return Lexicon(std::move(verbs), j.at("objects").get<std::vector<std::string>>());
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  return parse_guard(path.string(), [&] { return lexicon_from_json(read_json(path)); });
}

Calibration calibration_from_json(const json& j) {
  Calibration cal;
  cal.scale = j.at("scale").get<double>();
  if (j.contains("origin")) std::tie(cal.origin_x, cal.origin_y) = pair_of(j.at("origin"), "origin");
  if (j.contains("image_size")) {
    auto [w, h] = pair_of(j.at("image_size"), "image_size");
    cal.image_width = static_cast<int>(w);
    cal.image_height = static_cast<int>(h);
  }
  cal.check();
  return cal;
}

Calibration read_calibration(const std::filesystem::path& path) {
  return parse_guard(path.string(), [&] { return calibration_from_json(read_json(path)); });
}

json pose_to_json(const ObjectPose& p) {
  return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}, {"c", p.c}, {"degenerate", p.degenerate}};
}

ObjectPose pose_from_json(const json& j) {
  ObjectPose p;
  p.x = j.at("x").get<double>();
  p.y = j.at("y").get<double>();
  p.theta = j.value("theta", 0.0);
  p.c = j.at("c").get<std::string>();
  p.degenerate = j.value("degenerate", false);
  return p;
}

json plan_to_json(const BoundPlan& plan) {
  json steps = json::array();
  for (const BoundAction& a : plan.steps) {
    steps.push_back({{"primitive", to_string(a.primitive)},
                     {"primary", optional_pose(a.primary)},
                     {"target", optional_pose(a.target)},
                     {"confidence", to_string(a.confidence)}});
  }
  return steps;
}

BoundPlan plan_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("plan must be a JSON list of steps");
  BoundPlan plan;
  std::vector<Primitive> keys;
  for (const auto& s : j) {
    BoundAction a;
    a.primitive = primitive_from_string(s.at("primitive").get<std::string>());
    a.primary = optional_pose_from(s, "primary");
    a.target = optional_pose_from(s, "target");
    a.confidence = confidence_from_string(s.value("confidence", std::string("normal")));
    keys.push_back(a.primitive);
    plan.steps.push_back(std::move(a));
  }
  plan.source = KeySequence(std::move(keys));
  return plan;
}

BoundPlan read_plan(const std::filesystem::path& path) {
  return parse_guard(path.string(), [&] { return plan_from_json(read_json(path)); });
}

json task_to_json(const TaskSpec& spec) {
  json j{{"kind", to_string(spec.kind)}};
  if (!spec.object.empty()) j["object"] = spec.object;
  if (!spec.container.empty()) j["container"] = spec.container;
  if (!spec.goal.empty()) j["goal"] = spec.goal;
  if (!spec.parts.empty()) {
    j["parts"] = json::array();
    for (const auto& p : spec.parts) j["parts"].push_back(task_to_json(p));
  }
  return j;
}

TaskSpec task_from_json(const json& j) {
  TaskSpec spec;
  spec.kind = task_kind_from_string(j.at("kind").get<std::string>());
  spec.object = j.value("object", std::string());
  spec.container = j.value("container", std::string());
  spec.goal = j.value("goal", std::string());
  if (j.contains("parts")) {
    for (const auto& p : j.at("parts")) spec.parts.push_back(task_from_json(p));
  }
  return spec;
}

namespace {

void check_task_refs(const TaskSpec& spec, const WorldState& w) {
  auto need = [&](const std::string& id, const char* role) {
    if (!id.empty() && !w.objects.contains(id)) {
      throw std::invalid_argument(std::string("task ") + role + " '" + id + "' is not a scenario object");
    }
  };
  need(spec.object, "object");
  need(spec.container, "container");
  need(spec.goal, "goal");
  if (spec.kind == TaskKind::composite && spec.parts.empty()) throw std::invalid_argument("composite task has no parts");
  for (const auto& p : spec.parts) check_task_refs(p, w);
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario sc;
  WorldState& w = sc.world;
  std::tie(w.width, w.height) = pair_of(j.at("workspace"), "workspace");
  if (!(w.width > 0 && w.height > 0)) throw std::invalid_argument("workspace must be positive");

  std::set<std::string> classes;
  for (const auto& o : j.at("objects")) {
    SimObject obj;
    obj.id = o.at("id").get<std::string>();
    obj.cls = o.value("class", obj.id);
    obj.kind = object_kind_from_string(o.value("kind", std::string("item")));
    const auto& pose = o.at("pose");
    obj.x = pose.at(0).get<double>();
    obj.y = pose.at(1).get<double>();
    obj.theta = pose.size() > 2 ? pose.at(2).get<double>() : 0.0;
    obj.radius = o.value("radius", obj.radius);
    obj.aspect = o.value("aspect", obj.aspect);
    if (!(obj.radius > 0.0) || !(obj.aspect > 0.0 && obj.aspect <= 1.0)) {
      throw std::invalid_argument("object '" + obj.id + "' needs radius > 0 and aspect in (0, 1]");
    }
    if (!w.in_bounds(obj.x, obj.y)) throw std::invalid_argument("object '" + obj.id + "' lies outside the workspace");
    if (!classes.insert(obj.cls).second) throw std::invalid_argument("duplicate object class '" + obj.cls + "'");
    if (!w.objects.emplace(obj.id, obj).second) throw std::invalid_argument("duplicate object id '" + obj.id + "'");
  }

  if (j.contains("gripper")) {
    std::tie(w.gripper.x, w.gripper.y) = pair_of(j.at("gripper"), "gripper");
  } else {
    w.gripper.x = w.width / 2;
    w.gripper.y = 0.0;
  }
  const auto& zone = j.at("delivery_zone");
  std::tie(w.zone.x, w.zone.y) = pair_of(zone.at("pose"), "delivery_zone.pose");
  w.zone.radius = zone.value("radius", w.zone.radius);
  if (!w.in_bounds(w.zone.x, w.zone.y) || !(w.zone.radius > 0)) throw std::invalid_argument("bad delivery zone");

  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    w.thresholds.reach = t.value("reach", w.thresholds.reach);
    w.thresholds.contact = t.value("contact", w.thresholds.contact);
    w.thresholds.cap_turn = t.value("cap_turn", w.thresholds.cap_turn);
    w.thresholds.containment = t.value("containment", w.thresholds.containment);
    if (!(w.thresholds.reach > 0 && w.thresholds.contact > 0 && w.thresholds.cap_turn > 0 &&
          w.thresholds.containment >= 0)) {
      throw std::invalid_argument("thresholds must be positive");
    }
  }
  sc.task = task_from_json(j.at("task"));
  check_task_refs(sc.task, w);
  return sc;
}

Scenario read_scenario(const std::filesystem::path& path) {
  return parse_guard(path.string(), [&] { return scenario_from_json(read_json(path)); });
}

PlannerConfig Scenario::planner_config() const {
  PlannerConfig cfg;
  cfg.containers.clear();
  for (const auto& [id, obj] : world.objects) {
    if (obj.kind == ObjectKind::container) cfg.containers.insert(obj.cls);
  }
  cfg.delivery_x = world.zone.x;
  cfg.delivery_y = world.zone.y;
  return cfg;
}

std::string format_trace(const ExecutionTrace& trace) {
  std::string out;
  for (const TraceEntry& e : trace.entries) {
    json j{{"step", e.step},
           {"primitive", to_string(e.action.primitive)},
           {"primary", e.action.primary ? json(e.action.primary->c) : json(nullptr)},
           {"target", e.action.target ? json(e.action.target->c) : json(nullptr)},
           {"pre", hex64(e.pre_digest)},
           {"post", hex64(e.post_digest)},
           {"outcome", e.failure ? "failed" : "ok"}};
    if (e.failure) j["reason"] = *e.failure;
    out += j.dump() + "\n";
  }
  return out;
}

std::string format_model_tsv(const CooccurrenceModel& model) {
  std::ostringstream out;
  out << "action\tobject\tcount\n";
  for (Primitive a : kAllPrimitives) {
    for (const auto& [object, n] : model.counts(a)) out << to_string(a) << '\t' << object << '\t' << n << '\n';
  }
  return out.str();
}

json read_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace imitate
