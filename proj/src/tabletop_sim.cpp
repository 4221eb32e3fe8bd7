#include "imitate/tabletop_sim.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace imitate {

namespace {

double distance(double ax, double ay, double bx, double by) { return std::hypot(ax - bx, ay - by); }

void append_number(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

/// Moves an object and, transitively, whatever sits inside it.
void move_object(WorldState& w, const std::string& id, double x, double y, int depth = 0) {
  SimObject& obj = w.objects.at(id);
  const double dx = x - obj.x;
  const double dy = y - obj.y;
  obj.x = x;
  obj.y = y;
  if (depth > 8) return;
  for (auto& [other_id, other] : w.objects) {
    if (other.inside == id) move_object(w, other_id, other.x + dx, other.y + dy, depth + 1);
  }
}

void move_gripper(WorldState& w, double x, double y) {
  w.gripper.x = x;
  w.gripper.y = y;
  if (w.gripper.holding) move_object(w, *w.gripper.holding, x, y);
}

void release(WorldState& w) {
  w.gripper.holding.reset();
  w.gripper.closed = false;
}

struct Failed {
  std::string reason;
};

const std::string& resolve(const WorldState& w, const std::optional<ObjectPose>& pose, std::string_view role) {
  if (!pose) throw Failed{std::string("no ") + std::string(role) + " object bound"};
  auto id = w.find_class(pose->c);
  if (!id) throw Failed{"object class '" + pose->c + "' is not in the world"};
  return w.objects.find(*id)->first;
}

void require_reach(const WorldState& w, const SimObject& obj) {
  if (distance(w.gripper.x, w.gripper.y, obj.x, obj.y) > w.thresholds.reach) {
    throw Failed{"'" + obj.id + "' is out of reach"};
  }
}

void step_move(WorldState& w, const BoundAction& act) {
  if (!act.target) return;
  if (is_delivery(act.target)) {
    move_gripper(w, w.zone.x, w.zone.y);
    release(w);
    return;
  }
  if (!w.in_bounds(act.target->x, act.target->y)) throw Failed{"waypoint outside the workspace"};
  move_gripper(w, act.target->x, act.target->y);
}

void step_pick(WorldState& w, const BoundAction& act) {
  if (w.gripper.holding) throw Failed{"already holding '" + *w.gripper.holding + "'"};
  const std::string id = resolve(w, act.primary, "primary");
  SimObject& obj = w.objects.at(id);
  require_reach(w, obj);
  obj.inside.reset();
  w.gripper.x = obj.x;
  w.gripper.y = obj.y;
  w.gripper.holding = id;
  w.gripper.closed = true;
}

void step_place(WorldState& w, const BoundAction& act) {
  if (!w.gripper.holding) throw Failed{"not holding"};
  const std::string held = *w.gripper.holding;
  const std::string id = resolve(w, act.target, "target");
  const SimObject& box = w.objects.at(id);
  if (box.kind != ObjectKind::container) throw Failed{"'" + id + "' is not a container"};
  if (id == held) throw Failed{"cannot place '" + id + "' into itself"};
  move_gripper(w, box.x, box.y);
  w.objects.at(held).inside = id;
  release(w);
}

void step_push(WorldState& w, const BoundAction& act) {
  if (w.gripper.holding) throw Failed{"cannot push while holding '" + *w.gripper.holding + "'"};
  const std::string id = resolve(w, act.primary, "primary");
  const std::string goal = resolve(w, act.target, "target");
  if (id == goal) throw Failed{"push object and target are the same"};
  const SimObject& obj = w.objects.at(id);
  const SimObject& tgt = w.objects.at(goal);
  require_reach(w, obj);
  const double sep = distance(obj.x, obj.y, tgt.x, tgt.y);
  double nx = obj.x, ny = obj.y;
  if (sep > w.thresholds.contact) {
    const double k = w.thresholds.contact / sep;
    nx = tgt.x + (obj.x - tgt.x) * k;
    ny = tgt.y + (obj.y - tgt.y) * k;
  }
  move_object(w, id, nx, ny);
  w.gripper.x = nx;
  w.gripper.y = ny;
}

void step_tilt(WorldState& w, const BoundAction& act) {
  if (!w.gripper.holding) throw Failed{"not holding"};
  const std::string held = *w.gripper.holding;
  const std::string id = resolve(w, act.target, "target");
  const SimObject& box = w.objects.at(id);
  if (box.kind != ObjectKind::container) throw Failed{"'" + id + "' is not a container"};
  if (id == held) throw Failed{"cannot pour '" + id + "' into itself"};
  require_reach(w, box);
  w.poured.emplace(held, id);
}

void step_rotate(WorldState& w, const BoundAction& act) {
  std::string id;
  if (w.gripper.holding) {
    id = *w.gripper.holding;
  } else {
    id = resolve(w, act.primary, "primary");
    require_reach(w, w.objects.at(id));
  }
  SimObject& obj = w.objects.at(id);
  obj.turned += w.thresholds.cap_turn;
  if (obj.kind == ObjectKind::bottle && obj.turned >= w.thresholds.cap_turn) obj.opened = true;
}

const SimObject* find_object(const WorldState& w, const std::string& id) {
  auto it = w.objects.find(id);
  return it == w.objects.end() ? nullptr : &it->second;
}

bool task_holds(const WorldState& w, const TaskSpec& spec) {
  switch (spec.kind) {
    case TaskKind::pick_place: {
      const SimObject* obj = find_object(w, spec.object);
      const SimObject* box = find_object(w, spec.container);
      if (!obj || !box) return false;
      const double radius = w.thresholds.containment > 0.0 ? w.thresholds.containment : box->radius;
      return distance(obj->x, obj->y, box->x, box->y) <= radius;
    }
    case TaskKind::push_away: {
      const SimObject* obj = find_object(w, spec.object);
      const SimObject* goal = find_object(w, spec.goal);
      if (!obj || !goal) return false;
      return distance(obj->x, obj->y, goal->x, goal->y) <= w.thresholds.contact + 1e-9;
    }
    case TaskKind::open_bottle: {
      const SimObject* obj = find_object(w, spec.object);
      return obj && obj->opened;
    }
    case TaskKind::pour:
      if (spec.object.empty()) {
        for (const auto& [src, dst] : w.poured) {
          if (dst == spec.container) return true;
        }
        return false;
      }
      return w.poured.contains({spec.object, spec.container});
    case TaskKind::deliver: {
      const SimObject* obj = find_object(w, spec.object);
      return obj && distance(obj->x, obj->y, w.zone.x, w.zone.y) <= w.zone.radius;
    }
    case TaskKind::composite:
      if (spec.parts.empty()) return false;
      for (const TaskSpec& part : spec.parts) {
        if (!task_holds(w, part)) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(ObjectKind k) {
  switch (k) {
    case ObjectKind::item:
      return "item";
    case ObjectKind::container:
      return "container";
    case ObjectKind::bottle:
      return "bottle";
  }
  return "item";
}

ObjectKind object_kind_from_string(std::string_view s) {
  if (s == "item") return ObjectKind::item;
  if (s == "container") return ObjectKind::container;
  if (s == "bottle") return ObjectKind::bottle;
  throw std::invalid_argument("unknown object kind '" + std::string(s) + "'");
}

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::pick_place:
      return "pick-place";
    case TaskKind::push_away:
      return "push-away";
    case TaskKind::open_bottle:
      return "open-bottle";
    case TaskKind::pour:
      return "pour";
    case TaskKind::deliver:
      return "deliver";
    case TaskKind::composite:
      return "composite";
  }
  return "composite";
}

TaskKind task_kind_from_string(std::string_view s) {
  for (TaskKind k : {TaskKind::pick_place, TaskKind::push_away, TaskKind::open_bottle, TaskKind::pour,
                     TaskKind::deliver, TaskKind::composite}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown task kind '" + std::string(s) + "'");
}

std::optional<std::string> WorldState::find_class(std::string_view cls) const {
  for (const auto& [id, obj] : objects) {
    if (obj.cls == cls) return id;
  }
  return std::nullopt;
}

bool WorldState::in_bounds(double x, double y) const { return x >= 0.0 && x <= width && y >= 0.0 && y <= height; }

std::string canonical_text(const WorldState& w) {
  std::string out;
  auto num = [&](double v) {
    append_number(out, v);
    out.push_back(' ');
  };
  out += "world ";
  num(w.width);
  num(w.height);
  out += "clock " + std::to_string(w.clock) + "\n";
  for (const auto& [id, o] : w.objects) {
    out += "obj " + id + " " + o.cls + " " + std::string(to_string(o.kind)) + " ";
    num(o.x);
    num(o.y);
    num(o.theta);
    num(o.radius);
    num(o.aspect);
    num(o.turned);
    out += o.opened ? "opened " : "closed ";
    out += "in=" + o.inside.value_or("-") + "\n";
  }
  out += "gripper ";
  num(w.gripper.x);
  num(w.gripper.y);
  out += "holding=" + w.gripper.holding.value_or("-") + (w.gripper.closed ? " closed\n" : " open\n");
  out += "zone ";
  num(w.zone.x);
  num(w.zone.y);
  num(w.zone.radius);
  out += "\nthresholds ";
  num(w.thresholds.reach);
  num(w.thresholds.contact);
  num(w.thresholds.cap_turn);
  num(w.thresholds.containment);
  out += "\n";
  for (const auto& [src, dst] : w.poured) out += "poured " + src + " " + dst + "\n";
  return out;
}

std::uint64_t digest(const WorldState& world) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(world)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

StepOutcome apply_primitive(const WorldState& world, const BoundAction& act) {
  WorldState next = world;
  try {
    switch (act.primitive) {
      case Primitive::idle:
        break;
      case Primitive::move:
        step_move(next, act);
        break;
      case Primitive::pick:
        step_pick(next, act);
        break;
      case Primitive::place:
        step_place(next, act);
        break;
      case Primitive::push:
        step_push(next, act);
        break;
      case Primitive::tilt:
        step_tilt(next, act);
        break;
      case Primitive::rotate:
        step_rotate(next, act);
        break;
    }
  } catch (const Failed& f) {
    return {world, f.reason};
  }
  ++next.clock;
  return {std::move(next), std::nullopt};
}

bool ExecutionTrace::completed() const {
  return entries.empty() || !entries.back().failure.has_value();
}

std::size_t ExecutionTrace::ok_steps() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.failure ? 0 : 1;
  return n;
}

ExecutionTrace run_plan(const WorldState& world, const BoundPlan& plan) {
  ExecutionTrace trace{{}, world};
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    TraceEntry entry;
    entry.step = i;
    entry.action = plan.steps[i];
    entry.pre_digest = digest(trace.final_state);
    StepOutcome out = apply_primitive(trace.final_state, plan.steps[i]);
    entry.failure = out.failure;
    trace.final_state = std::move(out.world);
    entry.post_digest = digest(trace.final_state);
    trace.entries.push_back(std::move(entry));
    if (!trace.completed()) break;
  }
  return trace;
}

bool check_success(const ExecutionTrace& trace, const WorldState& final_state, const TaskSpec& spec) {
  if (!trace.completed()) return false;
  return task_holds(final_state, spec);
}

DetectedScene render_masks(const WorldState& world, const Calibration& cal) {
  cal.check();
  DetectedScene scene;
  for (const auto& [id, obj] : world.objects) {
    const double half_len = obj.radius;
    const double half_wid = obj.radius * obj.aspect;
    const double c = std::cos(obj.theta);
    const double s = std::sin(obj.theta);
    // Pixel (i, j) sits at world (origin + scale * i, origin + scale * j).
    const double reach_px = half_len / cal.scale + 1.0;
    const double ci = (obj.x - cal.origin_x) / cal.scale;
    const double cj = (obj.y - cal.origin_y) / cal.scale;
    const int i0 = std::max(0, static_cast<int>(std::floor(ci - reach_px)));
    const int i1 = std::min(cal.image_width - 1, static_cast<int>(std::ceil(ci + reach_px)));
    const int j0 = std::max(0, static_cast<int>(std::floor(cj - reach_px)));
    const int j1 = std::min(cal.image_height - 1, static_cast<int>(std::ceil(cj + reach_px)));
    std::vector<Pixel> pts;
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const double dx = cal.origin_x + cal.scale * i - obj.x;
        const double dy = cal.origin_y + cal.scale * j - obj.y;
        const double along = dx * c + dy * s;
        const double across = -dx * s + dy * c;
        if (std::abs(along) <= half_len && std::abs(across) <= half_wid) pts.push_back({i, j});
      }
    }
    if (!pts.empty()) scene.masks.emplace_back(obj.cls, std::move(pts));
  }
  return scene;
}

}  // namespace imitate
