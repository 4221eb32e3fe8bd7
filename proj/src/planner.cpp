#include "imitate/planner.hpp"

#include <algorithm>

namespace imitate {

namespace {

bool bears_object(Primitive p) { return p != Primitive::idle && p != Primitive::move; }

const ObjectPose& pose_of(std::span<const ObjectPose> scene, const std::string& cls) {
  auto it = std::find_if(scene.begin(), scene.end(), [&](const ObjectPose& p) { return p.c == cls; });
  return *it;  // callers only ask for classes drawn from the scene
}

/// The object a move before this step should approach.
const std::optional<ObjectPose>& approach_pose(const BoundAction& a) {
  switch (a.primitive) {
    case Primitive::place:
    case Primitive::tilt:
      return a.target;
    default:
      return a.primary;
  }
}

DetectedSet without(DetectedSet set, const std::optional<std::string>& name) {
  if (name) set.erase(*name);
  return set;
}

}  // namespace

std::string_view to_string(Confidence c) { return c == Confidence::low ? "low" : "normal"; }

Confidence confidence_from_string(std::string_view s) {
  if (s == "normal") return Confidence::normal;
  if (s == "low") return Confidence::low;
  throw std::invalid_argument("unknown confidence '" + std::string(s) + "'");
}

bool is_delivery(const std::optional<ObjectPose>& pose) { return pose && pose->c == kDeliveryZoneClass; }

int arity(Primitive p, bool holding) {
  switch (p) {
    case Primitive::idle:
    case Primitive::move:
      return 0;
    case Primitive::pick:
    case Primitive::place:
    case Primitive::rotate:
      return 1;
    case Primitive::push:
      return 2;
    case Primitive::tilt:
      return holding ? 1 : 2;
  }
  return 0;
}

BoundPlan bind_plan(const KeySequence& keys, std::span<const ObjectPose> scene, const CooccurrenceModel& model,
                    const PlannerConfig& config) {
  const std::size_t n = keys.size();
  std::vector<bool> object_step_follows(n, false);
  for (std::size_t i = n; i-- > 1;) {
    object_step_follows[i - 1] = object_step_follows[i] || bears_object(keys[i]);
  }

  DetectedSet available;
  for (const ObjectPose& p : scene) available.insert(p.c);

  BoundPlan plan{{}, keys};
  plan.steps.reserve(n);
  std::optional<std::string> holding;

  auto need = [&](std::size_t step, const DetectedSet& cand, Primitive p) {
    if (cand.empty()) {
      throw BindingError(step, "no candidate object left for '" + std::string(to_string(p)) + "'");
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Primitive p = keys[i];
    BoundAction step{p, std::nullopt, std::nullopt, Confidence::normal};
    auto flag = [&](bool low) {
      if (low) step.confidence = Confidence::low;
    };

    try {
      switch (p) {
        case Primitive::idle:
          break;
        case Primitive::move:
          if (!object_step_follows[i]) {
            ObjectPose zone{config.delivery_x, config.delivery_y, 0.0, std::string(kDeliveryZoneClass), false};
            step.target = zone;
            if (holding) {
              available.erase(*holding);
              holding.reset();
            }
          }
          break;
        case Primitive::pick: {
          auto cand = without(available, holding);
          need(i, cand, p);
          auto sel = select_single_object(model, p, cand);
          step.primary = pose_of(scene, sel.object);
          flag(sel.low_confidence);
          holding = sel.object;
          break;
        }
        case Primitive::place: {
          auto cand = without(available, holding);
          need(i, cand, p);
          auto sel = select_single_object(model, p, cand);
          step.target = pose_of(scene, sel.object);
          flag(sel.low_confidence);
          if (holding) {
            available.erase(*holding);
            holding.reset();
          }
          break;
        }
        case Primitive::rotate:
          if (holding) {
            step.primary = pose_of(scene, *holding);
          } else {
            need(i, available, p);
            auto sel = select_single_object(model, p, available);
            step.primary = pose_of(scene, sel.object);
            flag(sel.low_confidence);
          }
          break;
        case Primitive::push: {
          auto sel = select_object_pair(model, p, without(available, holding));
          step.primary = pose_of(scene, sel.primary);
          step.target = pose_of(scene, sel.target);
          flag(sel.low_confidence);
          break;
        }
        case Primitive::tilt:
          if (holding) {
            auto cand = without(available, holding);
            need(i, cand, p);
            auto sel = select_single_object(model, p, cand);
            step.target = pose_of(scene, sel.object);
            flag(sel.low_confidence);
          } else {
            auto sel = select_object_pair(model, p, available);
            step.primary = pose_of(scene, sel.primary);
            step.target = pose_of(scene, sel.target);
            flag(sel.low_confidence);
          }
          break;
      }
    } catch (const SelectionError& e) {
      throw BindingError(i, e.what());
    }
    plan.steps.push_back(std::move(step));
  }

  // Approach waypoints for moves, now that every later step is bound.
  for (std::size_t i = 0; i < n; ++i) {
    if (keys[i] != Primitive::move || !object_step_follows[i]) continue;
    std::size_t j = i + 1;
    while (!bears_object(keys[j])) ++j;
    plan.steps[i].target = approach_pose(plan.steps[j]);
    plan.steps[i].confidence = plan.steps[j].confidence;
  }
  return plan;
}

std::vector<Violation> validate_plan(const BoundPlan& plan, const PlannerConfig& config) {
  std::vector<Violation> out;
  bool holding = false;
  auto report = [&](std::size_t i, std::string msg) { out.push_back({i, std::move(msg)}); };
  auto check_container = [&](std::size_t i, const BoundAction& a) {
    if (a.target && !config.containers.contains(a.target->c)) {
      report(i, std::string(to_string(a.primitive)) + " target '" + a.target->c + "' is not a container");
    }
  };

  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const BoundAction& a = plan.steps[i];
    const std::string name(to_string(a.primitive));
    switch (a.primitive) {
      case Primitive::idle:
        break;
      case Primitive::move:
        if (is_delivery(a.target)) holding = false;
        break;
      case Primitive::pick:
        if (!a.primary) report(i, "pick has no object");
        if (holding) report(i, "pick while holding");
        holding = true;
        break;
      case Primitive::place:
        if (!a.target) report(i, "place has no target");
        if (!holding) report(i, "place while not holding");
        check_container(i, a);
        holding = false;
        break;
      case Primitive::rotate:
        if (!a.primary) report(i, "rotate has no object");
        break;
      case Primitive::push:
        if (!a.primary || !a.target) report(i, "push needs an object and a target");
        if (holding) report(i, "push while holding");
        break;
      case Primitive::tilt:
        if (!a.target) report(i, "tilt has no target");
        if (!holding) report(i, "tilt while not holding");
        check_container(i, a);
        break;
    }
    if (a.primitive != Primitive::move && a.primitive != Primitive::idle && a.primary && is_delivery(a.primary)) {
      report(i, name + " bound to the delivery zone");
    }
  }
  return out;
}

}  // namespace imitate
