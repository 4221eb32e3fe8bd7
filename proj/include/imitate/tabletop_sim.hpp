#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imitate/planner.hpp"
#include "imitate/pose.hpp"

namespace imitate {

enum class ObjectKind { item, container, bottle };

std::string_view to_string(ObjectKind k);
ObjectKind object_kind_from_string(std::string_view s);

struct SimObject {
  std::string id;
  std::string cls;
  ObjectKind kind = ObjectKind::item;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double radius = 0.03;  // footprint, meters
  double aspect = 0.5;   // footprint width / length, used when rendering masks
  double turned = 0.0;   // accumulated cap rotation, radians
  bool opened = false;
  std::optional<std::string> inside;  // container id

  bool operator==(const SimObject&) const = default;
};

struct Gripper {
  double x = 0.0;
  double y = 0.0;
  std::optional<std::string> holding;
  bool closed = false;

  bool operator==(const Gripper&) const = default;
};

struct DeliveryZone {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.08;

  bool operator==(const DeliveryZone&) const = default;
};

struct Thresholds {
  double reach = 0.05;
  double contact = 0.04;
  double cap_turn = 6.0 * std::numbers::pi;
  double containment = 0.0;  // 0 means "use the container footprint radius"

  bool operator==(const Thresholds&) const = default;
};

/// The whole simulated tabletop. Objects are keyed by id.
struct WorldState {
  double width = 0.9;
  double height = 0.9;
  std::map<std::string, SimObject> objects;
  Gripper gripper;
  DeliveryZone zone;
  Thresholds thresholds;
  std::set<std::pair<std::string, std::string>> poured;  // (poured object, container)
  std::size_t clock = 0;

  bool operator==(const WorldState&) const = default;

  /// Id of the first object (by id) with class `cls`.
  std::optional<std::string> find_class(std::string_view cls) const;
  bool in_bounds(double x, double y) const;
};

/// Deterministic text form of a world and its 64-bit FNV-1a digest.
std::string canonical_text(const WorldState& world);
std::uint64_t digest(const WorldState& world);

struct StepOutcome {
  WorldState world;
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Executes one primitive. Motion is instantaneous. On failure the returned
/// world equals the input world (clock included).
StepOutcome apply_primitive(const WorldState& world, const BoundAction& act);

struct TraceEntry {
  std::size_t step = 0;
  BoundAction action;
  std::uint64_t pre_digest = 0;
  std::uint64_t post_digest = 0;
  std::optional<std::string> failure;
};

struct ExecutionTrace {
  std::vector<TraceEntry> entries;
  WorldState final_state;

  bool completed() const;
  std::size_t ok_steps() const;
};

/// Applies steps in order and stops at the first failure.
ExecutionTrace run_plan(const WorldState& world, const BoundPlan& plan);

enum class TaskKind { pick_place, push_away, open_bottle, pour, deliver, composite };

std::string_view to_string(TaskKind k);
TaskKind task_kind_from_string(std::string_view s);

/// Success predicate. Object references are object ids in the scenario.
struct TaskSpec {
  TaskKind kind = TaskKind::pick_place;
  std::string object;
  std::string container;  // pick-place, pour
  std::string goal;       // push-away
  std::vector<TaskSpec> parts;
};

/// Geometric stand-in for "the robot did what the demonstrator did".
/// A trace that stopped on a failure never succeeds.
bool check_success(const ExecutionTrace& trace, const WorldState& final_state, const TaskSpec& spec);

/// Renders every object's rectangular footprint into integer pixel masks,
/// as an overhead camera with calibration `cal` would see them.
DetectedScene render_masks(const WorldState& world, const Calibration& cal);

}  // namespace imitate
