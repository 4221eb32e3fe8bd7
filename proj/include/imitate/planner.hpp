#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imitate/action_stream.hpp"
#include "imitate/knowledge.hpp"
#include "imitate/pose.hpp"

namespace imitate {

/// Class name carried by a move that heads for the hand-over zone.
inline constexpr std::string_view kDeliveryZoneClass = "delivery-zone";

enum class Confidence { normal, low };

std::string_view to_string(Confidence c);
Confidence confidence_from_string(std::string_view s);

/// One plan step. pick and rotate use `primary`, place uses `target`, push
/// uses both, tilt uses `target` (plus `primary` when nothing is held), and
/// move carries its approach waypoint in `target`.
struct BoundAction {
  Primitive primitive = Primitive::idle;
  std::optional<ObjectPose> primary;
  std::optional<ObjectPose> target;
  Confidence confidence = Confidence::normal;

  bool operator==(const BoundAction&) const = default;
};

struct BoundPlan {
  std::vector<BoundAction> steps;
  KeySequence source;
};

struct PlannerConfig {
  /// Classes that may receive a place or a pour.
  std::set<std::string> containers = {"bowl", "paper-box", "plastic-box", "plate", "white plate", "white-box"};
  double delivery_x = 0.0;
  double delivery_y = 0.0;
};

/// Number of objects a primitive interacts with. tilt with the poured object
/// already in hand only needs its target.
int arity(Primitive p, bool holding);

class BindingError : public std::runtime_error {
 public:
  BindingError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Binds every key to scene objects through the co-occurrence model.
///
/// The planner tracks what the gripper holds and which objects have already
/// been put into a container (those leave the candidate set). A move is bound
/// to the pose of the next object-bearing step's approach object, or to the
/// delivery zone when no such step follows; a delivery move hands over the
/// held object. When several poses share a class the first one is used.
BoundPlan bind_plan(const KeySequence& keys, std::span<const ObjectPose> scene, const CooccurrenceModel& model,
                    const PlannerConfig& config = {});

struct Violation {
  std::size_t step;
  std::string message;
  bool operator==(const Violation&) const = default;
};

/// Gripper consistency, arity completeness and container membership.
/// Empty result means the plan is valid.
std::vector<Violation> validate_plan(const BoundPlan& plan, const PlannerConfig& config = {});

bool is_delivery(const std::optional<ObjectPose>& pose);

}  // namespace imitate
