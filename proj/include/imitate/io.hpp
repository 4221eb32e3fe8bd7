#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "imitate/action_stream.hpp"
#include "imitate/knowledge.hpp"
#include "imitate/planner.hpp"
#include "imitate/pose.hpp"
#include "imitate/tabletop_sim.hpp"

namespace imitate {

/// Malformed input. `line` is 1-based for line-oriented formats, 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Label stream: JSONL, {"frame": <int>, "label": "<primitive>"} per line,
// frames contiguous from 0.
PrimitiveStream parse_label_stream(std::istream& in, const std::string& source = "<labels>");
PrimitiveStream read_label_stream(const std::filesystem::path& path);
std::string format_label_stream(const PrimitiveStream& stream);

nlohmann::json key_sequence_to_json(const KeySequence& keys);
KeySequence key_sequence_from_json(const nlohmann::json& j);
KeySequence read_key_sequence(const std::filesystem::path& path);

// Masks: {"image_size": [w, h], "objects": [{"class", "points": [[x, y], ...]}
//                                           | {"class", "rle_rows": [[y, x_start, run_len], ...]}]}
struct MaskFile {
  int image_width = 600;
  int image_height = 600;
  DetectedScene scene;
};

MaskFile masks_from_json(const nlohmann::json& j, const std::string& source = "<masks>");
MaskFile read_masks(const std::filesystem::path& path);
/// Writes masks in the row run-length form.
nlohmann::json masks_to_json(const MaskFile& masks);

/// Non-empty, non-comment lines.
std::vector<std::string> parse_corpus(std::istream& in);
std::vector<std::string> read_corpus(const std::filesystem::path& path);

Lexicon lexicon_from_json(const nlohmann::json& j);
Lexicon read_lexicon(const std::filesystem::path& path);

// Calibration: {"scale": m_per_px, "origin": [x0, y0], "image_size": [w, h]}
Calibration calibration_from_json(const nlohmann::json& j);
Calibration read_calibration(const std::filesystem::path& path);

nlohmann::json pose_to_json(const ObjectPose& pose);
ObjectPose pose_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const BoundPlan& plan);
BoundPlan plan_from_json(const nlohmann::json& j);
BoundPlan read_plan(const std::filesystem::path& path);

struct Scenario {
  WorldState world;
  TaskSpec task;

  /// Containers and delivery zone as the planner should see them.
  PlannerConfig planner_config() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario read_scenario(const std::filesystem::path& path);

nlohmann::json task_to_json(const TaskSpec& spec);
TaskSpec task_from_json(const nlohmann::json& j);

/// One JSON object per trace entry, newline-terminated.
std::string format_trace(const ExecutionTrace& trace);

/// Tab-separated N(a, o) table in primitive order, then object name.
std::string format_model_tsv(const CooccurrenceModel& model);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace imitate
