#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "imitate/action_stream.hpp"
#include "imitate/io.hpp"
#include "imitate/knowledge.hpp"
#include "imitate/pose.hpp"
#include "imitate/random.hpp"
#include "imitate/tabletop_sim.hpp"

namespace imitate {

/// Masks -> world poses.
std::vector<ObjectPose> perceive(const DetectedScene& scene, const Calibration& cal);

/// One benchmark task: a scenario plus the demonstrated key sequence.
struct BenchTask {
  std::string name;
  Scenario scenario;
  KeySequence keys;
};

/// Loads every sub-directory of `dir` holding scenario.json and keys.json,
/// in name order.
std::vector<BenchTask> load_bench_tasks(const std::filesystem::path& dir);

struct BenchConfig {
  std::size_t window_width = kDefaultWindowWidth;
  std::size_t frames_per_key = 30;
  std::size_t trials = 10;
  double noise = 0.0;
  std::uint64_t seed = 0;
  bool randomize_layout = true;
  Calibration calibration{0.0015, 0.0, 0.0, 600, 600};
};

struct TrialResult {
  bool success = false;
  bool keys_exact = false;
  std::size_t steps = 0;
  std::string failure;  // empty on success
};

/// Scatters objects uniformly over the table with clearance between
/// footprints and away from the delivery zone. Throws if no layout is found.
WorldState randomize_layout(const WorldState& world, Rng& rng);

/// Full pipeline for one trial: layout, masks, poses, noisy labels, window
/// filter, binding, validation, execution and scoring.
TrialResult run_trial(const BenchTask& task, const CooccurrenceModel& model, const BenchConfig& config,
                      std::size_t task_index, std::size_t trial);

struct TaskResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t keys_exact = 0;
  double mean_steps = 0.0;
  std::map<std::string, std::size_t> failures;

  double success_rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

std::vector<TaskResult> run_bench(const std::vector<BenchTask>& tasks, const CooccurrenceModel& model,
                                  const BenchConfig& config);

std::string format_bench_tsv(const std::vector<TaskResult>& results);
nlohmann::json bench_summary(const std::vector<TaskResult>& results, const BenchConfig& config);

}  // namespace imitate
