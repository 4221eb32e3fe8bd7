#include "imitate/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "imitate/planner.hpp"

namespace imitate {

std::vector<ObjectPose> perceive(const DetectedScene& scene, const Calibration& cal) {
  std::vector<ObjectPose> poses;
  poses.reserve(scene.masks.size());
  for (const Mask& m : scene.masks) poses.push_back(to_world(estimate_pose(m), cal));
  return poses;
}

std::vector<BenchTask> load_bench_tasks(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> subdirs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "scenario.json") &&
        std::filesystem::exists(entry.path() / "keys.json")) {
      subdirs.push_back(entry.path());
    }
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<BenchTask> tasks;
  for (const auto& d : subdirs) {
    tasks.push_back({d.filename().string(), read_scenario(d / "scenario.json"), read_key_sequence(d / "keys.json")});
  }
  if (tasks.empty()) throw ParseError(dir.string(), 0, "no task directories found");
  return tasks;
}

WorldState randomize_layout(const WorldState& world, Rng& rng) {
  constexpr double kClearance = 0.06;
  constexpr double kEdge = 0.02;
  constexpr int kAttempts = 2000;

  WorldState out = world;
  std::vector<const SimObject*> placed;
  for (auto& [id, obj] : out.objects) {
    const double margin = obj.radius + kEdge;
    bool ok = false;
    for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
      const double x = rng.uniform(margin, out.width - margin);
      const double y = rng.uniform(margin, out.height - margin);
      ok = std::hypot(x - out.zone.x, y - out.zone.y) >= out.zone.radius + obj.radius + kClearance / 2;
      for (const SimObject* other : placed) {
        ok = ok && std::hypot(x - other->x, y - other->y) >= obj.radius + other->radius + kClearance;
      }
      if (ok) {
        obj.x = x;
        obj.y = y;
        obj.theta = rng.uniform(0.0, std::numbers::pi);
      }
    }
    if (!ok) throw std::runtime_error("randomize_layout: no free spot for '" + id + "'");
    placed.push_back(&obj);
  }
  return out;
}

TrialResult run_trial(const BenchTask& task, const CooccurrenceModel& model, const BenchConfig& config,
                      std::size_t task_index, std::size_t trial) {
  const std::uint64_t counter = (static_cast<std::uint64_t>(task_index) << 32) | (static_cast<std::uint64_t>(trial) << 1);
  Rng layout_rng(mix_seed(config.seed, counter));

  TrialResult result;
  WorldState world = config.randomize_layout ? randomize_layout(task.scenario.world, layout_rng) : task.scenario.world;

  const auto poses = perceive(render_masks(world, config.calibration), config.calibration);
  const auto stream = synthesize_stream(task.keys, config.frames_per_key, config.noise, mix_seed(config.seed, counter | 1));
  const KeySequence keys = window_filter(stream, WindowWidth(config.window_width));
  result.keys_exact = keys == task.keys;

  Scenario scenario{world, task.scenario.task};
  const PlannerConfig planner = scenario.planner_config();
  BoundPlan plan;
  try {
    plan = bind_plan(keys, poses, model, planner);
  } catch (const BindingError&) {
    result.failure = "binding";
    return result;
  }
  if (!validate_plan(plan, planner).empty()) {
    result.failure = "validation";
    return result;
  }

  const ExecutionTrace trace = run_plan(world, plan);
  result.steps = trace.ok_steps();
  if (!trace.completed()) {
    result.failure = "execution:" + std::string(to_string(trace.entries.back().action.primitive));
    return result;
  }
  result.success = check_success(trace, trace.final_state, task.scenario.task);
  if (!result.success) result.failure = "predicate";
  return result;
}

std::vector<TaskResult> run_bench(const std::vector<BenchTask>& tasks, const CooccurrenceModel& model,
                                  const BenchConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trial count must be at least 1");
  std::vector<TaskResult> results;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    TaskResult r;
    r.name = tasks[t].name;
    std::size_t step_sum = 0;
    for (std::size_t k = 0; k < config.trials; ++k) {
      const TrialResult trial = run_trial(tasks[t], model, config, t, k);
      ++r.trials;
      r.successes += trial.success ? 1 : 0;
      r.keys_exact += trial.keys_exact ? 1 : 0;
      step_sum += trial.steps;
      if (!trial.success) ++r.failures[trial.failure];
    }
    r.mean_steps = static_cast<double>(step_sum) / static_cast<double>(r.trials);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_bench_tsv(const std::vector<TaskResult>& results) {
  std::ostringstream out;
  out << "task\ttrials\tsuccesses\tsuccess_rate\tkeys_exact\tmean_steps\tfailures\n";
  char buf[64];
  for (const TaskResult& r : results) {
    out << r.name << '\t' << r.trials << '\t' << r.successes << '\t';
    std::snprintf(buf, sizeof buf, "%.4f", r.success_rate());
    out << buf << '\t' << r.keys_exact << '\t';
    std::snprintf(buf, sizeof buf, "%.3f", r.mean_steps);
    out << buf << '\t';
    if (r.failures.empty()) out << '-';
    bool first = true;
    for (const auto& [reason, n] : r.failures) {
      out << (first ? "" : ";") << reason << '=' << n;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json bench_summary(const std::vector<TaskResult>& results, const BenchConfig& config) {
  nlohmann::json tasks = nlohmann::json::array();
  std::size_t successes = 0, trials = 0;
  for (const TaskResult& r : results) {
    tasks.push_back({{"task", r.name},
                     {"trials", r.trials},
                     {"successes", r.successes},
                     {"success_rate", r.success_rate()},
                     {"keys_exact", r.keys_exact},
                     {"mean_steps", r.mean_steps},
                     {"failures", r.failures}});
    successes += r.successes;
    trials += r.trials;
  }
  return {{"window_width", config.window_width},
          {"frames_per_key", config.frames_per_key},
          {"noise", config.noise},
          {"trials_per_task", config.trials},
          {"seed", config.seed},
          {"randomize_layout", config.randomize_layout},
          {"overall_success_rate", trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0},
          {"tasks", std::move(tasks)}};
}

}  // namespace imitate
