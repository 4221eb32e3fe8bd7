// Command-line front end: filter, plan, run, bench, corpus stats, and the
// fixture helpers synth / render-masks / poses.
//
// Exit codes: 0 success, 1 task failure, 2 input parse error,
//             3 binding (or plan validation) error, 4 scenario mismatch.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "imitate/action_stream.hpp"
#include "imitate/io.hpp"
#include "imitate/knowledge.hpp"
#include "imitate/pipeline.hpp"
#include "imitate/planner.hpp"
#include "imitate/pose.hpp"
#include "imitate/tabletop_sim.hpp"

namespace fs = std::filesystem;
using namespace imitate;

namespace {

enum Exit : int { kOk = 0, kTaskFailure = 1, kParseError = 2, kBindingError = 3, kScenarioMismatch = 4 };

struct Options {
  std::size_t window_width = kDefaultWindowWidth;
  double noise = 0.0;
  std::size_t trials = 10;
  std::size_t frames_per_key = 30;
  std::uint64_t seed = 0;
  std::string labels, masks, corpus, lexicon, scenario, calibration, plan, keys, fixtures, out;
  bool fixed_layout = false;
};

Calibration load_calibration(const Options& o) {
  if (o.calibration.empty()) return BenchConfig{}.calibration;
  return read_calibration(o.calibration);
}

void emit(const Options& o, const std::string& text) {
  if (!o.out.empty()) write_text(o.out, text);
}

int cmd_filter(const Options& o) {
  const auto stream = read_label_stream(o.labels);
  const KeySequence keys = window_filter(stream, WindowWidth(o.window_width));
  const std::string text = key_sequence_to_json(keys).dump() + "\n";
  emit(o, text);
  std::cout << text;
  return kOk;
}

int cmd_plan(const Options& o) {
  const auto stream = read_label_stream(o.labels);
  const MaskFile masks = read_masks(o.masks);
  const Lexicon lex = read_lexicon(o.lexicon);
  const auto corpus = read_corpus(o.corpus);
  const Calibration cal = load_calibration(o);
  PlannerConfig config;
  if (!o.scenario.empty()) config = read_scenario(o.scenario).planner_config();

  CooccurrenceModel model;
  try {
    model = build_model(corpus, lex);
  } catch (const std::exception& e) {
    throw ParseError(o.corpus, 0, e.what());
  }

  const KeySequence keys = window_filter(stream, WindowWidth(o.window_width));
  BoundPlan plan;
  try {
    plan = bind_plan(keys, perceive(masks.scene, cal), model, config);
  } catch (const BindingError& e) {
    std::cerr << "binding error at step " << e.step() << ": " << e.what() << "\n";
    return kBindingError;
  }

  const std::string text = plan_to_json(plan).dump(2) + "\n";
  emit(o, text);
  if (o.out.empty()) std::cout << text;

  const auto violations = validate_plan(plan, config);
  for (const Violation& v : violations) std::cerr << "step " << v.step << ": " << v.message << "\n";
  if (!violations.empty()) return kBindingError;
  std::cerr << "plan: " << plan.steps.size() << " steps " << to_string(keys) << "\n";
  return kOk;
}

int cmd_run(const Options& o) {
  const BoundPlan plan = read_plan(o.plan);
  const Scenario scenario = read_scenario(o.scenario);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    for (const auto* pose : {&plan.steps[i].primary, &plan.steps[i].target}) {
      if (*pose && !is_delivery(*pose) && !scenario.world.find_class((*pose)->c)) {
        std::cerr << "step " << i << ": class '" << (*pose)->c << "' is not in the scenario\n";
        return kScenarioMismatch;
      }
    }
  }

  const ExecutionTrace trace = run_plan(scenario.world, plan);
  const std::string text = format_trace(trace);
  emit(o, text);
  if (o.out.empty()) std::cout << text;

  if (!trace.completed()) {
    const TraceEntry& bad = trace.entries.back();
    std::cerr << "step " << bad.step << " (" << to_string(bad.action.primitive) << ") failed: " << *bad.failure << "\n";
    return kTaskFailure;
  }
  const bool ok = check_success(trace, trace.final_state, scenario.task);
  std::cerr << (ok ? "success" : "failure: task predicate not met") << "\n";
  return ok ? kOk : kTaskFailure;
}

int cmd_bench(const Options& o) {
  const auto tasks = load_bench_tasks(o.fixtures);
  const CooccurrenceModel model = build_model(read_corpus(o.corpus), read_lexicon(o.lexicon));
  BenchConfig config;
  config.window_width = WindowWidth(o.window_width).value;
  config.frames_per_key = o.frames_per_key;
  config.trials = o.trials;
  config.noise = o.noise;
  config.seed = o.seed;
  config.randomize_layout = !o.fixed_layout;
  config.calibration = load_calibration(o);

  const auto results = run_bench(tasks, model, config);
  const std::string tsv = format_bench_tsv(results);
  if (!o.out.empty()) {
    write_text(fs::path(o.out) / "results.tsv", tsv);
    write_text(fs::path(o.out) / "summary.json", bench_summary(results, config).dump(2) + "\n");
  }
  std::cout << tsv;
  return kOk;
}

int cmd_corpus_stats(const Options& o) {
  const auto corpus = read_corpus(o.corpus);
  const CooccurrenceModel model = build_model(corpus, read_lexicon(o.lexicon));
  const std::string tsv = format_model_tsv(model);
  emit(o, tsv);
  std::cout << tsv;
  std::cerr << model.sentence_count() << " sentences used, " << model.skipped_count() << " skipped\n";
  return kOk;
}

int cmd_synth(const Options& o) {
  const KeySequence keys = read_key_sequence(o.keys);
  const std::string text = format_label_stream(synthesize_stream(keys, o.frames_per_key, o.noise, o.seed));
  emit(o, text);
  if (o.out.empty()) std::cout << text;
  return kOk;
}

int cmd_render_masks(const Options& o) {
  const Scenario scenario = read_scenario(o.scenario);
  const Calibration cal = load_calibration(o);
  MaskFile file{cal.image_width, cal.image_height, render_masks(scenario.world, cal)};
  const std::string text = masks_to_json(file).dump() + "\n";
  emit(o, text);
  if (o.out.empty()) std::cout << text;
  return kOk;
}

int cmd_poses(const Options& o) {
  const MaskFile masks = read_masks(o.masks);
  const Calibration cal = load_calibration(o);
  nlohmann::json out = nlohmann::json::array();
  for (const ObjectPose& p : perceive(masks.scene, cal)) out.push_back(pose_to_json(p));
  const std::string text = out.dump(2) + "\n";
  emit(o, text);
  std::cout << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imitation-from-observation pipeline on a simulated tabletop"};
  app.require_subcommand(1);
  Options o;

  auto window = [&](CLI::App* c) {
    c->add_option("-w,--window-width", o.window_width, "Window filter width in frames")->check(CLI::PositiveNumber);
  };
  auto out = [&](CLI::App* c, const std::string& what) { c->add_option("--out", o.out, what); };

  auto* filter = app.add_subcommand("filter", "Extract key primitives from a JSONL label stream");
  filter->add_option("--labels", o.labels, "Label stream (JSONL)")->required();
  window(filter);
  out(filter, "Write the key sequence (JSON list) here");

  auto* plan = app.add_subcommand("plan", "Filter labels, estimate poses, bind objects, validate");
  plan->add_option("--labels", o.labels)->required();
  plan->add_option("--masks", o.masks)->required();
  plan->add_option("--corpus", o.corpus)->required();
  plan->add_option("--lexicon", o.lexicon)->required();
  plan->add_option("--calibration", o.calibration, "Calibration JSON (default 0.0015 m/px, 600x600)");
  plan->add_option("--scenario", o.scenario, "Take container classes and delivery zone from this scenario");
  window(plan);
  out(plan, "Write the plan JSON here");

  auto* run = app.add_subcommand("run", "Execute a plan in the simulator and score it");
  run->add_option("--plan", o.plan)->required();
  run->add_option("--scenario", o.scenario)->required();
  out(run, "Write the JSONL trace here");

  auto* bench = app.add_subcommand("bench", "Seeded end-to-end benchmark over the task fixtures");
  bench->add_option("--fixtures", o.fixtures, "Directory of task sub-directories")->required();
  bench->add_option("--corpus", o.corpus)->required();
  bench->add_option("--lexicon", o.lexicon)->required();
  bench->add_option("--calibration", o.calibration);
  bench->add_option("--noise", o.noise, "Per-frame label corruption rate")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--trials", o.trials, "Trials per task")->check(CLI::PositiveNumber);
  bench->add_option("--seed", o.seed, "Master seed");
  bench->add_option("--frames-per-key", o.frames_per_key)->check(CLI::PositiveNumber);
  bench->add_flag("--fixed-layout", o.fixed_layout, "Keep scenario object poses instead of scattering them");
  window(bench);
  out(bench, "Directory for results.tsv and summary.json");

  auto* corpus = app.add_subcommand("corpus", "Corpus utilities");
  corpus->require_subcommand(1);
  auto* stats = corpus->add_subcommand("stats", "Print the N(action, object) table as TSV");
  stats->add_option("--corpus", o.corpus)->required();
  stats->add_option("--lexicon", o.lexicon)->required();
  out(stats, "Also write the TSV here");

  auto* synth = app.add_subcommand("synth", "Synthesize a (noisy) label stream from a key sequence");
  synth->add_option("--keys", o.keys, "Key sequence JSON list")->required();
  synth->add_option("--frames-per-key", o.frames_per_key)->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.noise)->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", o.seed);
  out(synth, "Write the JSONL stream here");

  auto* render = app.add_subcommand("render-masks", "Render scenario footprints as an RLE mask file");
  render->add_option("--scenario", o.scenario)->required();
  render->add_option("--calibration", o.calibration);
  out(render, "Write the mask JSON here");

  auto* poses = app.add_subcommand("poses", "Estimate world poses from a mask file");
  poses->add_option("--masks", o.masks)->required();
  poses->add_option("--calibration", o.calibration);
  out(poses, "Write the pose list here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*filter) return cmd_filter(o);
    if (*plan) return cmd_plan(o);
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o);
    if (*stats) return cmd_corpus_stats(o);
    if (*synth) return cmd_synth(o);
    if (*render) return cmd_render_masks(o);
    if (*poses) return cmd_poses(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kOk;
}
