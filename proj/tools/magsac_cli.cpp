// Command-line front end: single fits, synthetic sweeps and file benchmarks.
//
// Exit codes: 0 when every run completed, 2 when some runs raised errors,
// 1 on fatal errors (bad arguments, unreadable input).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magsac/magsac.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace magsac;

namespace {

struct Options {
  std::string problem = "homography";
  std::vector<std::string> methods{"magsac"};
  bool post_sigma = false;
  double sigma_max = 10.0;
  int partitions = 10;
  double quantile = 0.99;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::size_t runs = 10;
  std::string out;
  std::size_t max_iterations = 100000;
  std::size_t min_iterations = 20;
  double loop_sigma = 0.3;
  std::size_t inner_iterations = 20;
  double reference_sigma = 1.0;
  double outlier_bound = 0.0;  // 0: derive from the data
  double failure_threshold = harness::kDefaultFailureThreshold;
  unsigned workers = 1;
  unsigned threads = 1;
  bool deterministic = false;
  bool json_output = false;

  // bench-synthetic / gen-synthetic
  std::vector<double> noise{0.5, 1.0, 2.0};
  std::vector<double> outliers{0.5};
  std::size_t points = 200;
  double max_rotation_deg = synthetic::kDefaultMaxRotation * 180.0 / std::numbers::pi;
  double width = 600.0, height = 600.0;

  std::string input;  // fit: file, bench-files: directory
};

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.confidence = o.confidence;
  c.max_iterations = o.max_iterations;
  c.min_iterations = std::min(o.min_iterations, o.max_iterations);
  c.loop_sigma = o.loop_sigma;
  c.inner_iterations = o.inner_iterations;
  c.reference_sigma = o.reference_sigma;
  c.seed = o.seed;
  c.threads = o.threads;
  c.noise.sigma_max = o.sigma_max;
  c.noise.partitions = o.partitions;
  c.noise.quantile = o.quantile;
  c.noise.outlier_bound = o.outlier_bound;
  return c;
}

std::vector<harness::MethodSpec> method_specs(const Options& o) {
  std::vector<harness::MethodSpec> out;
  for (const auto& name : o.methods) {
    auto spec = harness::parse_method(name);
    if (o.post_sigma && spec.base != harness::BaseMethod::kMagsac) spec.post_sigma = true;
    out.push_back(spec);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "no methods given");
  return out;
}

double max_rotation_rad(const Options& o) { return o.max_rotation_deg * std::numbers::pi / 180.0; }

json config_json(const Options& o) {
  return {{"problem", o.problem},
          {"methods", o.methods},
          {"post_sigma", o.post_sigma},
          {"sigma_max", o.sigma_max},
          {"partitions", o.partitions},
          {"quantile", o.quantile},
          {"confidence", o.confidence},
          {"seed", o.seed},
          {"runs", o.runs},
          {"max_iterations", o.max_iterations},
          {"min_iterations", o.min_iterations},
          {"loop_sigma", o.loop_sigma},
          {"inner_iterations", o.inner_iterations},
          {"reference_sigma", o.reference_sigma},
          {"outlier_bound", o.outlier_bound},
          {"failure_threshold", o.failure_threshold},
          {"workers", o.workers},
          {"deterministic", o.deterministic}};
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json aggregates_json(const harness::BenchmarkResult& r) {
  json rows = json::array();
  for (const auto& a : r.aggregates) {
    rows.push_back({{"method", a.method},
                    {"scene", a.scene},
                    {"runs", a.count},
                    {"mean_error", nan_safe(a.mean_error)},
                    {"median_error", nan_safe(a.median_error)},
                    {"mean_time_ms", a.mean_time_ms},
                    {"median_time_ms", a.median_time_ms},
                    {"mean_samples", a.mean_samples},
                    {"median_samples", a.median_samples},
                    {"failure_rate", a.failure_rate}});
  }
  return rows;
}

// CSV to --out (or stdout) plus a JSON sidecar next to the CSV.
int emit(const Options& o, const harness::BenchmarkResult& result, json config) {
  if (o.out.empty()) {
    harness::write_csv(std::cout, result);
  } else {
    std::ofstream csv(o.out);
    if (!csv) throw Error(ErrorCode::kInvalidArgument, "cannot write " + o.out);
    harness::write_csv(csv, result);
    json side = {{"config", std::move(config)},
                 {"aggregates", aggregates_json(result)},
                 {"failed_runs", result.failed_runs},
                 {"errored_runs", result.errored_runs}};
    std::ofstream(o.out + ".json") << side.dump(2) << '\n';
  }
  if (result.errored_runs > 0) {
    std::cerr << result.errored_runs << " run(s) raised errors\n";
    return 2;
  }
  return 0;
}

harness::BenchmarkConfig bench_config(const Options& o) {
  harness::BenchmarkConfig b;
  b.methods = method_specs(o);
  b.runs = o.runs;
  b.seed = o.seed;
  b.solver = solver_config(o);
  b.failure_threshold = o.failure_threshold;
  b.workers = std::max(1u, o.workers);
  b.deterministic = o.deterministic;
  return b;
}

int cmd_bench_synthetic(const Options& o) {
  auto b = bench_config(o);
  const ProblemKind kind = harness::parse_problem(o.problem);
  if (kind == ProblemKind::kFundamental)
    throw Error(ErrorCode::kInvalidArgument, "synthetic scenes exist for homography and line2d only");
  for (double s : o.noise)
    for (double r : o.outliers)
      b.scenes.push_back(kind == ProblemKind::kHomography
                             ? harness::homography_scene_source(s, r, o.points, max_rotation_rad(o))
                             : harness::line_scene_source(s, r, o.points, o.width, o.height));
  auto cfg = config_json(o);
  cfg["noise"] = o.noise;
  cfg["outlier_ratios"] = o.outliers;
  cfg["points"] = o.points;
  cfg["max_rotation_deg"] = o.max_rotation_deg;
  return emit(o, harness::run_benchmark(b), std::move(cfg));
}

int cmd_bench_files(const Options& o) {
  auto b = bench_config(o);
  const ProblemKind kind = harness::parse_problem(o.problem);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.input)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && ext != ".labels" && ext != ".json" && ext != ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kInvalidArgument, "no datasets in " + o.input);
  for (const auto& f : files) {
    // Load once up front so malformed files are fatal rather than per-run errors.
    auto pts = std::make_shared<PointSet>(harness::load_correspondences(f));
    if (!pts->gt_inlier_mask()) throw Error(ErrorCode::kMissingGroundTruth, f.string() + " has no labels sidecar");
    b.scenes.push_back({f.stem().string(), kind, [pts](std::uint64_t) { return *pts; }});
  }
  auto cfg = config_json(o);
  cfg["directory"] = o.input;
  return emit(o, harness::run_benchmark(b), std::move(cfg));
}

template <Problem P>
json model_json(const typename P::Model& m) {
  if constexpr (std::is_same_v<typename P::Model, Line2D>) {
    return {m.a, m.b, m.c};
  } else {
    const Eigen::Matrix3d& M = [&]() -> const Eigen::Matrix3d& {
      if constexpr (std::is_same_v<typename P::Model, Homography>)
        return m.H;
      else
        return m.F;
    }();
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({M(r, 0), M(r, 1), M(r, 2)});
    return rows;
  }
}

int cmd_fit(const Options& o) {
  if (o.methods.size() != 1) throw Error(ErrorCode::kInvalidArgument, "fit takes exactly one --method");
  const PointSet points = harness::load_correspondences(o.input);
  const auto spec = method_specs(o).front();
  return dispatch(harness::parse_problem(o.problem), [&](auto problem) {
    using P = decltype(problem);
    if (points.dim() != P::kPointDim)
      throw Error(ErrorCode::kInvalidArgument, "data has " + std::to_string(points.dim()) + " columns, " +
                                                   std::string(P::kName) + " needs " + std::to_string(P::kPointDim));
    const auto res = harness::run_method<P>(spec, points, solver_config(o));
    json out = {{"method", spec.name()},
                {"problem", std::string(P::kName)},
                {"points", points.size()},
                {"failed", res.failed},
                {"quality", nan_safe(res.quality)},
                {"iterations", res.iterations},
                {"samples", res.samples_drawn},
                {"inliers", res.inliers.size()},
                {"time_ms", o.deterministic ? 0.0 : res.wall_time * 1e3}};
    if (!res.failed) out["model"] = model_json<P>(res.model);
    if (points.gt_inlier_mask()) {
      const auto ev = harness::evaluate<P>(res.failed ? std::nullopt : std::optional(res.model), points,
                                           o.failure_threshold);
      out["error_rms"] = nan_safe(ev.error_rms);
      out["failed_vs_ground_truth"] = ev.failed;
    }
    if (o.json_output) {
      std::cout << out.dump(2) << '\n';
    } else {
      for (auto it = out.begin(); it != out.end(); ++it) std::cout << it.key() << ": " << it.value().dump() << '\n';
    }
    if (!o.out.empty()) std::ofstream(o.out) << out.dump(2) << '\n';
    return res.failed ? 2 : 0;
  });
}

int cmd_gen_synthetic(const Options& o) {
  if (o.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  const ProblemKind kind = harness::parse_problem(o.problem);
  const double noise = o.noise.empty() ? 1.0 : o.noise.front();
  const double ratio = o.outliers.empty() ? 0.0 : o.outliers.front();
  json meta = {{"problem", o.problem}, {"noise", noise}, {"outlier_ratio", ratio}, {"points", o.points}, {"seed", o.seed}};
  if (kind == ProblemKind::kHomography) {
    const auto s = synthetic::generate_homography_scene(noise, ratio, o.points, o.seed, max_rotation_rad(o));
    harness::save_correspondences(o.out, s.points);
    meta["gt_model"] = model_json<HomographyProblem>(s.gt_model);
  } else if (kind == ProblemKind::kLine2D) {
    const auto s = synthetic::generate_line_scene(noise, ratio, o.points, o.width, o.height, o.seed);
    harness::save_correspondences(o.out, s.points);
    meta["gt_model"] = model_json<LineProblem>(s.gt_model);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "synthetic scenes exist for homography and line2d only");
  }
  std::ofstream(o.out + ".json") << meta.dump(2) << '\n';
  return 0;
}

void add_solver_flags(CLI::App* app, Options& o) {
  app->add_option("--problem", o.problem, "line2d, homography or fundamental")
      ->check(CLI::IsMember({"line2d", "homography", "fundamental"}));
  app->add_option("--method", o.methods, "ransac, msac, lo-ransac, lo-msac, magsac (optionally +sigma)")
      ->delimiter(',');
  app->add_flag("--post-sigma", o.post_sigma, "apply sigma-consensus to the output of baseline methods");
  app->add_option("--sigma-max", o.sigma_max, "upper noise bound, pixels")->check(CLI::PositiveNumber);
  app->add_option("--partitions", o.partitions, "sigma partitions d")->check(CLI::Range(2, 100000));
  app->add_option("--quantile", o.quantile, "chi quantile for thresholds")->check(CLI::Range(0.0, 1.0));
  app->add_option("--confidence", o.confidence, "termination confidence")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", o.seed, "base random seed");
  app->add_option("--max-iterations", o.max_iterations, "iteration cap");
  app->add_option("--min-iterations", o.min_iterations, "iterations before termination may trigger");
  app->add_option("--loop-sigma", o.loop_sigma, "baseline inlier threshold, pixels")->check(CLI::PositiveNumber);
  app->add_option("--inner-iterations", o.inner_iterations, "local optimization iterations");
  app->add_option("--reference-sigma", o.reference_sigma, "validation reference sigma, pixels");
  app->add_option("--outlier-bound", o.outlier_bound, "outlier density bound l, pixels (0: from data)");
  app->add_option("--failure-threshold", o.failure_threshold, "RMS error above which a run counts as failed");
  app->add_option("--threads", o.threads, "sigma-consensus threads per run");
  app->add_option("--out", o.out, "output path");
  app->add_flag("--deterministic", o.deterministic, "write 0 for timings so output is byte-stable");
}

void add_bench_flags(CLI::App* app, Options& o) {
  app->add_option("--runs", o.runs, "runs per scene")->check(CLI::PositiveNumber);
  app->add_option("--workers", o.workers, "concurrent runs");
}

void add_scene_flags(CLI::App* app, Options& o) {
  app->add_option("--noise", o.noise, "noise sigma(s), pixels")->delimiter(',');
  app->add_option("--outliers", o.outliers, "outlier ratio(s)")->delimiter(',');
  app->add_option("--points", o.points, "points per scene");
  app->add_option("--max-rotation", o.max_rotation_deg, "camera rotation range per axis, degrees");
  app->add_option("--width", o.width, "line scene box width");
  app->add_option("--height", o.height, "line scene box height");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Robust two-view and line fitting with noise-marginalized scoring"};
  // Options live on the top level so a key=value config file can set any of
  // them; fallthrough lets them follow the subcommand name.
  app.set_config("--config", "", "key=value configuration file, keys are option names without dashes");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);
  add_solver_flags(&app, o);
  add_bench_flags(&app, o);
  add_scene_flags(&app, o);

  auto* fit = app.add_subcommand("fit", "fit one dataset and print the model and metrics");
  fit->add_option("file", o.input, "correspondence file")->required()->check(CLI::ExistingFile);
  fit->add_flag("--json", o.json_output, "print JSON");

  auto* bench_syn = app.add_subcommand("bench-synthetic", "sweep synthetic scenes over noise and outlier grids");

  auto* bench_files = app.add_subcommand("bench-files", "benchmark every labelled dataset in a directory");
  bench_files->add_option("directory", o.input, "dataset directory")->required()->check(CLI::ExistingDirectory);

  auto* gen = app.add_subcommand("gen-synthetic", "write one synthetic scene with its labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit) return cmd_fit(o);
    if (*bench_syn) return cmd_bench_synthetic(o);
    if (*bench_files) return cmd_bench_files(o);
    if (*gen) return cmd_gen_synthetic(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
