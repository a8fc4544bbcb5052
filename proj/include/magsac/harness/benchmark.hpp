#ifndef MAGSAC_HARNESS_BENCHMARK_HPP_
#define MAGSAC_HARNESS_BENCHMARK_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "magsac/core/errors.hpp"
#include "magsac/core/types.hpp"
#include "magsac/estimators/config.hpp"
#include "magsac/estimators/magsac.hpp"
#include "magsac/estimators/ransac.hpp"
#include "magsac/geometry/problems.hpp"
#include "magsac/harness/evaluate.hpp"
#include "magsac/scoring/noise_config.hpp"
#include "magsac/synthetic/scenes.hpp"

namespace magsac::harness {

enum class BaseMethod { kRansac, kMsac, kLoRansac, kLoMsac, kMagsac };

struct MethodSpec {
  BaseMethod base = BaseMethod::kMagsac;
  bool post_sigma = false;

  std::string name() const {
    static constexpr const char* kNames[] = {"ransac", "msac", "lo-ransac", "lo-msac", "magsac"};
    return std::string(kNames[static_cast<int>(base)]) + (post_sigma ? "+sigma" : "");
  }
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// Accepts "ransac", "msac", "lo-ransac", "lo-msac", "magsac", each baseline
/// optionally suffixed with "+sigma".
inline MethodSpec parse_method(std::string_view text) {
  MethodSpec spec;
  constexpr std::string_view kSuffix = "+sigma";
  if (text.size() > kSuffix.size() && text.substr(text.size() - kSuffix.size()) == kSuffix) {
    spec.post_sigma = true;
    text.remove_suffix(kSuffix.size());
  }
  if (text == "ransac")
    spec.base = BaseMethod::kRansac;
  else if (text == "msac")
    spec.base = BaseMethod::kMsac;
  else if (text == "lo-ransac")
    spec.base = BaseMethod::kLoRansac;
  else if (text == "lo-msac")
    spec.base = BaseMethod::kLoMsac;
  else if (text == "magsac")
    spec.base = BaseMethod::kMagsac;
  else
    throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(text) + "'");
  if (spec.post_sigma && spec.base == BaseMethod::kMagsac)
    throw Error(ErrorCode::kInvalidArgument, "magsac already applies sigma-consensus");
  return spec;
}

inline ProblemKind parse_problem(std::string_view text) {
  if (text == "line2d") return ProblemKind::kLine2D;
  if (text == "homography") return ProblemKind::kHomography;
  if (text == "fundamental") return ProblemKind::kFundamental;
  throw Error(ErrorCode::kInvalidArgument, "unknown problem '" + std::string(text) + "'");
}

/// Fills the noise model from the data when no outlier bound was configured.
template <Problem P>
SolverConfig prepare_config(SolverConfig cfg, const PointSet& points) {
  if (!(cfg.noise.outlier_bound > 0.0)) {
    cfg.noise = default_noise_config<P>(points, cfg.noise.sigma_max, cfg.noise.partitions, cfg.noise.quantile);
  }
  return cfg;
}

template <Problem P>
EstimationResult<typename P::Model> run_method(const MethodSpec& spec, const PointSet& points, SolverConfig cfg) {
  cfg = prepare_config<P>(std::move(cfg), points);
  cfg.enable_post_sigma = spec.post_sigma;
  cfg.enable_lo = spec.base == BaseMethod::kLoRansac || spec.base == BaseMethod::kLoMsac;
  switch (spec.base) {
    case BaseMethod::kRansac:
    case BaseMethod::kLoRansac: return ransac_family<P>(points, cfg, QualityKind::kRansac);
    case BaseMethod::kMsac:
    case BaseMethod::kLoMsac: return ransac_family<P>(points, cfg, QualityKind::kMsac);
    case BaseMethod::kMagsac: break;
  }
  return magsac<P>(points, cfg);
}

struct RunRecord {
  std::string method;
  std::string scene;
  std::size_t run = 0;
  double error_rms = std::numeric_limits<double>::quiet_NaN();
  double time_ms = 0.0;
  std::size_t samples = 0;
  bool failed = true;
};

struct AggregateRow {
  std::string method;
  std::string scene;  // "all" for rows pooled over scenes
  std::size_t count = 0;
  double mean_error = std::numeric_limits<double>::quiet_NaN();  // over runs that returned a model
  double median_error = std::numeric_limits<double>::quiet_NaN();
  double mean_time_ms = 0.0;
  double median_time_ms = 0.0;
  double mean_samples = 0.0;
  double median_samples = 0.0;
  double failure_rate = 0.0;
};

/// A dataset source: produces the points for one run from the run seed.
/// File-backed scenes ignore the seed.
struct BenchmarkScene {
  std::string name;
  ProblemKind problem = ProblemKind::kHomography;
  std::function<PointSet(std::uint64_t)> make;
};

struct BenchmarkConfig {
  std::vector<MethodSpec> methods;
  std::vector<BenchmarkScene> scenes;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;  // seed is overridden per run
  double failure_threshold = kDefaultFailureThreshold;
  unsigned workers = 1;  // concurrent runs
  bool deterministic = false;  // report time_ms as 0
};

struct BenchmarkResult {
  std::vector<RunRecord> records;  // ordered by (method, scene, run)
  std::vector<AggregateRow> aggregates;
  std::size_t failed_runs = 0;
  std::size_t errored_runs = 0;  // runs that threw
};

/// Seed shared by every method for a given (scene, run).
inline std::uint64_t run_seed(std::uint64_t base, std::size_t scene, std::size_t run) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (1 + scene * 1000003ULL + run);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline BenchmarkScene homography_scene_source(double noise, double outlier_ratio, std::size_t n_total = 200,
                                              double max_rotation = synthetic::kDefaultMaxRotation) {
  char name[64];
  std::snprintf(name, sizeof name, "homography_n%g_o%g", noise, outlier_ratio);
  return {name, ProblemKind::kHomography, [=](std::uint64_t seed) {
            return synthetic::generate_homography_scene(noise, outlier_ratio, n_total, seed, max_rotation).points;
          }};
}

inline BenchmarkScene line_scene_source(double noise, double outlier_ratio, std::size_t n_total = 200,
                                        double width = 600.0, double height = 600.0) {
  char name[64];
  std::snprintf(name, sizeof name, "line_n%g_o%g", noise, outlier_ratio);
  return {name, ProblemKind::kLine2D, [=](std::uint64_t seed) {
            return synthetic::generate_line_scene(noise, outlier_ratio, n_total, width, height, seed).points;
          }};
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline AggregateRow aggregate(const std::string& method, const std::string& scene,
                              const std::vector<const RunRecord*>& rows) {
  AggregateRow a;
  a.method = method;
  a.scene = scene;
  a.count = rows.size();
  std::vector<double> err, time, samples;
  std::size_t failures = 0;
  for (const RunRecord* r : rows) {
    if (std::isfinite(r->error_rms)) err.push_back(r->error_rms);
    time.push_back(r->time_ms);
    samples.push_back(static_cast<double>(r->samples));
    failures += r->failed ? 1 : 0;
  }
  a.mean_error = mean(err);
  a.median_error = median(err);
  a.mean_time_ms = mean(time);
  a.median_time_ms = median(time);
  a.mean_samples = mean(samples);
  a.median_samples = median(samples);
  a.failure_rate = rows.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(rows.size());
  return a;
}

template <Problem P>
RunRecord execute_run(const MethodSpec& spec, const PointSet& points, SolverConfig cfg, double failure_threshold) {
  RunRecord rec;
  const auto res = run_method<P>(spec, points, std::move(cfg));
  rec.samples = res.samples_drawn;
  rec.time_ms = res.wall_time * 1e3;
  const auto ev =
      evaluate<P>(res.failed ? std::nullopt : std::optional<typename P::Model>(res.model), points, failure_threshold);
  rec.error_rms = ev.error_rms;
  rec.failed = ev.failed;
  return rec;
}

}  // namespace detail

/// Summaries per (method, scene), plus pooled per-method rows when there is
/// more than one scene.
inline std::vector<AggregateRow> summarize(const std::vector<RunRecord>& records,
                                           const std::vector<std::string>& method_order,
                                           const std::vector<std::string>& scene_order) {
  std::vector<AggregateRow> out;
  for (const auto& method : method_order) {
    std::vector<const RunRecord*> pooled;
    for (const auto& scene : scene_order) {
      std::vector<const RunRecord*> rows;
      for (const auto& r : records) {
        if (r.method == method && r.scene == scene) rows.push_back(&r);
      }
      pooled.insert(pooled.end(), rows.begin(), rows.end());
      out.push_back(detail::aggregate(method, scene, rows));
    }
    if (scene_order.size() > 1) out.push_back(detail::aggregate(method, "all", pooled));
  }
  return out;
}

/// Runs methods x scenes x runs. Every method sees the same data and solver
/// seed for a given (scene, run). Per-run exceptions are recorded as failed
/// runs; the sweep always completes.
inline BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  if (config.methods.empty() || config.scenes.empty() || config.runs == 0)
    throw Error(ErrorCode::kInvalidArgument, "benchmark needs methods, scenes and runs");
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_scenes = config.scenes.size();
  const std::size_t n_jobs = n_scenes * config.runs;
  std::vector<RunRecord> grid(n_methods * n_jobs);
  std::vector<char> errored(grid.size(), 0);

  auto job = [&](std::size_t j) {
    const std::size_t s = j / config.runs, run = j % config.runs;
    const BenchmarkScene& scene = config.scenes[s];
    const std::uint64_t seed = run_seed(config.seed, s, run);
    std::optional<PointSet> points;
    try {
      points = scene.make(seed);
    } catch (const std::exception&) {
    }
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const std::size_t slot = (mi * n_scenes + s) * config.runs + run;
      RunRecord rec;
      try {
        if (!points) throw Error(ErrorCode::kInvalidArgument, "scene generation failed");
        SolverConfig cfg = config.solver;
        cfg.seed = seed;
        rec = dispatch(scene.problem, [&](auto problem) {
          return detail::execute_run<decltype(problem)>(config.methods[mi], *points, cfg, config.failure_threshold);
        });
      } catch (const std::exception&) {
        rec = RunRecord{};
        errored[slot] = 1;
      }
      rec.method = config.methods[mi].name();
      rec.scene = scene.name;
      rec.run = run;
      if (config.deterministic) rec.time_ms = 0.0;
      grid[slot] = std::move(rec);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(n_jobs)));
  if (workers == 1) {
    for (std::size_t j = 0; j < n_jobs; ++j) job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < n_jobs; j = next++) job(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  BenchmarkResult out;
  out.records = std::move(grid);
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    out.failed_runs += out.records[i].failed ? 1 : 0;
    out.errored_runs += errored[i];
  }
  std::vector<std::string> method_names, scene_names;
  for (const auto& m : config.methods) method_names.push_back(m.name());
  for (const auto& s : config.scenes) scene_names.push_back(s.name);
  out.aggregates = summarize(out.records, method_names, scene_names);
  return out;
}

inline std::string format_g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// CSV: per-run rows, then one mean row per aggregate (run = "mean";
/// failed = failure rate).
inline void write_csv(std::ostream& out, const BenchmarkResult& result) {
  out << "method,scene,run,error_rms,time_ms,samples,failed\n";
  for (const auto& r : result.records) {
    out << r.method << ',' << r.scene << ',' << r.run << ',' << format_g6(r.error_rms) << ','
        << format_g6(r.time_ms) << ',' << r.samples << ',' << (r.failed ? 1 : 0) << '\n';
  }
  for (const auto& a : result.aggregates) {
    out << a.method << ',' << a.scene << ",mean," << format_g6(a.mean_error) << ',' << format_g6(a.mean_time_ms)
        << ',' << format_g6(a.mean_samples) << ',' << format_g6(a.failure_rate) << '\n';
  }
}

}  // namespace magsac::harness

#endif  // MAGSAC_HARNESS_BENCHMARK_HPP_
