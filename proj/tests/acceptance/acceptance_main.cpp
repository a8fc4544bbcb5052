// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "magsac/magsac.hpp"
#include "oracles.hpp"

using namespace magsac;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

PointSet two_view_points(std::uint64_t seed, std::size_t n, double noise) {
  std::mt19937_64 rng(seed);
  const auto view = oracle::random_two_view(rng);
  auto c = oracle::project_pairs(view, n, rng);
  std::normal_distribution<double> g(0.0, noise > 0 ? noise : 1.0);
  if (noise > 0)
    for (double& x : c) x += g(rng);
  PointSet p(4, std::move(c));
  p.set_image_diags(800.0, 800.0);
  return p;
}

const harness::AggregateRow& find_row(const harness::BenchmarkResult& r, const std::string& method,
                                      const std::string& scene) {
  for (const auto& a : r.aggregates)
    if (a.method == method && a.scene == scene) return a;
  throw Error(ErrorCode::kInvalidArgument, "missing aggregate " + method + "/" + scene);
}

// ---------------------------------------------------------------------------

Outcome iteration_formula() {
  const auto a = standard_iteration_bound(20, 100, 4, 0.999);
  const auto b = standard_iteration_bound(10, 100, 4, 0.999);
  return {a == 4314 && b == 69074, fmt("ratio 0.2 -> %zu, ratio 0.1 -> %zu", a, b)};
}

Outcome threshold() {
  const double t = scoring::tau(1.0, 4, 0.99);
  return {std::abs(t - 3.644) <= 0.005, fmt("tau(1, rho=4, 0.99) = %.5f", t)};
}

Outcome quality_oracles() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> noise(0.3, 3.0), ratio(0.0, 0.5);
  double worst_magsac = 0, worst_ransac = 0, worst_uniform = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto scene = synthetic::generate_line_scene(noise(rng), ratio(rng), 20, 100, 100, rng());
    const PointSet& pts = scene.points;
    // Candidate: the line through two random points, as drawn by a sampler.
    std::vector<std::size_t> s(2);
    Rng srng(rng());
    draw_minimal_sample(srng, pts.size(), 2, s);
    if (!LineProblem::sample_ok(pts, s)) {
      --trial;
      continue;
    }
    const Line2D cand = LineProblem::minimal(pts, s)[0];
    const auto res = residuals<LineProblem>(cand, pts);
    NoiseConfig cfg;
    cfg.rho = 1;
    cfg.sigma_max = 10.0;
    cfg.outlier_bound = *pts.image1_diag();
    const double q = scoring::magsac_quality(scoring::build_residual_profile(res, cfg), cfg);
    const double q_ref = oracle::marginal(
        [&](double sg) { return oracle::loglik_at_sigma(res, sg, 1, cfg.quantile, cfg.outlier_bound); },
        cfg.sigma_max, 10000);
    const double r = scoring::marginal_ransac_quality(res, cfg.sigma_max);
    const double r_ref = oracle::marginal(
        [&](double sg) {
          return static_cast<double>(std::count_if(res.begin(), res.end(), [&](double d) { return d < sg; }));
        },
        cfg.sigma_max, 10000);
    const double u = scoring::uniform_loglik_quality(res, cfg.sigma_max, cfg.outlier_bound);
    const double u_ref = oracle::marginal(
        [&](double sg) { return oracle::uniform_loglik_at_sigma(res, sg, cfg.outlier_bound); }, cfg.sigma_max, 10000);
    worst_magsac = std::max(worst_magsac, rel(q, q_ref));
    worst_ransac = std::max(worst_ransac, rel(r, r_ref));
    worst_uniform = std::max(worst_uniform, rel(u, u_ref));
  }
  return {worst_magsac < 1e-2 && worst_ransac < 1e-3 && worst_uniform < 1e-3,
          fmt("max rel. error: marginalized %.2e, marginal-count %.2e, uniform %.2e", worst_magsac, worst_ransac,
              worst_uniform)};
}

Outcome homography_ordering() {
  harness::BenchmarkConfig cfg;
  for (const char* m : {"ransac", "ransac+sigma", "msac", "msac+sigma", "lo-ransac", "lo-ransac+sigma", "lo-msac",
                        "lo-msac+sigma", "magsac"})
    cfg.methods.push_back(harness::parse_method(m));
  const double noises[] = {0.5, 1.0, 2.0};
  for (double s : noises) cfg.scenes.push_back(harness::homography_scene_source(s, 0.5, 200));
  cfg.runs = 200;
  cfg.seed = 2018;
  cfg.solver.confidence = 0.95;
  cfg.solver.max_iterations = 2000;
  cfg.solver.noise.outlier_bound = 0.0;
  cfg.workers = worker_count();
  const auto res = harness::run_benchmark(cfg);

  bool ok = res.errored_runs == 0;
  std::string detail;
  for (const auto& scene : cfg.scenes) {
    const double mg = find_row(res, "magsac", scene.name).mean_error;
    const double ms = find_row(res, "msac", scene.name).mean_error;
    const double rs = find_row(res, "ransac", scene.name).mean_error;
    const bool order = mg < ms && mg < rs;
    bool sigma_ok = true;
    std::string worst_post;
    double worst_ratio = 0.0;
    for (const char* base : {"ransac", "msac", "lo-ransac", "lo-msac"}) {
      const double b = find_row(res, base, scene.name).mean_error;
      const double p = find_row(res, std::string(base) + "+sigma", scene.name).mean_error;
      if (!(p <= b * 1.01)) sigma_ok = false;
      if (p / b > worst_ratio) {
        worst_ratio = p / b;
        worst_post = base;
      }
    }
    ok = ok && order && sigma_ok;
    detail += fmt("%s: magsac %.4g msac %.4g ransac %.4g, worst +sigma/base %.3f (%s)%s; ", scene.name.c_str(), mg, ms,
                  rs, worst_ratio, worst_post.c_str(), order && sigma_ok ? "" : " <-");
  }
  return {ok, detail};
}

Outcome high_outlier() {
  harness::BenchmarkConfig cfg;
  cfg.methods = {harness::parse_method("msac"), harness::parse_method("magsac")};
  cfg.scenes = {harness::homography_scene_source(1.0, 0.8, 200)};
  cfg.runs = 100;
  cfg.seed = 4314;
  cfg.solver.min_iterations = 4314;
  cfg.solver.max_iterations = 4314;
  cfg.solver.noise.outlier_bound = 0.0;
  cfg.workers = worker_count();
  const auto res = harness::run_benchmark(cfg);
  const auto& mg = find_row(res, "magsac", cfg.scenes[0].name);
  const auto& ms = find_row(res, "msac", cfg.scenes[0].name);
  const bool ok = res.errored_runs == 0 && mg.failure_rate <= ms.failure_rate && mg.mean_error < ms.mean_error;
  return {ok, fmt("failure rate magsac %.2f msac %.2f; mean error magsac %.4g msac %.4g", mg.failure_rate,
                  ms.failure_rate, mg.mean_error, ms.mean_error)};
}

template <Problem P>
double worst_residual_over_methods(const PointSet& pts, std::uint64_t seed) {
  double worst = 0.0;
  for (const char* m : {"ransac", "msac", "lo-msac", "magsac"}) {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.max_iterations = 1000;
    cfg.noise.outlier_bound = 0.0;
    const auto r = harness::run_method<P>(harness::parse_method(m), pts, cfg);
    if (r.failed) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, P::residual(r.model, pts.point(i)));
  }
  return worst;
}

Outcome exact_recovery() {
  double line = 0, hom = 0, fun = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    line = std::max(line, worst_residual_over_methods<LineProblem>(
                              synthetic::generate_line_scene(0.0, 0.0, 100, 600, 600, seed).points, seed));
    hom = std::max(hom, worst_residual_over_methods<HomographyProblem>(
                            synthetic::generate_homography_scene(0.0, 0.0, 100, seed).points, seed));
    fun = std::max(fun, worst_residual_over_methods<FundamentalProblem>(two_view_points(seed, 100, 0.0), seed));
  }
  return {line < 1e-6 && hom < 1e-6 && fun < 1e-6,
          fmt("max residual: line %.2e, homography %.2e, fundamental %.2e px", line, hom, fun)};
}

PointSet replicate(const PointSet& p, const std::vector<double>& w) {
  std::vector<double> c;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int r = 0; r < static_cast<int>(w[i]); ++r)
      for (std::size_t d = 0; d < p.dim(); ++d) c.push_back(p(i, d));
  return PointSet(p.dim(), c);
}

Outcome solver_fidelity() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> wi(1, 4);
  double f7 = 0, h4 = 0, eq = 0, repl = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // Seven-point solutions on their own sample.
    const PointSet p7 = two_view_points(rng(), 7, 0.0);
    for (const auto& m : geometry::fundamental_minimal(p7, iota(7)))
      for (std::size_t i = 0; i < 7; ++i) {
        const Eigen::Vector3d x1(p7(i, 0), p7(i, 1), 1), x2(p7(i, 2), p7(i, 3), 1);
        f7 = std::max(f7, std::abs(x2.dot(m.F * x1)));
      }
    // Four-point homography on exact scene points.
    const auto hs = synthetic::generate_homography_scene(0.0, 0.0, 20, rng());
    const Homography h = geometry::homography_minimal(hs.points, iota(4));
    for (std::size_t i = 0; i < 4; ++i) h4 = std::max(h4, HomographyProblem::residual(h, hs.points.point(i)));

    // Weighted solvers: equal weights and integer replication.
    const auto noisy_h = synthetic::generate_homography_scene(1.0, 0.0, 25, rng()).points;
    const auto noisy_l = synthetic::generate_line_scene(1.0, 0.0, 25, 600, 600, rng()).points;
    const PointSet noisy_f = two_view_points(rng(), 25, 1.0);
    std::vector<double> same(25, 2.5), w(25);
    for (double& x : w) x = wi(rng);
    auto check = [&](auto problem, const PointSet& pts) {
      using Prob = decltype(problem);
      const auto plain = Prob::weighted(pts, iota(25), {});
      const auto equal = Prob::weighted(pts, iota(25), same);
      const auto weighted = Prob::weighted(pts, iota(25), w);
      const PointSet rep = replicate(pts, w);
      const auto replicated = Prob::weighted(rep, iota(rep.size()), {});
      if constexpr (std::is_same_v<Prob, LineProblem>) {
        const Eigen::Vector3d a(plain.a, plain.b, plain.c), b(equal.a, equal.b, equal.c);
        const Eigen::Vector3d c(weighted.a, weighted.b, weighted.c), d(replicated.a, replicated.b, replicated.c);
        eq = std::max(eq, (a - b).norm());
        repl = std::max(repl, (c - d).norm());
      } else if constexpr (std::is_same_v<Prob, HomographyProblem>) {
        eq = std::max(eq, (plain.H - equal.H).norm());
        repl = std::max(repl, (weighted.H - replicated.H).norm());
      } else {
        eq = std::max(eq, (plain.F - equal.F).norm());
        repl = std::max(repl, (weighted.F - replicated.F).norm());
      }
    };
    check(LineProblem{}, noisy_l);
    check(HomographyProblem{}, noisy_h);
    check(FundamentalProblem{}, noisy_f);
  }
  return {f7 < 1e-9 && h4 < 1e-8 && eq < 1e-9 && repl < 1e-6,
          fmt("7-point %.2e, 4-point %.2e px, equal weights %.2e, replication %.2e", f7, h4, eq, repl)};
}

Outcome determinism_and_pairing() {
  bool identical = true, paired = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto scene = synthetic::generate_homography_scene(1.0, 0.5, 200, 500 + seed);
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.max_iterations = 2000;
    cfg.noise.outlier_bound = 0.0;
    cfg.record_trace = true;
    for (const char* m : {"ransac", "msac", "lo-ransac", "lo-msac", "magsac"}) {
      const auto spec = harness::parse_method(m);
      const auto a = harness::run_method<HomographyProblem>(spec, scene.points, cfg);
      const auto b = harness::run_method<HomographyProblem>(spec, scene.points, cfg);
      identical = identical && a.model.H == b.model.H && a.quality == b.quality && a.iterations == b.iterations &&
                  a.samples_drawn == b.samples_drawn && a.trace.size() == b.trace.size();
      if (spec.base == harness::BaseMethod::kMagsac) continue;
      const auto post = harness::run_method<HomographyProblem>(harness::parse_method(std::string(m) + "+sigma"),
                                                               scene.points, cfg);
      paired = paired && post.samples_drawn == a.samples_drawn && post.iterations == a.iterations;
    }
  }
  return {identical && paired, fmt("repeat runs identical: %s; base/+sigma sample counts equal: %s",
                                   identical ? "yes" : "no", paired ? "yes" : "no")};
}

Outcome weight_consistency() {
  double worst_d = 0.0, worst_t = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto scene = synthetic::generate_homography_scene(1.0, 0.3, 200, 900 + seed);
    NoiseConfig c100 = default_noise_config<HomographyProblem>(scene.points, 10.0, 100);
    NoiseConfig c200 = c100;
    c200.partitions = 200;
    const auto a = sigma_consensus<HomographyProblem>(scene.points, scene.gt_model, c100);
    const auto b = sigma_consensus<HomographyProblem>(scene.points, scene.gt_model, c200);
    const auto t = sigma_consensus<HomographyProblem>(scene.points, scene.gt_model, c100, {4});
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
      num += (a.weights[i] - b.weights[i]) * (a.weights[i] - b.weights[i]);
      den += b.weights[i] * b.weights[i];
      worst_t = std::max(worst_t, rel(t.weights[i], a.weights[i]));
    }
    worst_d = std::max(worst_d, std::sqrt(num / den));
  }
  return {worst_d < 0.02 && worst_t <= 1e-9,
          fmt("d=100 vs d=200 relative change %.3e; threaded vs serial %.1e", worst_d, worst_t)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "iteration formula", iteration_formula},
      {2, "chi threshold", threshold},
      {3, "quality vs integration", quality_oracles},
      {4, "homography ordering", homography_ordering},
      {5, "high-outlier robustness", high_outlier},
      {6, "exact recovery", exact_recovery},
      {7, "solver fidelity", solver_fidelity},
      {8, "determinism and pairing", determinism_and_pairing},
      {9, "weight consistency", weight_consistency},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
