// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "lamarck/analysis.hpp"
#include "lamarck/config.hpp"
#include "lamarck/controller.hpp"
#include "lamarck/evolution.hpp"
#include "lamarck/expcli.hpp"
#include "lamarck/gp.hpp"
#include "lamarck/learner.hpp"
#include "lamarck/run_record.hpp"
#include "lamarck/simulator.hpp"
#include "oracles.hpp"

using namespace lamarck;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Eigen::VectorXd uniform_point(Eigen::Index d, Rng& rng) {
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = uniform01(rng);
  return x;
}

ParamLayout sine_layout(int groups) {
  ParamLayout l;
  for (int g = 0; g < groups; ++g) l.groups.push_back(g);
  return l;
}

int threads() { return env_threads(); }

// 1. GP posterior vs dense inverse: 50 problems, d <= 12, n <= 35, noise in {0, 2}; tol 1e-8, < 10 s.
Verdict gp_oracle() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_mean = 0.0, worst_var = 0.0;
  for (int problem = 0; problem < 50; ++problem) {
    const auto d = static_cast<Eigen::Index>(uniform_int(rng, 1, 12));
    const int n = uniform_int(rng, 1, 35);
    std::vector<Sample> s;
    for (int i = 0; i < n; ++i) {
      const bool inherited = uniform01(rng) < 0.5;
      s.push_back(Sample{uniform_point(d, rng), normal(rng), inherited ? 2.0 : 0.0,
                         inherited ? SampleOrigin::Inherited : SampleOrigin::Evaluated});
    }
    const GpHyper h;
    const auto model = GpModel::fit(s, h);
    for (int q = 0; q < 20; ++q) {
      const Eigen::VectorXd x = q < 5 ? s[static_cast<std::size_t>(q) % s.size()].x : uniform_point(d, rng);
      const auto p = model.predict(x);
      const auto o = oracle::gp_dense(s, h, model.jitter_used(), x);
      worst_mean = std::max(worst_mean, std::abs(p.mean - o.mean));
      worst_var = std::max(worst_var, std::abs(p.variance - o.variance));
    }
  }
  const double t = seconds_since(t0);
  return {worst_mean <= 1e-8 && worst_var <= 1e-8 && t < 10.0,
          "max |dmean| " + fmt("%.2e", worst_mean) + ", max |dvar| " + fmt("%.2e", worst_var) + ", " +
              fmt("%.2f", t) + " s"};
}

// 2. Kernel spot values.
Verdict kernel_values() {
  const double k0 = matern52(0.0, 0.2, 1.0);
  const double k1 = matern52(0.2, 0.2, 1.0);
  const double closed = (1.0 + std::sqrt(5.0) + 5.0 / 3.0) * std::exp(-std::sqrt(5.0));
  return {k0 == 1.0 && std::abs(k1 - 0.52399) <= 1e-4 && std::abs(k1 - closed) <= 1e-15,
          "k(0) = " + fmt("%.17g", k0) + ", k(0.2) = " + fmt("%.8f", k1)};
}

// 3. BO vs best-of-random on -|x - x*|^2, d = 6, 50 seeds: >= 70% at budget 30, >= 90% at budget 100, < 2 min.
Verdict bo_beats_random() {
  const auto t0 = Clock::now();
  const auto layout = sine_layout(2);
  std::map<int, int> wins;
  for (int budget : {30, 100}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng setup = make_stream(seed, StreamTag::Init);
      const Eigen::VectorXd centre = uniform_point(6, setup);
      const Eigen::VectorXd start = uniform_point(6, setup);
      const Objective f = [&centre](const Eigen::VectorXd& x) { return -(x - centre).squaredNorm(); };
      LearnConfig cfg;
      cfg.budget = budget;
      Rng bo_rng = make_stream(seed, StreamTag::Learn);
      const auto bo = learn_controller(layout, start, InheritanceMode::NoInheritance, nullptr, f, bo_rng, cfg);
      Rng rnd = make_stream(seed, StreamTag::Analysis);
      if (bo.best_y > best_of_random(layout, f, budget, rnd)) ++wins[budget];
    }
  }
  const double t = seconds_since(t0);
  return {wins[30] >= 35 && wins[100] >= 45 && t < 120.0,
          "budget 30: " + std::to_string(wins[30]) + "/50, budget 100: " + std::to_string(wins[100]) + "/50, " +
              fmt("%.1f", t) + " s"};
}

// 4. Every robot gets exactly 30 rollouts, split per mode as prescribed.
Verdict budget_accounting() {
  bool ok = true;
  std::string detail;
  for (auto mode : {InheritanceMode::NoInheritance, InheritanceMode::InheritSamples, InheritanceMode::Reevaluate}) {
    EvoConfig cfg;
    cfg.population_size = 6;
    cfg.offspring_per_generation = 3;
    cfg.tournament_size = 3;
    cfg.generations = 3;
    cfg.init_min_size = 4;
    cfg.init_max_size = 10;
    cfg.mode = mode;
    cfg.seed = 5;
    cfg.sim.duration = 1.0;
    cfg.learn.proposal.n_candidates = 200;
    std::mutex mu;
    std::vector<std::shared_ptr<std::atomic<int>>> counters;
    const Terrain terrain = make_terrain(TerrainKind::Flat, cfg.seed);
    const auto real = simulation_objective_factory(terrain, cfg.sim);
    const ObjectiveFactory counted = [&](const Genotype& g, const PhenotypeBody& body) -> Objective {
      auto c = std::make_shared<std::atomic<int>>(0);
      {
        std::lock_guard lock(mu);
        counters.push_back(c);
      }
      Objective inner = real(g, body);
      return [c, inner](const Eigen::VectorXd& x) {
        ++*c;
        return inner(x);
      };
    };
    struct Keep : EvolutionObserver {
      std::vector<Individual> all;
      void on_generation(const std::vector<const Individual*>& born, const GenerationStats&) override {
        for (const auto* i : born) all.push_back(*i);
      }
    } keep;
    const auto result = run_evolution(cfg, counted, &keep);
    int bad_counts = 0, bad_split = 0;
    for (const auto& c : counters) bad_counts += c->load() != 30;
    for (const auto& ind : keep.all) {
      const auto& l = ind.learn;
      bool split = l.evaluations == 30;
      if (ind.birth == 0 || mode == InheritanceMode::NoInheritance) {
        split = split && l.inherited == 0 && l.reevaluated == 0 && l.fresh == 30;
      } else if (mode == InheritanceMode::InheritSamples) {
        const auto parent = std::find_if(keep.all.begin(), keep.all.end(),
                                         [&](const Individual& p) { return p.id == *ind.parent; });
        const int prior = parent->learn.evaluations;
        split = split && l.inherited == prior && l.reevaluated == 0 && l.fresh == 30;
      } else {
        split = split && l.inherited == 0 && l.reevaluated == 5 && l.fresh == 25;
      }
      bad_split += !split;
    }
    const bool mode_ok = bad_counts == 0 && bad_split == 0 && counters.size() == keep.all.size() &&
                         result.evaluations == 30 * static_cast<long long>(keep.all.size());
    ok = ok && mode_ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(to_string(mode)) + " " + std::to_string(keep.all.size()) + " robots " +
              (mode_ok ? "ok" : "MISMATCH");
  }
  return {ok, detail};
}

// 5 and 6 share the desk-scale runs.
struct DeskRun {
  InheritanceMode mode;
  std::uint64_t seed;
  double best_ever;
  double delta_slope;
};

std::vector<DeskRun> desk_runs() {
  std::vector<DeskRun> runs;
  const fs::path dir = fs::temp_directory_path() / ("lamarck_accept_desk_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  for (auto mode : {InheritanceMode::Reevaluate, InheritanceMode::InheritSamples, InheritanceMode::NoInheritance}) {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      ExperimentConfig cfg;
      cfg.evo.population_size = 20;
      cfg.evo.offspring_per_generation = 5;
      cfg.evo.generations = 30;
      cfg.evo.controller = ControllerKind::Sine;
      cfg.evo.terrain = TerrainKind::Flat;
      cfg.evo.mode = mode;
      cfg.evo.seed = seed;
      cfg.evo.threads = threads();
      cfg.output_dir = ".";
      const std::string path = (dir / "run.ndjson").string();
      const Terrain terrain = make_terrain(cfg.evo.terrain, seed);
      const auto factory = simulation_objective_factory(terrain, cfg.evo.sim);
      {
        RecordWriter writer(path, cfg);
        run_evolution(cfg.evo, factory, &writer);
        writer.finish();
      }
      const auto record = read_run_record_file(path);
      DeltaOptions opt;
      opt.threads = threads();
      const auto delta = learning_delta(record, factory, opt);
      runs.push_back({mode, seed, best_fitness(record), delta.slope()});
      std::fprintf(stderr, "  desk %s seed %llu: best %.4f slope %.5f\n", std::string(to_string(mode)).c_str(),
                   static_cast<unsigned long long>(seed), runs.back().best_ever, runs.back().delta_slope);
    }
  }
  fs::remove_all(dir);
  return runs;
}

std::vector<double> pick(const std::vector<DeskRun>& runs, InheritanceMode mode,
                         double DeskRun::*field) {
  std::vector<double> v;
  for (const auto& r : runs) {
    if (r.mode == mode) v.push_back(r.*field);
  }
  return v;
}

// 5. Median best-ever: Reevaluate >= NoInheritance, one-sided MWU p < 0.1.
Verdict inheritance_benefit(const std::vector<DeskRun>& runs, double minutes) {
  const auto re = pick(runs, InheritanceMode::Reevaluate, &DeskRun::best_ever);
  const auto no = pick(runs, InheritanceMode::NoInheritance, &DeskRun::best_ever);
  const double mre = quantile(re, 0.5), mno = quantile(no, 0.5);
  const auto test = mann_whitney_u(re, no, Alternative::Greater);
  return {mre >= mno && test.p < 0.1,
          "median best-ever reevaluate " + fmt("%.3f", mre) + " vs no_inheritance " + fmt("%.3f", mno) +
              ", one-sided p " + fmt("%.4f", test.p) + ", " + fmt("%.1f", minutes) + " min"};
}

// 6. Learning-delta slope: > 0 in >= 7/10 seeds for both Lamarckian modes; for the
// baseline |slope| below the 25th percentile of the Reevaluate slopes in >= 6/10.
Verdict delta_trend(const std::vector<DeskRun>& runs) {
  const auto re = pick(runs, InheritanceMode::Reevaluate, &DeskRun::delta_slope);
  const auto in = pick(runs, InheritanceMode::InheritSamples, &DeskRun::delta_slope);
  const auto no = pick(runs, InheritanceMode::NoInheritance, &DeskRun::delta_slope);
  auto positive = [](const std::vector<double>& v) { return std::count_if(v.begin(), v.end(), [](double s) { return s > 0.0; }); };
  const double threshold = quantile(re, 0.25);
  const auto flat = std::count_if(no.begin(), no.end(), [&](double s) { return std::abs(s) < threshold; });
  return {positive(re) >= 7 && positive(in) >= 7 && flat >= 6,
          "positive slopes reevaluate " + std::to_string(positive(re)) + "/10, inherit_samples " +
              std::to_string(positive(in)) + "/10; no_inheritance |slope| < " + fmt("%.5f", threshold) + " in " +
              std::to_string(flat) + "/10"};
}

// 7. Paper-scale dry run with a constant objective.
Verdict evaluation_count() {
  const auto t0 = Clock::now();
  EvoConfig cfg;
  cfg.seed = 1;
  cfg.threads = threads();
  cfg.learn.proposal.n_candidates = 8;
  cfg.learn.proposal.n_local = 8;
  std::atomic<long long> calls{0};
  const ObjectiveFactory stub = [&calls](const Genotype&, const PhenotypeBody&) -> Objective {
    return [&calls](const Eigen::VectorXd&) {
      ++calls;
      return 1.0;
    };
  };
  const auto result = run_evolution(cfg, stub);
  const long long expect = (200LL + 20LL * 500LL) * 30LL;
  return {result.evaluations == expect && calls.load() == expect && expected_evaluations(cfg) == expect,
          "reported " + std::to_string(result.evaluations) + ", counted " + std::to_string(calls.load()) +
              ", expected 306000, " + fmt("%.1f", seconds_since(t0)) + " s"};
}

// 8. Mann-Whitney U and exact p vs enumeration on 1,000 samples with n + m <= 10.
Verdict mann_whitney_exact() {
  Rng rng(99);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = uniform_int(rng, 1, 9);
    const int m = uniform_int(rng, 1, 10 - n);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) a.push_back(uniform_int(rng, 0, 8));
    for (int i = 0; i < m; ++i) b.push_back(uniform_int(rng, 0, 8));
    const auto o = oracle::mann_whitney(a, b);
    const auto two = mann_whitney_u(a, b, Alternative::TwoSided);
    const auto gt = mann_whitney_u(a, b, Alternative::Greater);
    if (!two.exact || two.u != o.u || std::abs(two.p - o.p_two_sided) > 1e-12 || std::abs(gt.p - o.p_greater) > 1e-12) {
      ++mismatches;
    }
  }
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto ex = mann_whitney_u(a, b);
  return {mismatches == 0 && ex.u == 0.0 && ex.p == 0.1,
          std::to_string(mismatches) + " mismatches in 1000; [1,2,3] vs [4,5,6]: U " + fmt("%g", ex.u) + ", p " +
              fmt("%.17g", ex.p)};
}

// 9. Tree edit distance vs exhaustive mapping search, 200 pairs of <= 6 nodes.
Verdict ted_oracle() {
  Rng rng(31);
  int mismatches = 0, nonzero = 0;
  for (int pair = 0; pair < 200; ++pair) {
    const auto a = random_genotype(rng, 1, 6, ControllerKind::Sine);
    const auto b = pair % 2 == 0 ? mutate_body(a, rng, 6) : random_genotype(rng, 1, 6, ControllerKind::Sine);
    const int d = tree_edit_distance(a, b);
    mismatches += d != oracle::tree_edit_distance(a, b);
    nonzero += d > 0;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 200 pairs (" + std::to_string(nonzero) + " non-zero)"};
}

int run_tool(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + LAMARCK_TOOL + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 10. Two separate executions agree on the checksum; replay reproduces every fitness bit for bit.
Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / ("lamarck_accept_det_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "det.cfg") << "mode = reevaluate\npopulation_size = 8\noffspring_per_generation = 3\n"
                                    "tournament_size = 3\ngenerations = 4\nlearn_budget = 10\nreeval_count = 3\n"
                                    "sim_duration = 5\nterrain = hilly\n";
  std::vector<std::string> sums;
  for (const char* out : {"one", "two"}) {
    const int code = run_tool("run --config \"" + (dir / "det.cfg").string() + "\" --seed 9 --quiet --output \"" +
                                  (dir / out).string() + "\"",
                              dir / "log.txt");
    if (code != 0) return {false, std::string("run exited with ") + std::to_string(code)};
    sums.push_back(read_run_record_file((dir / out / "reevaluate_sine_hilly_seed9.ndjson").string()).checksum);
  }
  const auto record = read_run_record_file((dir / "one" / "reevaluate_sine_hilly_seed9.ndjson").string());
  int replay_failures = 0;
  for (const auto& ind : record.individuals) {
    const int code = run_tool("replay \"" + (dir / "one" / "reevaluate_sine_hilly_seed9.ndjson").string() + "\" --id " +
                                  std::to_string(ind.id),
                              dir / "log.txt");
    replay_failures += code != 0;
  }
  fs::remove_all(dir);
  return {sums[0] == sums[1] && !sums[0].empty() && replay_failures == 0,
          "checksums " + sums[0] + " / " + sums[1] + ", replay mismatches " + std::to_string(replay_failures) + " of " +
              std::to_string(record.individuals.size())};
}

// 11. Controller hand examples to 1e-9; alternating flag is a no-op for CPG rollouts.
Verdict controller_identities() {
  constexpr double pi = std::numbers::pi;
  double err = 0.0;
  err = std::max(err, std::abs(sine_output({1, 0, 0}, pi / 2, false, false) - 1.0));
  err = std::max(err, std::abs(sine_output({0, 2.2, 0.1}, 1.7, false, false) - 0.1));
  err = std::max(err, std::abs(sine_output({1, 0, 0}, pi / 2, true, true) + 1.0));
  err = std::max(err, std::abs(sine_step(0.0, 0.005, kSineFrequency) - 0.02));
  err = std::max(err, std::abs(sine_step(pi, 0.0, kSineFrequency) - pi));
  double phi = 0.0;
  for (int i = 0; i < 6000; ++i) phi = sine_step(phi, 0.005, kSineFrequency);
  err = std::max(err, std::abs(phi - 120.0));

  const NeighborGraph lone{{{}}};
  ControllerState s;
  s.kind = ControllerKind::Cpg;
  s.x = {kCpgInitialState};
  s.y = {kCpgInitialState};
  const std::vector<CpgParams> w{{1.0, 0.0, 0.0}};
  cpg_step(s, w, lone, 0.1);
  // hand Euler step: x = r + 0.1 r, y = r - 0.1 r with r = sqrt(2)/2
  err = std::max(err, std::abs(s.x[0] - 0.7778174593052023));
  err = std::max(err, std::abs(s.y[0] - 0.6363961030678927));
  ControllerState z = s;
  const std::vector<CpgParams> zero{{0.0, 0.0, 0.0}};
  cpg_step(z, zero, lone, 0.1);
  err = std::max(err, std::max(std::abs(z.x[0] - s.x[0]), std::abs(z.y[0] - s.y[0])));

  int differing = 0;
  SimConfig sim;
  const Terrain flat = make_terrain(TerrainKind::Flat, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(500 + seed);
    auto g = random_genotype(rng, 6, 20, ControllerKind::Cpg);
    const auto body = expand_symmetry(g);
    g.alternating_phase = false;
    auto h = g;
    h.alternating_phase = true;
    const auto a = simulate(body, g, flat, sim), b = simulate(body, h, flat, sim);
    bool same = a.frames.size() == b.frames.size();
    for (std::size_t k = 0; same && k < a.frames.size(); ++k) {
      same = a.frames[k].position == b.frames[k].position &&
             a.frames[k].orientation.coeffs() == b.frames[k].orientation.coeffs() &&
             a.frames[k].contacts == b.frames[k].contacts;
    }
    differing += !same;
  }
  return {err <= 1e-9 && differing == 0,
          "max example error " + fmt("%.2e", err) + ", CPG robots differing with flag flipped " +
              std::to_string(differing) + "/20"};
}

std::string genotype_violation(const Genotype& g) {
  if (auto e = check_invariants(g, 20); !e.empty()) return e;
  if (expanded_size(g) > 20 || expanded_size(g) < 1) return "size out of range";
  PhenotypeBody body;
  try {
    body = expand_symmetry(g);
  } catch (const CollisionError& e) {
    return e.what();
  }
  std::set<ParamGroupId> groups;
  for (const auto& j : body.joints) groups.insert(j.group);
  if (groups.size() != g.params.size()) return "parameter groups do not match joints";
  const auto& bounds = param_bounds(g.controller);
  for (const auto& [id, p] : g.params) {
    if (!groups.count(id)) return "orphan parameter group";
    for (std::size_t i = 0; i < 3; ++i) {
      if (p[i] < bounds[i].lo || p[i] > bounds[i].hi) return "parameter out of bounds";
    }
  }
  return {};
}

// 12. 10,000 mutations keep genotypes valid; 100 rollouts keep rods within 1% and
// unactuated robots within 1 cm.
Verdict invariant_fuzz() {
  Rng rng(77);
  int violations = 0;
  Genotype g;
  for (int i = 0; i < 10000; ++i) {
    if (i % 50 == 0) g = random_genotype(rng, 15, 20, i % 100 == 0 ? ControllerKind::Cpg : ControllerKind::Sine);
    g = mutate_controller(mutate_body(g, rng, 20, 3), rng, 0.1);
    violations += !genotype_violation(g).empty();
  }

  double worst_rod = 0.0, worst_idle = 0.0;
  SimConfig sim;
  sim.record_modules = true;
  const Terrain flat = make_terrain(TerrainKind::Flat, 0);
  for (int r = 0; r < 100; ++r) {
    auto robot = random_genotype(rng, 2, 20, r % 2 ? ControllerKind::Cpg : ControllerKind::Sine);
    const auto body = expand_symmetry(robot);
    for (const auto& f : simulate(body, robot, flat, sim).frames) {
      for (const auto& m : body.modules) {
        if (m.parent < 0) continue;
        const double len = (f.modules[static_cast<std::size_t>(m.id)] - f.modules[static_cast<std::size_t>(m.parent)]).norm();
        worst_rod = std::max(worst_rod, std::abs(len - sim.module_size) / sim.module_size);
      }
    }
    for (auto& [id, p] : robot.params) {
      if (robot.controller == ControllerKind::Sine) {
        p[0] = 0.0;
        p[2] = 0.0;
      } else {
        p = {0.0, 0.0, 0.0};
      }
    }
    worst_idle = std::max(worst_idle, fitness(simulate(body, robot, flat, sim)));
  }
  return {violations == 0 && worst_rod < 0.01 && worst_idle < 0.01,
          std::to_string(violations) + " invalid genotypes in 10000 mutations; worst rod error " +
              fmt("%.2e", worst_rod) + ", worst unactuated displacement " + fmt("%.2e", worst_idle) + " m"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  int failures = 0;
  auto report = [&](int n, const char* name, const Verdict& v) {
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  };
  auto guarded = [&](int n, const char* name, const std::function<Verdict()>& fn) {
    if (!wanted(n)) return;
    try {
      report(n, name, fn());
    } catch (const std::exception& e) {
      report(n, name, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "GP oracle equivalence", gp_oracle);
  guarded(2, "kernel spot values", kernel_values);
  guarded(3, "BO beats random search", bo_beats_random);
  guarded(4, "budget accounting", budget_accounting);
  if (wanted(5) || wanted(6)) {
    try {
      const auto t0 = Clock::now();
      const auto runs = desk_runs();
      const double minutes = seconds_since(t0) / 60.0;
      guarded(5, "desk-scale inheritance benefit", [&] { return inheritance_benefit(runs, minutes); });
      guarded(6, "learning-delta trend", [&] { return delta_trend(runs); });
    } catch (const std::exception& e) {
      guarded(5, "desk-scale inheritance benefit", [&]() -> Verdict { return {false, e.what()}; });
      guarded(6, "learning-delta trend", [&]() -> Verdict { return {false, e.what()}; });
    }
  }
  guarded(7, "evaluation-count formula", evaluation_count);
  guarded(8, "Mann-Whitney exactness", mann_whitney_exact);
  guarded(9, "tree edit distance oracle", ted_oracle);
  guarded(10, "end-to-end determinism", determinism);
  guarded(11, "controller identities", controller_identities);
  guarded(12, "invariant fuzz suite", invariant_fuzz);
  return failures;
}
