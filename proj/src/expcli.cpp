#include "lamarck/expcli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lamarck/analysis.hpp"
#include "lamarck/svg_plot.hpp"

namespace lamarck {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class ProgressWriter : public EvolutionObserver {
 public:
  ProgressWriter(RecordWriter& writer, std::ostream& out, bool quiet, std::uint64_t seed)
      : writer_(writer), out_(out), quiet_(quiet), seed_(seed) {}

  void on_generation(const std::vector<const Individual*>& born, const GenerationStats& s) override {
    writer_.on_generation(born, s);
    if (!quiet_) {
      out_ << "seed " << seed_ << " gen " << s.generation << " best " << g6(s.best) << " median " << g6(s.median)
           << " best_ever " << g6(s.best_ever) << " evals " << s.evaluations << '\n';
      out_.flush();
    }
  }

 private:
  RecordWriter& writer_;
  std::ostream& out_;
  bool quiet_;
  std::uint64_t seed_;
};

std::string group_key(const ExperimentConfig& c) {
  return std::string(to_string(c.evo.controller)) + "," + std::string(to_string(c.evo.terrain)) + "," +
         std::string(to_string(c.evo.mode));
}

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "ns";
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

int env_threads() {
  const char* v = std::getenv("LAMARCK_THREADS");
  if (v == nullptr) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

std::string record_path(const ExperimentConfig& cfg) {
  const std::string name = std::string(to_string(cfg.evo.mode)) + "_" + std::string(to_string(cfg.evo.controller)) +
                           "_" + std::string(to_string(cfg.evo.terrain)) + "_seed" + std::to_string(cfg.evo.seed) +
                           ".ndjson";
  return (fs::path(cfg.output_dir) / name).string();
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(options.config_path.empty() ? std::string() : read_file(options.config_path));
    for (const auto& o : options.overrides) apply_override(cfg, o);
    if (options.runs) cfg.runs = *options.runs;
    if (options.seed) cfg.evo.seed = *options.seed;
    if (options.output_dir) cfg.output_dir = *options.output_dir;
    if (const auto e = validate(cfg); !e.empty()) throw ConfigError(0, "", e);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    fs::create_directories(cfg.output_dir);
    const std::uint64_t base = cfg.evo.seed;
    for (int run = 0; run < cfg.runs; ++run) {
      ExperimentConfig rc = cfg;
      rc.runs = 1;
      rc.evo.seed = base + static_cast<std::uint64_t>(run);
      rc.evo.threads = std::max(1, options.threads);
      const std::string path = record_path(rc);
      rc.output_dir = ".";  // where a record lives is not part of its identity

      std::optional<RunRecord> previous;
      if (options.resume && fs::exists(path)) {
        previous = read_run_record_file(path);
        if (previous->complete) {
          out << "seed " << rc.evo.seed << " already complete: " << path << '\n';
          continue;
        }
        if (previous->config_checksum != config_checksum(rc)) {
          err << path << ": existing record was written with a different configuration\n";
          return kExitUsage;
        }
      }
      const ResumeState state = previous ? resume_state(*previous) : ResumeState{};
      RecordWriter writer(path, rc, previous ? &*previous : nullptr);
      ProgressWriter progress(writer, out, options.quiet, rc.evo.seed);
      const Terrain terrain = make_terrain(rc.evo.terrain, rc.evo.seed);
      const auto result = run_evolution(rc.evo, simulation_objective_factory(terrain, rc.evo.sim), &progress,
                                        previous ? &state : nullptr);
      if (result.evaluations != expected_evaluations(rc.evo)) {
        err << "evaluation count " << result.evaluations << " differs from expected " << expected_evaluations(rc.evo)
            << '\n';
        return kExitFailure;
      }
      writer.finish();
      out << "seed " << rc.evo.seed << " done: " << path << " checksum " << writer.checksum() << " evaluations "
          << result.evaluations << " best " << g17(result.best_ever) << '\n';
    }
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  if (options.records.empty()) {
    err << "no record files given\n";
    return kExitUsage;
  }
  const std::set<std::string> known = {"fig5", "fig6", "fig7", "fig8", "fig9"};
  std::set<std::string> figs(options.figures.begin(), options.figures.end());
  if (figs.empty() || figs.count("all")) figs = known;
  for (const auto& f : figs) {
    if (!known.count(f)) {
      err << "unknown figure selector '" << f << "'\n";
      return kExitUsage;
    }
  }

  std::vector<RunRecord> records;
  try {
    for (const auto& path : options.records) {
      records.push_back(read_run_record_file(path));
      if (!records.back().complete) {
        err << path << ": record is incomplete\n";
        return kExitFailure;
      }
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }

  std::set<std::string> sums;
  for (const auto& r : records) sums.insert(r.config_checksum);
  std::string provenance = "version=" + std::string(kVersion) + " config_checksum=";
  for (auto it = sums.begin(); it != sums.end(); ++it) provenance += (it == sums.begin() ? "" : ";") + *it;
  const std::string header = "# " + provenance + "\n";

  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[group_key(r.config)].push_back(&r);
  const ExperimentConfig& first = records.front().config;

  try {
    const fs::path dir(options.output_dir);
    fs::create_directories(dir);
    auto emit = [&](const std::string& name, const std::string& body) {
      auto f = open_output(dir / name);
      f << body;
      out << "wrote " << (dir / name).string() << '\n';
    };

    if (figs.count("fig5")) {
      std::ostringstream csv, pv;
      csv << header << "controller,terrain,mode,seed,best_fitness\n";
      std::vector<std::string> names;
      std::vector<std::vector<double>> values;
      std::map<std::string, std::map<std::string, std::vector<double>>> by_env;
      for (const auto& [key, rs] : groups) {
        names.push_back(key);
        values.emplace_back();
        for (const auto* r : rs) {
          const double b = best_fitness(*r);
          csv << key << ',' << r->config.evo.seed << ',' << g17(b) << '\n';
          values.back().push_back(b);
          by_env[std::string(to_string(r->config.evo.controller)) + "," + std::string(to_string(r->config.evo.terrain))]
                [std::string(to_string(r->config.evo.mode))]
                    .push_back(b);
        }
      }
      pv << header << "controller,terrain,mode_a,mode_b,n_a,n_b,u,p_two_sided,stars\n";
      for (const auto& [env, modes] : by_env) {
        for (auto a = modes.begin(); a != modes.end(); ++a) {
          for (auto b = std::next(a); b != modes.end(); ++b) {
            const auto mw = mann_whitney_u(a->second, b->second);
            pv << env << ',' << a->first << ',' << b->first << ',' << a->second.size() << ',' << b->second.size() << ','
               << g6(mw.u) << ',' << g6(mw.p) << ',' << stars(mw.p) << '\n';
          }
        }
      }
      emit("fig5_performance.csv", csv.str());
      emit("fig5_pvalues.csv", pv.str());
      emit("fig5_performance.svg",
           svg_boxes(names, values, {"Best fitness per run", "controller,terrain,mode", "displacement (m)", provenance}));
    }

    if (figs.count("fig6")) {
      DeltaOptions d;
      d.subsample = options.delta_subsample.value_or(first.delta_subsample);
      d.random_samples = first.delta_random_samples;
      d.seed = first.analysis_seed;
      d.threads = options.threads;
      std::ostringstream csv, slopes;
      csv << header << "controller,terrain,mode,seed,generation,count,mean,q25,q75\n";
      slopes << header << "controller,terrain,mode,seed,slope\n";
      std::vector<Series> plot;
      for (const auto& [key, rs] : groups) {
        std::map<int, std::vector<double>> pooled;
        for (const auto* r : rs) {
          const Terrain terrain = make_terrain(r->config.evo.terrain, r->config.evo.seed);
          const auto series = learning_delta(*r, simulation_objective_factory(terrain, r->config.evo.sim), d);
          for (const auto& row : series.rows) {
            csv << key << ',' << r->config.evo.seed << ',' << row.generation << ',' << row.count << ','
                << g17(row.mean) << ',' << g17(row.q25) << ',' << g17(row.q75) << '\n';
            pooled[row.generation].push_back(row.mean);
          }
          slopes << key << ',' << r->config.evo.seed << ',' << g17(series.slope()) << '\n';
        }
        Series s{key, {}, {}, {}, {}};
        for (const auto& [gen, v] : pooled) {
          s.x.push_back(gen);
          s.y.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
        }
        plot.push_back(std::move(s));
      }
      emit("fig6_delta.csv", csv.str());
      emit("fig6_slopes.csv", slopes.str());
      emit("fig6_delta.svg", svg_lines(plot, {"Learning delta", "generation", "learned - best random (m)", provenance}));
    }

    if (figs.count("fig7")) {
      LongBudgetOptions l;
      l.budget = options.long_budget.value_or(first.long_budget);
      l.n_robots = options.long_robots.value_or(first.long_robots);
      l.seed = first.analysis_seed;
      l.threads = options.threads;
      std::ostringstream csv;
      csv << header << "# value: incumbent ratio max(bo, " << kRatioFloor << ") / max(random, " << kRatioFloor
          << ")\ncontroller,terrain,mode,iteration,mean,q25,q75\n";
      std::vector<Series> plot;
      for (const auto& [key, rs] : groups) {
        std::vector<std::vector<double>> ratios;
        for (const auto* r : rs) {
          l.learn = r->config.evo.learn;
          const Terrain terrain = make_terrain(r->config.evo.terrain, r->config.evo.seed);
          auto curve = long_budget_curve(*r, simulation_objective_factory(terrain, r->config.evo.sim), l);
          for (auto& v : curve.ratios) ratios.push_back(std::move(v));
        }
        Series s{key, {}, {}, {}, {}};
        for (const auto& row : summarize_curve(ratios)) {
          csv << key << ',' << row.iteration << ',' << g17(row.mean) << ',' << g17(row.q25) << ',' << g17(row.q75)
              << '\n';
          s.x.push_back(row.iteration);
          s.y.push_back(row.mean);
          s.lo.push_back(row.q25);
          s.hi.push_back(row.q75);
        }
        plot.push_back(std::move(s));
      }
      emit("fig7_long_budget.csv", csv.str());
      emit("fig7_long_budget.svg",
           svg_lines(plot, {"Learned vs random over a long budget", "evaluations", "incumbent ratio", provenance}));
    }

    if (figs.count("fig8")) {
      for (const bool improving : {false, true}) {
        std::ostringstream csv;
        csv << header << "controller,terrain,mode,distance,count\n";
        std::vector<Series> plot;
        int max_d = 0;
        for (const auto& [key, rs] : groups) {
          std::map<int, int> hist;
          for (const auto* r : rs) {
            for (const auto& [dist, n] : ted_histogram(*r, improving)) hist[dist] += n;
          }
          for (const auto& [dist, n] : hist) {
            csv << key << ',' << dist << ',' << n << '\n';
            max_d = std::max(max_d, dist);
          }
          Series s{key, {}, {}, {}, {}};
          for (int dist = 0; dist <= max_d; ++dist) s.y.push_back(hist.count(dist) ? hist[dist] : 0);
          plot.push_back(std::move(s));
        }
        std::vector<std::string> cats;
        for (int dist = 0; dist <= max_d; ++dist) cats.push_back(std::to_string(dist));
        const std::string stem = improving ? "fig8_ted_improving" : "fig8_ted_all";
        emit(stem + ".csv", csv.str());
        emit(stem + ".svg", svg_bars(cats, plot,
                                     {improving ? "Tree edit distance to parent (improving offspring)"
                                                : "Tree edit distance to parent",
                                      "distance", "robots", provenance}));
      }
    }

    if (figs.count("fig9")) {
      std::ostringstream csv;
      csv << header << "controller,terrain,rolling,walking,worm,swimming\n";
      const GaitTable table = gait_distribution(records);
      for (const auto& [key, row] : table) {
        csv << to_string(key.first) << ',' << to_string(key.second);
        for (double v : row) csv << ',' << g6(v);
        csv << '\n';
      }
      emit("fig9_gaits.csv", csv.str());
    }
  } catch (const std::exception& e) {
    err << "report failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
  RunRecord rec;
  try {
    rec = read_run_record_file(options.record);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
  const Individual* ind = rec.find(options.id);
  if (ind == nullptr) {
    err << "no individual with id " << options.id << " in " << options.record << '\n';
    return kExitUsage;
  }
  const Trajectory t = replay(*ind, rec.config);
  const double f = fitness(t);
  if (!options.output.empty()) {
    std::ofstream file(options.output);
    if (!file) {
      err << "cannot write " << options.output << '\n';
      return kExitFailure;
    }
    file << "# version=" << kVersion << " config_checksum=" << rec.config_checksum << " individual=" << ind->id << '\n';
    write_trajectory(file, t);
  }
  const bool equal = options.tolerant ? std::abs(f - ind->fitness) <= 1e-9 : f == ind->fitness;
  out << "individual " << ind->id << " replayed " << g17(f) << " recorded " << g17(ind->fitness) << " match "
      << (options.tolerant ? "tolerance 1e-9" : "bit-exact") << ' ' << (equal ? "yes" : "NO") << '\n';
  return equal ? kExitOk : kExitFailure;
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig cfg = parse_config(read_file(config_path));
    out << "ok " << config_checksum(cfg) << " evaluations per run " << expected_evaluations(cfg.evo) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << config_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Body-brain evolution with sample-inheriting Bayesian optimisation", "lamarck"};
  app.require_subcommand(1);
  const int threads = env_threads();

  RunOptions run;
  std::uint64_t seed = 0;
  int runs = 0;
  std::string outdir;
  auto* run_cmd = app.add_subcommand("run", "Run evolutionary experiments");
  run_cmd->add_option("--config", run.config_path, "Configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--set", run.overrides, "Override a configuration key (key=value)");
  auto* runs_opt = run_cmd->add_option("--runs", runs, "Number of runs");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed; run i uses seed + i");
  auto* out_opt = run_cmd->add_option("--output", outdir, "Output directory");
  run_cmd->add_flag("--resume", run.resume, "Continue interrupted records");
  run_cmd->add_flag("--quiet", run.quiet, "No per-generation progress");

  ReportOptions report;
  double subsample = 1.0;
  int long_budget = 0, long_robots = 0;
  auto* report_cmd = app.add_subcommand("report", "Tables and plots from run records");
  report_cmd->add_option("records", report.records, "Record files");
  report_cmd->add_option("--figure", report.figures, "fig5 fig6 fig7 fig8 fig9 or all");
  report_cmd->add_option("--output", report.output_dir, "Output directory");
  auto* sub_opt = report_cmd->add_option("--delta-subsample", subsample, "Fraction of offspring in the delta");
  auto* lb_opt = report_cmd->add_option("--long-budget", long_budget, "Evaluations for the long-budget curve");
  auto* lr_opt = report_cmd->add_option("--long-robots", long_robots, "Robots per record for the long-budget curve");

  ReplayOptions replay_opts;
  auto* replay_cmd = app.add_subcommand("replay", "Re-simulate a recorded individual");
  replay_cmd->add_option("record", replay_opts.record, "Record file")->required();
  replay_cmd->add_option("--id", replay_opts.id, "Individual id")->required();
  replay_cmd->add_option("--out", replay_opts.output, "Trajectory output file");
  replay_cmd->add_flag("--tolerant", replay_opts.tolerant, "Accept a 1e-9 fitness difference");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-config", "Check a configuration file");
  validate_cmd->add_option("config", validate_path, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) {
    if (*runs_opt) run.runs = runs;
    if (*seed_opt) run.seed = seed;
    if (*out_opt) run.output_dir = outdir;
    run.threads = threads;
    return cmd_run(run, out, err);
  }
  if (*report_cmd) {
    if (*sub_opt) report.delta_subsample = subsample;
    if (*lb_opt) report.long_budget = long_budget;
    if (*lr_opt) report.long_robots = long_robots;
    report.threads = threads;
    return cmd_report(report, out, err);
  }
  if (*replay_cmd) return cmd_replay(replay_opts, out, err);
  return cmd_validate(validate_path, out, err);
}

}  // namespace lamarck
