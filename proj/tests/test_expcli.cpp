#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "lamarck/config.hpp"
#include "lamarck/expcli.hpp"
#include "lamarck/run_record.hpp"

using namespace lamarck;
namespace fs = std::filesystem;

namespace {

const char* const kTinyConfig = R"(# tiny smoke configuration
population_size = 5
offspring_per_generation = 2
tournament_size = 2
generations = 2
init_min_size = 3
init_max_size = 6
max_size = 8
learn_budget = 4
reeval_count = 2
n_candidates = 50
sim_duration = 1.5
)";

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("lamarck_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
};

struct Cli {
  int code;
  std::string out;
  std::string err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lamarck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config text round trip") {
  ExperimentConfig cfg;
  cfg.evo.mode = InheritanceMode::Reevaluate;
  cfg.evo.controller = ControllerKind::Cpg;
  cfg.evo.terrain = TerrainKind::Rugged;
  cfg.evo.learn.hyper.lengthscale = 0.1 + 0.2;
  cfg.evo.sim.friction = 1.0 / 3.0;
  cfg.evo.seed = 18446744073709551615ull;
  const auto text = serialize_config(cfg);
  const auto back = parse_config(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.evo.learn.hyper.lengthscale == cfg.evo.learn.hyper.lengthscale);
  CHECK(back.evo.sim.friction == cfg.evo.sim.friction);
  CHECK(back.evo.seed == cfg.evo.seed);
  CHECK(config_checksum(back) == config_checksum(cfg));
  cfg.evo.seed = 1;
  CHECK(config_checksum(back) != config_checksum(cfg));
}

TEST_CASE("config errors carry line and field") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::make_pair(e.line(), e.field());
    }
    return std::make_pair(-1, std::string());
  };
  CHECK(line_of("# c\n\nmode = sideways\n") == std::make_pair(3, std::string("mode")));
  CHECK(line_of("population_size = 10\nbogus = 1\n") == std::make_pair(2, std::string("bogus")));
  CHECK(line_of("generations = 3\ngenerations = 4\n") == std::make_pair(2, std::string("generations")));
  CHECK(line_of("seed = -4\n").first == 1);
  CHECK(line_of("learn_budget\n").first == 1);
  CHECK(line_of("population_size = 4\noffspring_per_generation = 2\n\ntournament_size = 9\n") == std::make_pair(4, std::string("tournament_size")));
  CHECK(line_of("learn_budget = 30\n").first == -1);

  ExperimentConfig cfg;
  apply_override(cfg, "terrain=hilly");
  CHECK(cfg.evo.terrain == TerrainKind::Hilly);
  CHECK_THROWS_AS(apply_override(cfg, "terrain"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "ucb_beta=abc"), ConfigError);
}

TEST_CASE("validate-config verb") {
  Scratch s;
  CHECK(cli({"validate-config", s.write("ok.cfg", kTinyConfig)}).code == kExitOk);
  const auto bad = cli({"validate-config", s.write("bad.cfg", std::string(kTinyConfig) + "mode = lamarck\n")});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("mode") != std::string::npos);
  CHECK(cli({"validate-config", (s.dir / "missing.cfg").string()}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("run, rerun, resume, replay and report") {
  Scratch s;
  const auto cfg = s.write("tiny.cfg", kTinyConfig);
  const auto out_a = (s.dir / "a").string(), out_b = (s.dir / "b").string();

  const auto bad = cli({"run", "--config", cfg, "--set", "mode=sideways", "--output", out_a});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("mode") != std::string::npos);

  REQUIRE(cli({"run", "--config", cfg, "--runs", "3", "--seed", "42", "--output", out_a, "--quiet"}).code == kExitOk);
  for (int seed : {42, 43, 44}) {
    const auto p = fs::path(out_a) / ("no_inheritance_sine_flat_seed" + std::to_string(seed) + ".ndjson");
    REQUIRE(fs::exists(p));
    const auto r = read_run_record_file(p.string());
    CHECK(r.complete);
    CHECK(r.config.evo.seed == static_cast<std::uint64_t>(seed));
    CHECK(r.individuals.size() == 5 + 2 * 2);
  }
  REQUIRE(cli({"run", "--config", cfg, "--runs", "1", "--seed", "42", "--output", out_b, "--quiet"}).code == kExitOk);
  const auto a = read_run_record_file((fs::path(out_a) / "no_inheritance_sine_flat_seed42.ndjson").string());
  const auto b = read_run_record_file((fs::path(out_b) / "no_inheritance_sine_flat_seed42.ndjson").string());
  CHECK(a.checksum == b.checksum);
  CHECK(!a.checksum.empty());

  SUBCASE("interrupted run resumes to the same record") {
    const auto mode_args = std::vector<std::string>{"run", "--config", cfg, "--set", "mode=reevaluate", "--seed", "7",
                                                    "--output", out_b, "--quiet"};
    REQUIRE(cli(mode_args).code == kExitOk);
    const auto path = fs::path(out_b) / "reevaluate_sine_flat_seed7.ndjson";
    const auto full = read_run_record_file(path.string());
    const auto text = slurp(path);
    std::size_t cut = 0;
    int generations = 0;
    for (std::size_t pos = text.find("\"type\":\"generation\""); pos != std::string::npos;
         pos = text.find("\"type\":\"generation\"", pos + 1)) {
      if (++generations == 2) cut = text.find('\n', pos) + 1;
    }
    REQUIRE(cut > 0);
    std::ofstream(path, std::ios::trunc) << text.substr(0, cut) << "{\"type\":\"individ";
    CHECK_FALSE(read_run_record_file(path.string()).complete);
    auto resume = mode_args;
    resume.push_back("--resume");
    REQUIRE(cli(resume).code == kExitOk);
    const auto again = read_run_record_file(path.string());
    CHECK(again.complete);
    CHECK(again.checksum == full.checksum);
  }

  SUBCASE("replay reproduces recorded fitness") {
    const auto rec = (fs::path(out_a) / "no_inheritance_sine_flat_seed43.ndjson").string();
    for (int id = 0; id < 9; ++id) CHECK(cli({"replay", rec, "--id", std::to_string(id)}).code == kExitOk);
    const auto traj = (s.dir / "t.tsv").string();
    CHECK(cli({"replay", rec, "--id", "4", "--out", traj}).code == kExitOk);
    CHECK(fs::file_size(traj) > 0);
    CHECK(cli({"replay", rec, "--id", "99"}).code == kExitUsage);
  }

  SUBCASE("report") {
    CHECK(cli({"report", "--output", (s.dir / "r0").string()}).code == kExitUsage);
    REQUIRE(cli({"run", "--config", cfg, "--runs", "3", "--seed", "42", "--set", "mode=inherit_samples", "--output",
                 out_a, "--quiet"})
                .code == kExitOk);
    std::vector<std::string> args{"report"};
    for (const auto& e : fs::directory_iterator(out_a)) args.push_back(e.path().string());
    const auto rep = (s.dir / "rep").string();
    args.insert(args.end(), {"--output", rep, "--figure", "fig5", "fig6", "fig7", "fig8", "fig9", "--long-budget", "6",
                             "--long-robots", "2", "--delta-subsample", "0.5"});
    const auto r = cli(args);
    CHECK(r.code == kExitOk);
    for (const char* f : {"fig5_performance.csv", "fig5_performance.svg", "fig5_pvalues.csv", "fig6_delta.csv",
                          "fig6_slopes.csv", "fig6_delta.svg", "fig7_long_budget.csv", "fig7_long_budget.svg",
                          "fig8_ted_all.csv", "fig8_ted_improving.csv", "fig8_ted_all.svg", "fig8_ted_improving.svg",
                          "fig9_gaits.csv"}) {
      CHECK_MESSAGE(fs::exists(fs::path(rep) / f), f);
    }
    const auto pvalues = slurp(fs::path(rep) / "fig5_pvalues.csv");
    CHECK(pvalues.rfind("# version=", 0) == 0);
    CHECK(pvalues.find("inherit_samples") != std::string::npos);

    const auto single = (s.dir / "single").string();
    CHECK(cli({"report", args[1], "--output", single, "--figure", "fig8"}).code == kExitOk);
    CHECK(fs::exists(fs::path(single) / "fig8_ted_all.csv"));
    CHECK(fs::exists(fs::path(single) / "fig8_ted_improving.csv"));
    CHECK_FALSE(fs::exists(fs::path(single) / "fig5_pvalues.csv"));
    CHECK(cli({"report", args[1], "--output", single, "--figure", "fig4"}).code == kExitUsage);
  }
}
