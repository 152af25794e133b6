#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lamarck/config.hpp"
#include "lamarck/run_record.hpp"

namespace lamarck {

/// Exit codes: 0 success, 1 runtime failure (I/O, checksum, replay mismatch),
/// 2 usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
  std::string config_path;  ///< empty: built-in defaults
  std::vector<std::string> overrides;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool resume = false;
  bool quiet = false;
  int threads = 1;
};

/// File name of run `index` under the config's output directory.
std::string record_path(const ExperimentConfig& cfg);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ReportOptions {
  std::vector<std::string> records;
  std::vector<std::string> figures;  ///< subset of fig5..fig9; empty means all
  std::string output_dir = "report";
  std::optional<double> delta_subsample;
  std::optional<int> long_budget;
  std::optional<int> long_robots;
  int threads = 1;
};

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

struct ReplayOptions {
  std::string record;
  int id = -1;
  std::string output;  ///< trajectory file; empty: none
  bool tolerant = false;  ///< accept |difference| <= 1e-9 instead of bit equality
};

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Thread count from LAMARCK_THREADS, default 1.
int env_threads();

/// Command-line entry point shared by the tool and the tests.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lamarck
