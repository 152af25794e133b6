#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamarck/config.hpp"
#include "lamarck/evolution.hpp"

namespace lamarck {

/// Newline-delimited JSON, one object per line, discriminated by "type":
///   config      {config text, config checksum, version}
///   individual  {id, birth, parent, mutation, fitness, genotype, best_x, counts, incumbent}
///   sample      {robot, iteration, origin, x, y, noise_var, wall_ms}
///   generation  {generation, best, median, mean, best_ever, evaluations}
///   checksum    {value, lines}  (complete runs only)
/// The checksum is FNV-1a 64 over the preceding lines with "wall_ms" removed.
struct RunRecord {
  ExperimentConfig config;
  std::string config_text;
  std::string config_checksum;
  std::string version;
  std::vector<Individual> individuals;  ///< in id order
  std::vector<GenerationStats> generations;
  bool complete = false;
  std::string checksum;  ///< recomputed over the payload; empty if no checksum line

  const Individual* find(int id) const;
};

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends records as the run progresses and flushes after each generation.
class RecordWriter : public EvolutionObserver {
 public:
  /// Starts a new file, or with `resume` rewrites the prefix of `resume` up to
  /// its last complete generation and appends after it.
  RecordWriter(const std::string& path, const ExperimentConfig& cfg, const RunRecord* resume = nullptr);

  void on_generation(const std::vector<const Individual*>& born, const GenerationStats& stats) override;

  /// Writes the closing checksum line.
  void finish();

  const std::string& checksum() const { return checksum_; }

 private:
  void write(const std::string& canonical_line, const std::string& full_line);
  void write_individual(const Individual& ind);

  std::ofstream out_;
  std::uint64_t hash_;
  long long lines_ = 0;
  std::string checksum_;
};

/// Parses a record. Throws RecordError on malformed content or, for complete
/// records, on checksum mismatch. Incomplete records end at the last full
/// generation.
RunRecord read_run_record(std::istream& in);
RunRecord read_run_record_file(const std::string& path);

/// Individuals and generation count for resuming an interrupted run.
ResumeState resume_state(const RunRecord& record);

}  // namespace lamarck
