#include "lamarck/run_record.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace lamarck {

using nlohmann::json;

namespace {

std::string_view to_string(BodyMutation m) {
  switch (m) {
    case BodyMutation::Add: return "add";
    case BodyMutation::Remove: return "remove";
    case BodyMutation::FlipPhase: return "flip";
  }
  return "?";
}

BodyMutation body_mutation_from_string(std::string_view s) {
  for (auto m : {BodyMutation::Add, BodyMutation::Remove, BodyMutation::FlipPhase}) {
    if (to_string(m) == s) return m;
  }
  throw RecordError("unknown mutation '" + std::string(s) + "'");
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

std::string canonical(json j) {
  j.erase("wall_ms");
  return j.dump();
}

}  // namespace

const Individual* RunRecord::find(int id) const {
  const auto it = std::lower_bound(individuals.begin(), individuals.end(), id,
                                   [](const Individual& a, int v) { return a.id < v; });
  return it != individuals.end() && it->id == id ? &*it : nullptr;
}

RecordWriter::RecordWriter(const std::string& path, const ExperimentConfig& cfg, const RunRecord* resume)
    : out_(path, std::ios::out | std::ios::trunc), hash_(fnv1a64("")) {
  if (!out_) throw RecordError("cannot open " + path + " for writing");
  json head = {{"type", "config"},
               {"config", serialize_config(cfg)},
               {"config_checksum", config_checksum(cfg)},
               {"version", std::string(kVersion)}};
  write(canonical(head), head.dump());
  if (resume != nullptr) {
    for (const auto& stats : resume->generations) {
      std::vector<const Individual*> born;
      for (const auto& ind : resume->individuals) {
        if (ind.birth == stats.generation) born.push_back(&ind);
      }
      on_generation(born, stats);
    }
  }
  out_.flush();
}

void RecordWriter::write(const std::string& canonical_line, const std::string& full_line) {
  hash_ = fnv1a64(canonical_line, hash_);
  hash_ = fnv1a64("\n", hash_);
  ++lines_;
  out_ << full_line << '\n';
}

void RecordWriter::write_individual(const Individual& ind) {
  const LearnResult& l = ind.learn;
  json j = {{"type", "individual"},
            {"id", ind.id},
            {"birth", ind.birth},
            {"parent", ind.parent ? json(*ind.parent) : json(nullptr)},
            {"mutation", ind.mutation ? json(std::string(to_string(*ind.mutation))) : json(nullptr)},
            {"fitness", ind.fitness},
            {"genotype", json::parse(to_text(ind.genotype))},
            {"best_x", vec_to_json(l.best_x)},
            {"evaluations", l.evaluations},
            {"inherited", l.inherited},
            {"reevaluated", l.reevaluated},
            {"fresh", l.fresh},
            {"incumbent", l.incumbent}};
  write(canonical(j), j.dump());
  for (std::size_t i = 0; i < l.samples.size(); ++i) {
    const Sample& s = l.samples[i];
    json r = {{"type", "sample"},
              {"robot", ind.id},
              {"iteration", i},
              {"origin", std::string(to_string(s.origin))},
              {"x", vec_to_json(s.x)},
              {"y", s.y},
              {"noise_var", s.noise_var},
              {"wall_ms", i < l.wall_ms.size() ? l.wall_ms[i] : 0.0}};
    write(canonical(r), r.dump());
  }
}

void RecordWriter::on_generation(const std::vector<const Individual*>& born, const GenerationStats& stats) {
  std::vector<const Individual*> sorted = born;
  std::sort(sorted.begin(), sorted.end(), [](const Individual* a, const Individual* b) { return a->id < b->id; });
  for (const auto* ind : sorted) write_individual(*ind);
  json g = {{"type", "generation"},   {"generation", stats.generation}, {"best", stats.best},
            {"median", stats.median}, {"mean", stats.mean},             {"best_ever", stats.best_ever},
            {"evaluations", stats.evaluations}};
  write(canonical(g), g.dump());
  out_.flush();
  if (!out_) throw RecordError("write failed");
}

void RecordWriter::finish() {
  checksum_ = hex64(hash_);
  json c = {{"type", "checksum"}, {"value", checksum_}, {"lines", lines_}};
  out_ << c.dump() << '\n';
  out_.flush();
  if (!out_) throw RecordError("write failed");
}

RunRecord read_run_record(std::istream& in) {
  RunRecord rec;
  std::uint64_t hash = fnv1a64("");
  long long lines = 0;
  std::map<int, Individual> by_id;
  std::string line;
  bool have_config = false;
  std::string expected;
  long long expected_lines = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      // a torn final line from an interrupted run is tolerated
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw RecordError("line " + std::to_string(lineno) + ": malformed JSON");
    }
    const std::string type = j.value("type", "");
    if (type == "checksum") {
      expected = j.at("value").get<std::string>();
      expected_lines = j.at("lines").get<long long>();
      rec.complete = true;
      break;
    }
    hash = fnv1a64(canonical(j), hash);
    hash = fnv1a64("\n", hash);
    ++lines;
    try {
      if (type == "config") {
        rec.config_text = j.at("config").get<std::string>();
        rec.config = parse_config(rec.config_text);
        rec.config_checksum = j.at("config_checksum").get<std::string>();
        rec.version = j.at("version").get<std::string>();
        if (rec.config_checksum != config_checksum(rec.config)) throw RecordError("config checksum mismatch");
        have_config = true;
      } else if (type == "individual") {
        Individual ind;
        ind.id = j.at("id").get<int>();
        ind.birth = j.at("birth").get<int>();
        if (!j.at("parent").is_null()) ind.parent = j.at("parent").get<int>();
        if (!j.at("mutation").is_null()) ind.mutation = body_mutation_from_string(j.at("mutation").get<std::string>());
        ind.fitness = j.at("fitness").get<double>();
        ind.genotype = genotype_from_text(j.at("genotype").dump());
        LearnResult& l = ind.learn;
        l.layout = layout_of(ind.genotype);
        l.best_x = vec_from_json(j.at("best_x"));
        l.best_y = ind.fitness;
        l.evaluations = j.at("evaluations").get<int>();
        l.inherited = j.at("inherited").get<int>();
        l.reevaluated = j.at("reevaluated").get<int>();
        l.fresh = j.at("fresh").get<int>();
        l.incumbent = j.at("incumbent").get<std::vector<double>>();
        if (!by_id.emplace(ind.id, std::move(ind)).second) throw RecordError("duplicate individual id");
      } else if (type == "sample") {
        const int robot = j.at("robot").get<int>();
        const auto it = by_id.find(robot);
        if (it == by_id.end()) throw RecordError("sample for unknown robot " + std::to_string(robot));
        LearnResult& l = it->second.learn;
        if (j.at("iteration").get<std::size_t>() != l.samples.size()) throw RecordError("samples out of order");
        l.samples.push_back(Sample{vec_from_json(j.at("x")), j.at("y").get<double>(), j.at("noise_var").get<double>(),
                                   sample_origin_from_string(j.at("origin").get<std::string>())});
        l.wall_ms.push_back(j.value("wall_ms", 0.0));
      } else if (type == "generation") {
        GenerationStats s;
        s.generation = j.at("generation").get<int>();
        s.best = j.at("best").get<double>();
        s.median = j.at("median").get<double>();
        s.mean = j.at("mean").get<double>();
        s.best_ever = j.at("best_ever").get<double>();
        s.evaluations = j.at("evaluations").get<long long>();
        rec.generations.push_back(s);
      } else {
        throw RecordError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw RecordError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw RecordError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_config) throw RecordError("record has no config line");
  rec.checksum = hex64(hash);
  if (rec.complete && (expected != rec.checksum || expected_lines != lines)) {
    throw RecordError("checksum mismatch: recorded " + expected + ", computed " + rec.checksum);
  }
  const int last = rec.generations.empty() ? -1 : rec.generations.back().generation;
  for (auto& [id, ind] : by_id) {
    if (ind.birth <= last) rec.individuals.push_back(std::move(ind));
  }
  return rec;
}

RunRecord read_run_record_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RecordError("cannot open " + path);
  return read_run_record(in);
}

ResumeState resume_state(const RunRecord& record) {
  ResumeState s;
  s.individuals = record.individuals;
  s.last_generation = record.generations.empty() ? -1 : record.generations.back().generation;
  return s;
}

}  // namespace lamarck
