#include "lamarck/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace lamarck {

std::string ConfigError::format(int line, const std::string& field, const std::string& message) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

namespace {

struct Field {
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a valid number: '" + std::string(s) + "'");
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

#define LAMARCK_INT(name, expr)                                                     \
  Field {                                                                           \
    name, [](const ExperimentConfig& c) { return std::to_string(c.expr); },         \
        [](ExperimentConfig& c, std::string_view v) { c.expr = parse_number<int>(v); } \
  }
#define LAMARCK_DOUBLE(name, expr)                                                      \
  Field {                                                                               \
    name, [](const ExperimentConfig& c) { return fmt_double(c.expr); },                 \
        [](ExperimentConfig& c, std::string_view v) { c.expr = parse_number<double>(v); } \
  }
#define LAMARCK_BOOL(name, expr)                                                  \
  Field {                                                                         \
    name, [](const ExperimentConfig& c) { return std::string(c.expr ? "true" : "false"); }, \
        [](ExperimentConfig& c, std::string_view v) { c.expr = parse_bool(v); }   \
  }
#define LAMARCK_ENUM(name, expr, parse)                                                \
  Field {                                                                              \
    name, [](const ExperimentConfig& c) { return std::string(to_string(c.expr)); },    \
        [](ExperimentConfig& c, std::string_view v) { c.expr = parse(v); }             \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      LAMARCK_ENUM("mode", evo.mode, inheritance_mode_from_string),
      LAMARCK_ENUM("controller", evo.controller, controller_kind_from_string),
      LAMARCK_ENUM("terrain", evo.terrain, terrain_kind_from_string),
      Field{"seed", [](const ExperimentConfig& c) { return std::to_string(c.evo.seed); },
            [](ExperimentConfig& c, std::string_view v) { c.evo.seed = parse_number<std::uint64_t>(v); }},
      LAMARCK_INT("population_size", evo.population_size),
      LAMARCK_INT("offspring_per_generation", evo.offspring_per_generation),
      LAMARCK_INT("tournament_size", evo.tournament_size),
      LAMARCK_INT("generations", evo.generations),
      LAMARCK_INT("init_min_size", evo.init_min_size),
      LAMARCK_INT("init_max_size", evo.init_max_size),
      LAMARCK_INT("max_size", evo.max_size),
      LAMARCK_INT("max_mutation_step", evo.max_mutation_step),
      LAMARCK_DOUBLE("controller_sigma", evo.controller_sigma),
      LAMARCK_BOOL("baseline_writeback", evo.baseline_writeback),
      LAMARCK_INT("learn_budget", evo.learn.budget),
      LAMARCK_INT("reeval_count", evo.learn.reeval_count),
      LAMARCK_DOUBLE("inherited_noise_var", evo.learn.inherited_noise_var),
      LAMARCK_DOUBLE("gp_lengthscale", evo.learn.hyper.lengthscale),
      LAMARCK_DOUBLE("gp_signal_var", evo.learn.hyper.signal_var),
      LAMARCK_DOUBLE("gp_jitter", evo.learn.hyper.jitter),
      LAMARCK_DOUBLE("ucb_beta", evo.learn.hyper.ucb_beta),
      LAMARCK_BOOL("standardize_y", evo.learn.hyper.standardize),
      LAMARCK_INT("n_candidates", evo.learn.proposal.n_candidates),
      LAMARCK_INT("n_local", evo.learn.proposal.n_local),
      LAMARCK_DOUBLE("local_sigma", evo.learn.proposal.local_sigma),
      LAMARCK_DOUBLE("sim_duration", evo.sim.duration),
      LAMARCK_DOUBLE("sim_timestep", evo.sim.timestep),
      LAMARCK_DOUBLE("contact_stiffness", evo.sim.contact_stiffness),
      LAMARCK_DOUBLE("contact_damping", evo.sim.contact_damping),
      LAMARCK_DOUBLE("friction", evo.sim.friction),
      LAMARCK_DOUBLE("servo_gain", evo.sim.servo_gain),
      LAMARCK_DOUBLE("servo_max_speed", evo.sim.servo_max_speed),
      LAMARCK_DOUBLE("hinge_range_deg", evo.sim.hinge_range_deg),
      LAMARCK_INT("runs", runs),
      Field{"output_dir", [](const ExperimentConfig& c) { return c.output_dir; },
            [](ExperimentConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      LAMARCK_DOUBLE("delta_subsample", delta_subsample),
      LAMARCK_INT("delta_random_samples", delta_random_samples),
      LAMARCK_INT("long_budget", long_budget),
      LAMARCK_INT("long_robots", long_robots),
      Field{"analysis_seed", [](const ExperimentConfig& c) { return std::to_string(c.analysis_seed); },
            [](ExperimentConfig& c, std::string_view v) { c.analysis_seed = parse_number<std::uint64_t>(v); }},
  };
  return table;
}

#undef LAMARCK_INT
#undef LAMARCK_DOUBLE
#undef LAMARCK_BOOL
#undef LAMARCK_ENUM

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void assign(ExperimentConfig& cfg, std::string_view line, int lineno) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(lineno, "", "expected 'key = value'");
  const std::string key(trim(line.substr(0, eq)));
  const std::string_view value = trim(line.substr(eq + 1));
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError(lineno, key, "unknown key");
  if (value.empty()) throw ConfigError(lineno, key, "missing value");
  try {
    f->set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lineno, key, e.what());
  }
}

}  // namespace

std::string validate(const ExperimentConfig& cfg) {
  if (auto err = validate(cfg.evo); !err.empty()) return err;
  if (cfg.runs < 1) return "runs must be positive";
  if (cfg.output_dir.empty()) return "output_dir must not be empty";
  if (!(cfg.delta_subsample > 0.0 && cfg.delta_subsample <= 1.0)) return "delta_subsample must lie in (0, 1]";
  if (cfg.delta_random_samples < 1) return "delta_random_samples must be positive";
  if (cfg.long_budget < 1) return "long_budget must be positive";
  if (cfg.long_robots < 1) return "long_robots must be positive";
  return {};
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    assign(cfg, line, lineno);
    const std::string key(trim(line.substr(0, line.find('='))));
    if (!seen.emplace(key, lineno).second) throw ConfigError(lineno, key, "duplicate key");
  }
  if (const auto err = validate(cfg); !err.empty()) {
    // messages start with the field name
    const std::string field = err.substr(0, err.find(' '));
    const auto it = seen.find(field);
    throw ConfigError(it != seen.end() ? it->second : 0, find_field(field) ? field : "", err);
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) { assign(cfg, trim(assignment), 0); }

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
  return out.str();
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h) {
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_checksum(const ExperimentConfig& cfg) { return hex64(fnv1a64(serialize_config(cfg))); }

}  // namespace lamarck
