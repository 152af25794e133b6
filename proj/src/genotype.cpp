#include "lamarck/genotype.hpp"

#include <algorithm>
#include <numbers>
#include <set>
#include <tuple>

namespace lamarck {

namespace {

constexpr int kRetryCap = 100;

// Rotation taking a child's local frame into its parent's local frame.
Eigen::Matrix3i slot_rotation(Slot s) {
  Eigen::Matrix3i r;
  switch (s) {
    case Slot::Front:
      r.setIdentity();
      break;
    case Slot::Back:
      r << -1, 0, 0, 0, -1, 0, 0, 0, 1;
      break;
    case Slot::Side:
    case Slot::Left:
      r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
      break;
    case Slot::Right:
      r << 0, 1, 0, -1, 0, 0, 0, 0, 1;
      break;
    case Slot::Up:
      r << 0, 0, -1, 0, 1, 0, 1, 0, 0;
      break;
    case Slot::Down:
      r << 0, 0, 1, 0, 1, 0, -1, 0, 0;
      break;
  }
  return r;
}

Eigen::Matrix3i lateral_reflection() {
  Eigen::Matrix3i s = Eigen::Matrix3i::Identity();
  s(1, 1) = -1;
  return s;
}

struct Expander {
  PhenotypeBody body;
  std::set<std::tuple<int, int, int>> occupied;

  void place(const ModuleNode& node, int parent, Slot slot, const Eigen::Matrix3i& frame,
             const Eigen::Vector3i& pos, bool center, bool mirrored, bool mirror_root, int joint_depth) {
    if (!occupied.emplace(pos.x(), pos.y(), pos.z()).second) {
      throw CollisionError("two modules occupy grid cell (" + std::to_string(pos.x()) + ", " +
                           std::to_string(pos.y()) + ", " + std::to_string(pos.z()) + ")");
    }
    BodyModule m;
    m.id = static_cast<int>(body.modules.size());
    m.kind = node.kind;
    m.position = pos;
    m.orientation = frame;
    m.parent = parent;
    m.slot = slot;
    m.mirrored = mirrored;
    m.mirror_root = mirror_root;
    m.center = center;
    int depth = joint_depth;
    if (node.kind == ModuleKind::Joint) {
      m.joint = static_cast<int>(body.joints.size());
      body.joints.push_back({m.id, node.group, mirrored, joint_depth % 2 == 0 ? HingeAxis::Pitch : HingeAxis::Yaw});
      ++depth;
    }
    body.modules.push_back(m);
    const int self = m.id;
    for (const auto& child : node.children) {
      if (child.slot == Slot::Side) {
        const Eigen::Matrix3i f = frame * slot_rotation(Slot::Left);
        place(child, self, Slot::Side, f, pos + f.col(0), false, mirrored, false, depth);
        const Eigen::Matrix3i g = frame * lateral_reflection() * slot_rotation(Slot::Left);
        place(child, self, Slot::Side, g, pos + g.col(0), false, true, true, depth);
      } else {
        const Eigen::Matrix3i f = frame * slot_rotation(child.slot);
        place(child, self, child.slot, f, pos + f.col(0), center, mirrored, false, depth);
      }
    }
  }
};

int expanded_size_impl(const ModuleNode& n, int mult) {
  int total = mult;
  for (const auto& c : n.children) {
    total += expanded_size_impl(c, c.slot == Slot::Side ? mult * 2 : mult);
  }
  return total;
}

// Location of an empty slot: path of child indices from the root, then the slot.
struct SlotRef {
  std::vector<std::size_t> path;
  Slot slot;
  int cost;  // modules added by filling it (1 on the plane, 2 off it)
};

void collect_empty_slots(const ModuleNode& n, bool center, std::vector<std::size_t>& path,
                         std::vector<SlotRef>& out) {
  for (Slot s : child_slots(n.kind, center)) {
    const bool used = std::any_of(n.children.begin(), n.children.end(),
                                  [s](const ModuleNode& c) { return c.slot == s; });
    if (!used) {
      out.push_back({path, s, (center && s != Slot::Side) ? 1 : 2});
    }
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    const auto& c = n.children[i];
    collect_empty_slots(c, center && c.slot != Slot::Side, path, out);
    path.pop_back();
  }
}

ModuleNode& node_at(ModuleNode& root, const std::vector<std::size_t>& path) {
  ModuleNode* n = &root;
  for (auto i : path) n = &n->children[i];
  return *n;
}

void insert_child(ModuleNode& parent, ModuleNode child) {
  auto it = std::lower_bound(parent.children.begin(), parent.children.end(), child.slot,
                             [](const ModuleNode& c, Slot s) { return c.slot < s; });
  parent.children.insert(it, std::move(child));
}

bool collision_free(const Genotype& g) {
  try {
    (void)expand_symmetry(g);
    return true;
  } catch (const CollisionError&) {
    return false;
  }
}

// Fills one randomly chosen legal slot with a fresh module. `budget` bounds
// the modules the insertion may add; negative means unbounded.
bool add_one(Genotype& g, Rng& rng, int budget) {
  const ModuleKind kind = uniform_int(rng, 0, 1) == 0 ? ModuleKind::Block : ModuleKind::Joint;
  std::vector<SlotRef> slots;
  std::vector<std::size_t> path;
  collect_empty_slots(g.root, true, path, slots);

  std::vector<SlotRef> legal;
  for (auto& ref : slots) {
    if (budget >= 0 && ref.cost > budget) continue;
    Genotype trial = g;
    insert_child(node_at(trial.root, ref.path), ModuleNode{kind, ref.slot, -1, {}});
    if (collision_free(trial)) legal.push_back(std::move(ref));
  }
  if (legal.empty()) return false;

  const auto& pick = legal[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(legal.size()) - 1))];
  ModuleNode node{kind, pick.slot, -1, {}};
  if (kind == ModuleKind::Joint) {
    node.group = g.next_group++;
    g.params[node.group] = random_params(g.controller, rng);
  }
  insert_child(node_at(g.root, pick.path), std::move(node));
  return true;
}

void collect_leaves(const ModuleNode& n, std::vector<std::size_t>& path, std::vector<std::vector<std::size_t>>& out) {
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    if (n.children[i].children.empty()) {
      out.push_back(path);
    } else {
      collect_leaves(n.children[i], path, out);
    }
    path.pop_back();
  }
}

void collect_groups(const ModuleNode& n, std::vector<ParamGroupId>& out) {
  if (n.kind == ModuleKind::Joint) out.push_back(n.group);
  for (const auto& c : n.children) collect_groups(c, out);
}

std::string check_node(const ModuleNode& n, bool center, bool is_root) {
  if (is_root && n.kind != ModuleKind::Head) return "root is not a head module";
  if (!is_root && n.kind == ModuleKind::Head) return "head module below the root";
  if (n.kind != ModuleKind::Joint && n.group != -1) return "non-joint module owns a parameter group";
  if (n.kind == ModuleKind::Joint && n.group < 0) return "joint without a parameter group";
  const auto allowed = child_slots(n.kind, center);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const auto& c = n.children[i];
    if (std::find(allowed.begin(), allowed.end(), c.slot) == allowed.end()) {
      return std::string("slot ") + std::string(to_string(c.slot)) + " not available on " +
             std::string(to_string(n.kind));
    }
    if (i > 0 && !(n.children[i - 1].slot < c.slot)) return "children not in strict slot order";
    auto err = check_node(c, center && c.slot != Slot::Side, false);
    if (!err.empty()) return err;
  }
  return {};
}

}  // namespace

const ParamBounds& param_bounds(ControllerKind kind) {
  static const ParamBounds sine{{{0.0, 1.0}, {0.0, 2.0 * std::numbers::pi}, {-0.5, 0.5}}};
  static const ParamBounds cpg{{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
  return kind == ControllerKind::Sine ? sine : cpg;
}

std::vector<Slot> child_slots(ModuleKind kind, bool center) {
  switch (kind) {
    case ModuleKind::Head:
      return {Slot::Front, Slot::Back, Slot::Side};
    case ModuleKind::Joint:
      return {Slot::Front};
    case ModuleKind::Block:
      if (center) return {Slot::Front, Slot::Side, Slot::Up, Slot::Down};
      return {Slot::Front, Slot::Left, Slot::Right, Slot::Up, Slot::Down};
  }
  return {};
}

int expanded_size(const Genotype& g) { return expanded_size_impl(g.root, 1); }

int node_count(const ModuleNode& n) {
  int total = 1;
  for (const auto& c : n.children) total += node_count(c);
  return total;
}

PhenotypeBody expand_symmetry(const Genotype& g) {
  Expander e;
  e.place(g.root, -1, Slot::Front, Eigen::Matrix3i::Identity(), Eigen::Vector3i::Zero(), true, false, false, 0);
  return std::move(e.body);
}

std::string check_invariants(const Genotype& g, int max_size) {
  auto err = check_node(g.root, true, true);
  if (!err.empty()) return err;

  std::vector<ParamGroupId> groups;
  collect_groups(g.root, groups);
  std::sort(groups.begin(), groups.end());
  if (std::adjacent_find(groups.begin(), groups.end()) != groups.end()) return "parameter group shared by two genotype joints";
  if (groups.size() != g.params.size()) return "parameter map does not match the joints";
  for (auto id : groups) {
    if (!g.params.contains(id)) return "joint group missing from parameter map";
    if (id >= g.next_group) return "group id not below next_group";
  }
  const auto& bounds = param_bounds(g.controller);
  for (const auto& [id, p] : g.params) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(p[i] >= bounds[i].lo && p[i] <= bounds[i].hi)) return "controller parameter out of bounds";
    }
  }
  if (expanded_size(g) > max_size) return "expanded size exceeds max_size";
  try {
    auto body = expand_symmetry(g);
    if (static_cast<int>(body.modules.size()) != expanded_size(g)) return "expanded size mismatch";
  } catch (const CollisionError& e) {
    return e.what();
  }
  return {};
}

ControllerParams random_params(ControllerKind kind, Rng& rng) {
  const auto& b = param_bounds(kind);
  ControllerParams p{};
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = std::uniform_real_distribution<double>(b[i].lo, b[i].hi)(rng);
  }
  return p;
}

Genotype random_genotype(Rng& rng, int min_size, int max_size, ControllerKind kind) {
  if (min_size < 1 || max_size < min_size) {
    throw std::invalid_argument("random_genotype requires 1 <= min_size <= max_size");
  }
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    Genotype g;
    g.controller = kind;
    const int target = uniform_int(rng, min_size, max_size);
    bool ok = true;
    while (expanded_size(g) < target) {
      if (!add_one(g, rng, target - expanded_size(g))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    g.alternating_phase = uniform_int(rng, 0, 1) == 1;
    return g;
  }
  throw GenerationFailure("random_genotype: no legal tree after retry cap");
}

std::optional<Genotype> add_modules(const Genotype& g, int count, int max_size, Rng& rng) {
  Genotype out = g;
  for (int i = 0; i < count; ++i) {
    if (!add_one(out, rng, -1)) return std::nullopt;
  }
  if (expanded_size(out) > max_size) return std::nullopt;
  return out;
}

std::optional<Genotype> remove_modules(const Genotype& g, int count, Rng& rng) {
  Genotype out = g;
  for (int i = 0; i < count; ++i) {
    std::vector<std::vector<std::size_t>> leaves;
    std::vector<std::size_t> path;
    collect_leaves(out.root, path, leaves);
    if (leaves.empty()) {
      if (i == 0) return std::nullopt;
      break;
    }
    auto pick = leaves[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(leaves.size()) - 1))];
    const std::size_t idx = pick.back();
    pick.pop_back();
    ModuleNode& parent = node_at(out.root, pick);
    if (parent.children[idx].kind == ModuleKind::Joint) out.params.erase(parent.children[idx].group);
    parent.children.erase(parent.children.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

Genotype flip_phase(const Genotype& g) {
  Genotype out = g;
  out.alternating_phase = !out.alternating_phase;
  return out;
}

BodyMutationResult mutate_body_detailed(const Genotype& g, Rng& rng, int max_size, int max_step) {
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    const auto type = static_cast<BodyMutation>(uniform_int(rng, 0, 2));
    const int k = uniform_int(rng, 1, max_step);
    std::optional<Genotype> out;
    switch (type) {
      case BodyMutation::Add:
        out = add_modules(g, k, max_size, rng);
        break;
      case BodyMutation::Remove:
        out = remove_modules(g, k, rng);
        break;
      case BodyMutation::FlipPhase:
        return {flip_phase(g), type, 0};
    }
    if (out) return {std::move(*out), type, k};
  }
  throw GenerationFailure("mutate_body: no applicable mutation after retry cap");
}

Genotype mutate_body(const Genotype& g, Rng& rng, int max_size, int max_step) {
  return mutate_body_detailed(g, rng, max_size, max_step).genotype;
}

Genotype mutate_controller(const Genotype& g, Rng& rng, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("mutate_controller requires sigma > 0");
  Genotype out = g;
  const auto& b = param_bounds(g.controller);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& [id, p] : out.params) {
    for (std::size_t i = 0; i < 3; ++i) {
      p[i] = std::clamp(p[i] + noise(rng), b[i].lo, b[i].hi);
    }
  }
  return out;
}

std::string_view to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::Head: return "head";
    case ModuleKind::Block: return "block";
    case ModuleKind::Joint: return "joint";
  }
  return "?";
}

std::string_view to_string(Slot s) {
  switch (s) {
    case Slot::Front: return "front";
    case Slot::Back: return "back";
    case Slot::Side: return "side";
    case Slot::Left: return "left";
    case Slot::Right: return "right";
    case Slot::Up: return "up";
    case Slot::Down: return "down";
  }
  return "?";
}

std::string_view to_string(ControllerKind k) { return k == ControllerKind::Sine ? "sine" : "cpg"; }

ModuleKind module_kind_from_string(std::string_view s) {
  if (s == "head") return ModuleKind::Head;
  if (s == "block") return ModuleKind::Block;
  if (s == "joint") return ModuleKind::Joint;
  throw std::invalid_argument("unknown module kind '" + std::string(s) + "'");
}

Slot slot_from_string(std::string_view s) {
  for (auto slot : {Slot::Front, Slot::Back, Slot::Side, Slot::Left, Slot::Right, Slot::Up, Slot::Down}) {
    if (to_string(slot) == s) return slot;
  }
  throw std::invalid_argument("unknown slot '" + std::string(s) + "'");
}

ControllerKind controller_kind_from_string(std::string_view s) {
  if (s == "sine") return ControllerKind::Sine;
  if (s == "cpg") return ControllerKind::Cpg;
  throw std::invalid_argument("unknown controller kind '" + std::string(s) + "'");
}

}  // namespace lamarck
