#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lamarck/rng.hpp"

namespace lamarck {

enum class ModuleKind : std::uint8_t { Head, Block, Joint };

/// Attachment slots, in canonical child order. Slots are expressed in the
/// parent's local frame: Front continues away from the parent, Side is the
/// mirrored left/right pair of a central module.
enum class Slot : std::uint8_t { Front, Back, Side, Left, Right, Up, Down };

enum class ControllerKind : std::uint8_t { Sine, Cpg };

/// Hinge rotation axis in the joint's local frame.
enum class HingeAxis : std::uint8_t { Pitch, Yaw };

using ParamGroupId = std::int32_t;
using ControllerParams = std::array<double, 3>;

struct ParamBound {
  double lo;
  double hi;
};
using ParamBounds = std::array<ParamBound, 3>;

/// Sine: amplitude [0,1], phase [0,2pi], offset [-0.5,0.5]. CPG: three weights in [-1,1].
const ParamBounds& param_bounds(ControllerKind kind);

struct ModuleNode {
  ModuleKind kind = ModuleKind::Block;
  Slot slot = Slot::Front;  ///< slot occupied in the parent (ignored for the head)
  ParamGroupId group = -1;  ///< joints only
  std::vector<ModuleNode> children;  ///< sorted by slot

  bool operator==(const ModuleNode&) const = default;
};

struct Genotype {
  ModuleNode root{ModuleKind::Head, Slot::Front, -1, {}};
  bool alternating_phase = false;
  ControllerKind controller = ControllerKind::Sine;
  std::map<ParamGroupId, ControllerParams> params;
  ParamGroupId next_group = 0;

  bool operator==(const Genotype&) const = default;
};

class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BodyModule {
  int id = 0;
  ModuleKind kind = ModuleKind::Block;
  Eigen::Vector3i position = Eigen::Vector3i::Zero();  ///< grid cell, module-size units
  Eigen::Matrix3i orientation = Eigen::Matrix3i::Identity();  ///< rest frame (columns: forward, left, up); improper when mirrored
  int parent = -1;
  Slot slot = Slot::Front;
  bool mirrored = false;  ///< inside a reflected copy of a side subtree
  bool mirror_root = false;  ///< first module of a reflected copy
  int joint = -1;  ///< index into PhenotypeBody::joints, joints only
  bool center = true;  ///< on the symmetry plane
};

struct BodyJoint {
  int module = 0;
  ParamGroupId group = -1;
  bool mirrored = false;
  HingeAxis axis = HingeAxis::Pitch;
};

struct PhenotypeBody {
  std::vector<BodyModule> modules;  ///< parents precede children
  std::vector<BodyJoint> joints;
};

/// Slots a node may fill, given whether it sits on the symmetry plane.
std::vector<Slot> child_slots(ModuleKind kind, bool center);

/// Module count after symmetry expansion (side subtrees count twice).
int expanded_size(const Genotype& g);

/// Number of nodes in the genotype tree.
int node_count(const ModuleNode& n);

/// Places every module on the grid, instantiating side subtrees on both
/// sides. Throws CollisionError when two modules share a cell.
PhenotypeBody expand_symmetry(const Genotype& g);

/// Empty string when valid, otherwise a description of the first violated invariant.
std::string check_invariants(const Genotype& g, int max_size);

ControllerParams random_params(ControllerKind kind, Rng& rng);

Genotype random_genotype(Rng& rng, int min_size, int max_size, ControllerKind kind);

enum class BodyMutation : std::uint8_t { Add, Remove, FlipPhase };

/// Adds `count` modules one at a time, each at a uniformly chosen legal slot.
/// Returns nullopt when the result would exceed max_size or no legal slot exists.
std::optional<Genotype> add_modules(const Genotype& g, int count, int max_size, Rng& rng);

/// Removes up to `count` leaf modules. Returns nullopt when only the head is left.
std::optional<Genotype> remove_modules(const Genotype& g, int count, Rng& rng);

Genotype flip_phase(const Genotype& g);

struct BodyMutationResult {
  Genotype genotype;
  BodyMutation applied;
  int count;
};

/// One body mutation drawn uniformly from {add k, remove k, flip}, k uniform in
/// [1, max_step]. Impossible mutations are re-drawn (100 attempts).
BodyMutationResult mutate_body_detailed(const Genotype& g, Rng& rng, int max_size, int max_step = 3);
Genotype mutate_body(const Genotype& g, Rng& rng, int max_size = 20, int max_step = 3);

/// Adds N(0, sigma^2) to every controller parameter and clamps to bounds.
Genotype mutate_controller(const Genotype& g, Rng& rng, double sigma);

/// Ordered, unit-cost tree edit distance between genotype trees (labels are module kinds).
int tree_edit_distance(const Genotype& a, const Genotype& b);

/// Canonical nested-record text form (JSON). Round trip is exact.
std::string to_text(const Genotype& g);
Genotype genotype_from_text(std::string_view text);

std::string_view to_string(ModuleKind k);
std::string_view to_string(Slot s);
std::string_view to_string(ControllerKind k);
ModuleKind module_kind_from_string(std::string_view s);
Slot slot_from_string(std::string_view s);
ControllerKind controller_kind_from_string(std::string_view s);

}  // namespace lamarck
