#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "lamarck/genotype.hpp"

namespace lamarck {

namespace {

using nlohmann::json;

json node_to_json(const ModuleNode& n) {
  json j = json::object();
  j["kind"] = to_string(n.kind);
  if (n.kind == ModuleKind::Joint) j["group"] = n.group;
  if (!n.children.empty()) {
    json kids = json::object();
    for (const auto& c : n.children) kids[std::string(to_string(c.slot))] = node_to_json(c);
    j["children"] = std::move(kids);
  }
  return j;
}

ModuleNode node_from_json(const json& j, Slot slot) {
  ModuleNode n;
  n.kind = module_kind_from_string(j.at("kind").get<std::string>());
  n.slot = slot;
  if (n.kind == ModuleKind::Joint) n.group = j.at("group").get<ParamGroupId>();
  if (auto it = j.find("children"); it != j.end()) {
    for (const auto& [key, child] : it->items()) n.children.push_back(node_from_json(child, slot_from_string(key)));
    std::sort(n.children.begin(), n.children.end(), [](const ModuleNode& a, const ModuleNode& b) { return a.slot < b.slot; });
  }
  return n;
}

}  // namespace

std::string to_text(const Genotype& g) {
  json j = json::object();
  j["controller"] = to_string(g.controller);
  j["alternating_phase"] = g.alternating_phase;
  j["next_group"] = g.next_group;
  json params = json::object();
  for (const auto& [id, p] : g.params) {
    // zero-padded keys keep the object's lexical order equal to numeric order
    char key[16];
    std::snprintf(key, sizeof key, "%08d", id);
    params[key] = json::array({p[0], p[1], p[2]});
  }
  j["params"] = std::move(params);
  j["tree"] = node_to_json(g.root);
  return j.dump();
}

Genotype genotype_from_text(std::string_view text) {
  const json j = json::parse(text);
  Genotype g;
  g.controller = controller_kind_from_string(j.at("controller").get<std::string>());
  g.alternating_phase = j.at("alternating_phase").get<bool>();
  g.next_group = j.at("next_group").get<ParamGroupId>();
  for (const auto& [key, value] : j.at("params").items()) {
    g.params[std::stoi(key)] = {value.at(0).get<double>(), value.at(1).get<double>(), value.at(2).get<double>()};
  }
  g.root = node_from_json(j.at("tree"), Slot::Front);
  return g;
}

}  // namespace lamarck
