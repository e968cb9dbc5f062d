#include "kcl/network.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace kcl {

namespace {

struct KindName {
  EntityKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 10> kKindNames{{
    {EntityKind::kBus, "bus"},
    {EntityKind::kTransmissionLine, "line"},
    {EntityKind::kTransformer, "transformer"},
    {EntityKind::kBattery, "battery"},
    {EntityKind::kSubstationEntity, "substation_entity"},
    {EntityKind::kSonetRingEntity, "sonet_ring_entity"},
    {EntityKind::kDwdmRingEntity, "dwdm_ring_entity"},
    {EntityKind::kPowerSupplyLine, "power_supply_line"},
    {EntityKind::kRtu, "rtu"},
    {EntityKind::kPmuDevice, "pmu_device"},
}};

const std::vector<std::string> kNoNeighbors;

}  // namespace

Layer layer_of(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::kBus:
    case EntityKind::kTransmissionLine:
    case EntityKind::kTransformer:
    case EntityKind::kBattery:
      return Layer::kPower;
    case EntityKind::kSubstationEntity:
    case EntityKind::kSonetRingEntity:
    case EntityKind::kDwdmRingEntity:
      return Layer::kCommunication;
    case EntityKind::kPowerSupplyLine:
    case EntityKind::kRtu:
    case EntityKind::kPmuDevice:
      return Layer::kCrossLayer;
  }
  return Layer::kPower;
}

bool is_edge_kind(EntityKind kind) noexcept {
  return kind == EntityKind::kTransmissionLine ||
         kind == EntityKind::kTransformer ||
         kind == EntityKind::kPowerSupplyLine;
}

std::string_view to_string(EntityKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view text) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(EdgeClass cls) noexcept {
  switch (cls) {
    case EdgeClass::kPP: return "pp";
    case EdgeClass::kPC: return "pc";
    case EdgeClass::kCC: return "cc";
  }
  return "?";
}

std::optional<EdgeClass> edge_class_from_string(std::string_view text) noexcept {
  if (text == "pp") return EdgeClass::kPP;
  if (text == "pc") return EdgeClass::kPC;
  if (text == "cc") return EdgeClass::kCC;
  return std::nullopt;
}

void JointNetwork::add_entity(std::string id, Entity entity) {
  if (entities_.contains(id)) throw NetworkError("duplicate entity " + id);
  entities_.emplace(std::move(id), entity);
}

void JointNetwork::add_edge(Edge edge) {
  auto pos = std::upper_bound(edges_.begin(), edges_.end(), edge);
  edges_.insert(pos, std::move(edge));
}

void JointNetwork::set_idr(std::string id, Expr expr) {
  idrs_.insert_or_assign(std::move(id), std::move(expr));
}

void JointNetwork::erase(const IdSet& ids) {
  for (const std::string& id : ids) {
    entities_.erase(id);
    idrs_.erase(id);
  }
  std::erase_if(edges_, [&ids](const Edge& e) {
    return ids.contains(e.a) || ids.contains(e.b) ||
           (e.bound_entity && ids.contains(*e.bound_entity));
  });
}

const Entity* JointNetwork::find(std::string_view id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const Expr* JointNetwork::idr(std::string_view id) const {
  auto it = idrs_.find(id);
  return it == idrs_.end() ? nullptr : &it->second;
}

std::vector<std::string> JointNetwork::node_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entities_) {
    if (!is_edge_kind(e.kind)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> JointNetwork::channel_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entities_) {
    if (is_edge_kind(e.kind)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> JointNetwork::all_ids() const {
  std::vector<std::string> out;
  out.reserve(entities_.size());
  for (const auto& [id, e] : entities_) out.push_back(id);
  return out;
}

namespace {

ValidationIssue error(std::string message, std::vector<std::string> subjects,
                      std::optional<std::size_t> edge = std::nullopt) {
  return {ValidationIssue::Severity::kError, std::move(message),
          std::move(subjects), edge};
}

ValidationIssue warning(std::string message, std::vector<std::string> subjects) {
  return {ValidationIssue::Severity::kWarning, std::move(message),
          std::move(subjects), std::nullopt};
}

bool is_comm_side(Layer layer) {
  return layer == Layer::kCommunication || layer == Layer::kCrossLayer;
}

bool has_empty_connective(const Expr& expr) {
  if (expr.is_ref()) return false;
  if (expr.children.empty()) return true;
  return std::any_of(expr.children.begin(), expr.children.end(),
                     has_empty_connective);
}

void validate_edge(const JointNetwork& net, const Edge& edge, std::size_t index,
                   std::vector<ValidationIssue>& issues) {
  const Entity* a = net.find(edge.a);
  const Entity* b = net.find(edge.b);
  const std::string label = std::string(to_string(edge.cls)) + " " + edge.a +
                            " " + edge.b;
  if (!a) issues.push_back(error("undeclared entity " + edge.a, {edge.a}, index));
  if (!b) issues.push_back(error("undeclared entity " + edge.b, {edge.b}, index));
  if (edge.a == edge.b) {
    issues.push_back(error("edge " + label + " joins an entity to itself",
                           {edge.a}, index));
  }
  if (edge.bound_entity) {
    const Entity* bound = net.find(*edge.bound_entity);
    if (!bound) {
      issues.push_back(error("undeclared entity " + *edge.bound_entity,
                             {*edge.bound_entity}, index));
    } else if (!is_edge_kind(bound->kind)) {
      issues.push_back(error("entity " + *edge.bound_entity + " of kind " +
                                 std::string(to_string(bound->kind)) +
                                 " cannot be bound to an edge",
                             {*edge.bound_entity}, index));
    }
  }
  if (!a || !b) return;
  for (const auto& [id, entity] : {std::pair{&edge.a, a}, std::pair{&edge.b, b}}) {
    if (is_edge_kind(entity->kind)) {
      issues.push_back(error("channel entity " + *id +
                                 " cannot be an edge endpoint",
                             {*id}, index));
    }
  }
  const Layer la = layer_of(a->kind);
  const Layer lb = layer_of(b->kind);
  bool ok = true;
  switch (edge.cls) {
    case EdgeClass::kPP:
      ok = la == Layer::kPower && lb == Layer::kPower;
      break;
    case EdgeClass::kPC:
      ok = (la == Layer::kPower && is_comm_side(lb)) ||
           (lb == Layer::kPower && is_comm_side(la));
      break;
    case EdgeClass::kCC:
      ok = is_comm_side(la) && is_comm_side(lb);
      break;
  }
  if (!ok) {
    issues.push_back(error("layer violation on edge " + label, {edge.a, edge.b},
                           index));
  }
}

}  // namespace

std::vector<ValidationIssue> validate(const JointNetwork& net) {
  std::vector<ValidationIssue> issues;

  for (const auto& [id, e] : net.entities()) {
    if (e.kind != EntityKind::kBus && (e.is_generator || e.has_pmu)) {
      issues.push_back(error("generator/pmu attributes apply to buses only, not " +
                                 id,
                             {id}));
    }
  }

  std::map<std::string, std::size_t, std::less<>> bound_uses;
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const Edge& edge = net.edges()[i];
    validate_edge(net, edge, i, issues);
    if (edge.bound_entity) ++bound_uses[*edge.bound_entity];
  }
  for (const auto& [id, uses] : bound_uses) {
    if (uses > 1) {
      issues.push_back(error("entity " + id + " is bound to " +
                                 std::to_string(uses) + " edges",
                             {id}));
    }
  }
  for (const std::string& id : net.channel_ids()) {
    if (!bound_uses.contains(id)) {
      issues.push_back(warning("channel entity " + id + " is not bound to an edge",
                               {id}));
    }
  }

  for (const auto& [target, expr] : net.idrs()) {
    if (!net.contains(target)) {
      issues.push_back(error("undeclared entity " + target, {target}));
    }
    if (has_empty_connective(expr)) {
      issues.push_back(error("relation of " + target + " has an empty connective",
                             {target}));
    }
    for (const std::string& ref : referenced_ids(expr)) {
      if (ref == target) {
        issues.push_back(warning("relation of " + target + " references itself",
                                 {target}));
      } else if (!net.contains(ref)) {
        issues.push_back(error("undeclared entity " + ref, {ref, target}));
      }
    }
  }
  return issues;
}

bool has_errors(const std::vector<ValidationIssue>& issues) noexcept {
  return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == ValidationIssue::Severity::kError;
  });
}

std::string_view to_string(Color color) noexcept {
  switch (color) {
    case Color::kWhite: return "white";
    case Color::kYellow: return "yellow";
    case Color::kBlue: return "blue";
    case Color::kGreen: return "green";
    case Color::kPink: return "pink";
    case Color::kRed: return "red";
    case Color::kGrey: return "grey";
  }
  return "?";
}

namespace {

const std::vector<std::string>& neighbors_in(const GraphAbstraction::Adjacency& adj,
                                             std::string_view id) {
  auto it = adj.find(id);
  return it == adj.end() ? kNoNeighbors : it->second;
}

void link(GraphAbstraction::Adjacency& adj, const std::string& a,
          const std::string& b) {
  adj[a].push_back(b);
  adj[b].push_back(a);
}

void sort_lists(GraphAbstraction::Adjacency& adj) {
  for (auto& [id, list] : adj) std::sort(list.begin(), list.end());
}

void drop_vertices(GraphAbstraction::Adjacency& adj, const IdSet& ids) {
  for (auto it = adj.begin(); it != adj.end();) {
    if (ids.contains(it->first)) {
      it = adj.erase(it);
      continue;
    }
    std::erase_if(it->second, [&ids](const std::string& n) { return ids.contains(n); });
    it = it->second.empty() ? adj.erase(it) : std::next(it);
  }
}

}  // namespace

const std::vector<std::string>& GraphAbstraction::pp_neighbors(
    std::string_view id) const {
  return neighbors_in(pp_, id);
}

const std::vector<std::string>& GraphAbstraction::pc_neighbors(
    std::string_view id) const {
  return neighbors_in(pc_, id);
}

const std::vector<std::string>& GraphAbstraction::cc_neighbors(
    std::string_view id) const {
  return neighbors_in(cc_, id);
}

std::size_t GraphAbstraction::pp_edge_count() const {
  std::size_t twice = 0;
  for (const auto& [id, list] : pp_) twice += list.size();
  return twice / 2;
}

Color GraphAbstraction::color(std::string_view id) const {
  if (auto it = overlay_.find(id); it != overlay_.end()) return it->second;
  return base_color(id);
}

Color GraphAbstraction::base_color(std::string_view id) const {
  auto it = base_.find(id);
  return it == base_.end() ? Color::kWhite : it->second;
}

void GraphAbstraction::set_base_color(std::string_view id, Color color) {
  if (!has_vertex(id)) {
    throw NetworkError("cannot color unknown vertex " + std::string(id));
  }
  if (color == Color::kWhite) {
    if (auto it = base_.find(id); it != base_.end()) base_.erase(it);
    return;
  }
  base_.insert_or_assign(std::string(id), color);
}

void GraphAbstraction::set_overlay(std::string_view id, Color color) {
  if (!has_vertex(id)) {
    throw NetworkError("cannot color unknown vertex " + std::string(id));
  }
  overlay_.insert_or_assign(std::string(id), color);
}

void GraphAbstraction::clear_overlay(std::string_view id) {
  if (auto it = overlay_.find(id); it != overlay_.end()) overlay_.erase(it);
}

void GraphAbstraction::clear_overlays(Color color) {
  std::erase_if(overlay_, [color](const auto& kv) { return kv.second == color; });
}

IdSet GraphAbstraction::vertices_with_color(Color color) const {
  IdSet out;
  for (const IdSet* set : {&vp_, &vc_}) {
    for (const std::string& v : *set) {
      if (this->color(v) == color) out.insert(v);
    }
  }
  return out;
}

GraphAbstraction GraphAbstraction::without(const IdSet& ids) const {
  GraphAbstraction g = *this;
  for (const std::string& id : ids) {
    g.vp_.erase(id);
    g.vc_.erase(id);
    g.base_.erase(id);
    g.overlay_.erase(id);
  }
  drop_vertices(g.pp_, ids);
  drop_vertices(g.pc_, ids);
  drop_vertices(g.cc_, ids);
  return g;
}

GraphAbstraction build_graph_abstraction(const JointNetwork& net) {
  const auto issues = validate(net);
  if (has_errors(issues)) {
    for (const ValidationIssue& issue : issues) {
      if (issue.severity == ValidationIssue::Severity::kError) {
        throw NetworkError("network failed validation: " + issue.message);
      }
    }
  }
  GraphAbstraction g;
  for (const auto& [id, e] : net.entities()) {
    if (is_edge_kind(e.kind)) continue;
    if (layer_of(e.kind) == Layer::kPower) {
      g.vp_.insert(id);
    } else {
      g.vc_.insert(id);
    }
  }
  for (const Edge& edge : net.edges()) {
    switch (edge.cls) {
      case EdgeClass::kPP: link(g.pp_, edge.a, edge.b); break;
      case EdgeClass::kPC: link(g.pc_, edge.a, edge.b); break;
      case EdgeClass::kCC: link(g.cc_, edge.a, edge.b); break;
    }
  }
  sort_lists(g.pp_);
  sort_lists(g.pc_);
  sort_lists(g.cc_);
  return g;
}

GraphAbstraction classify_base_colors(GraphAbstraction g, const JointNetwork& net) {
  for (const std::string& v : g.power_vertices()) {
    const Entity* e = net.find(v);
    if (!e || e->kind != EntityKind::kBus) continue;
    if (e->is_generator && e->has_pmu) {
      g.set_base_color(v, Color::kGreen);
    } else if (e->is_generator) {
      g.set_base_color(v, Color::kYellow);
    } else if (e->has_pmu) {
      g.set_base_color(v, Color::kBlue);
    }
  }
  return g;
}

IdSet pendant_vertices(const GraphAbstraction& g) {
  IdSet out;
  for (const std::string& v : g.power_vertices()) {
    if (g.pp_degree(v) == 1) out.insert(v);
  }
  return out;
}

}  // namespace kcl
