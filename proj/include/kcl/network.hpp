#pragma once

/// @file network.hpp
/// Joint power/communication network model, validation, and the vertex-level
/// graph abstraction the contingency heuristic colors and searches.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kcl/algebra.hpp"

namespace kcl {

enum class EntityKind : std::uint8_t {
  kBus,
  kTransmissionLine,
  kTransformer,
  kBattery,
  kSubstationEntity,
  kSonetRingEntity,
  kDwdmRingEntity,
  kPowerSupplyLine,
  kRtu,
  kPmuDevice,
};

enum class Layer : std::uint8_t { kPower, kCommunication, kCrossLayer };

Layer layer_of(EntityKind kind) noexcept;

/// Lines, transformers and power supply lines are channels: they may be bound
/// to an edge but never act as graph vertices.
bool is_edge_kind(EntityKind kind) noexcept;

/// File spelling ("bus", "line", "pmu_device", ...).
std::string_view to_string(EntityKind kind) noexcept;
std::optional<EntityKind> entity_kind_from_string(std::string_view text) noexcept;

struct Entity {
  EntityKind kind = EntityKind::kBus;
  bool is_generator = false;  // buses only
  bool has_pmu = false;       // buses only
  std::optional<int> substation;

  friend bool operator==(const Entity&, const Entity&) = default;
};

enum class EdgeClass : std::uint8_t { kPP, kPC, kCC };

std::string_view to_string(EdgeClass cls) noexcept;
std::optional<EdgeClass> edge_class_from_string(std::string_view text) noexcept;

struct Edge {
  EdgeClass cls = EdgeClass::kPP;
  std::string a;
  std::string b;
  std::optional<std::string> bound_entity;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entities, their dependency relations, and the three edge classes. Entity
/// and relation maps are ordered by id and edges are kept sorted, so two
/// networks built from the same declarations in any order compare equal.
class JointNetwork {
 public:
  using EntityMap = std::map<std::string, Entity, std::less<>>;
  using IdrMap = std::map<std::string, Expr, std::less<>>;

  /// Throws NetworkError on a duplicate id.
  void add_entity(std::string id, Entity entity);
  void add_edge(Edge edge);
  /// Replaces any existing relation for the entity.
  void set_idr(std::string id, Expr expr);

  /// Removes the entities, their relations, and every edge that touches one
  /// of them as an endpoint or bound entity. Relations of survivors are left
  /// as they are.
  void erase(const IdSet& ids);

  const EntityMap& entities() const noexcept { return entities_; }
  const IdrMap& idrs() const noexcept { return idrs_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::size_t size() const noexcept { return entities_.size(); }
  bool contains(std::string_view id) const { return entities_.contains(id); }
  const Entity* find(std::string_view id) const;
  const Expr* idr(std::string_view id) const;

  /// Non-channel entities, sorted.
  std::vector<std::string> node_ids() const;
  /// Channel entities, sorted.
  std::vector<std::string> channel_ids() const;
  std::vector<std::string> all_ids() const;

  friend bool operator==(const JointNetwork&, const JointNetwork&) = default;

 private:
  EntityMap entities_;
  IdrMap idrs_;
  std::vector<Edge> edges_;
};

struct ValidationIssue {
  enum class Severity : std::uint8_t { kError, kWarning };

  Severity severity = Severity::kError;
  std::string message;
  std::vector<std::string> subjects;  // entity ids involved
  std::optional<std::size_t> edge_index;
};

std::vector<ValidationIssue> validate(const JointNetwork& net);
bool has_errors(const std::vector<ValidationIssue>& issues) noexcept;

enum class Color : std::uint8_t {
  kWhite,
  kYellow,
  kBlue,
  kGreen,
  kPink,
  kRed,
  kGrey,
};

std::string_view to_string(Color color) noexcept;

/// Vertex graph over node entities: power vertices (buses, batteries) and
/// communication vertices (C-layer entities, RTUs, PMU devices), with one
/// adjacency per edge class. Each vertex has a base color from
/// classification and an optional search overlay (pink, red, grey); its
/// color is the overlay when present.
class GraphAbstraction {
 public:
  using Adjacency = std::map<std::string, std::vector<std::string>, std::less<>>;

  const IdSet& power_vertices() const noexcept { return vp_; }
  const IdSet& comm_vertices() const noexcept { return vc_; }
  bool has_vertex(std::string_view id) const {
    return vp_.contains(id) || vc_.contains(id);
  }

  /// Neighbor lists keep one entry per edge, so parallel edges count twice.
  const std::vector<std::string>& pp_neighbors(std::string_view id) const;
  const std::vector<std::string>& pc_neighbors(std::string_view id) const;
  const std::vector<std::string>& cc_neighbors(std::string_view id) const;
  std::size_t pp_degree(std::string_view id) const {
    return pp_neighbors(id).size();
  }
  std::size_t pp_edge_count() const;

  Color color(std::string_view id) const;
  Color base_color(std::string_view id) const;
  void set_base_color(std::string_view id, Color color);
  void set_overlay(std::string_view id, Color color);
  void clear_overlay(std::string_view id);
  /// Drops every overlay of the given color.
  void clear_overlays(Color color);
  IdSet vertices_with_color(Color color) const;

  /// Copy without the given vertices and every edge touching them.
  GraphAbstraction without(const IdSet& ids) const;

  friend bool operator==(const GraphAbstraction&,
                         const GraphAbstraction&) = default;

 private:
  friend GraphAbstraction build_graph_abstraction(const JointNetwork& net);

  IdSet vp_;
  IdSet vc_;
  Adjacency pp_;
  Adjacency pc_;
  Adjacency cc_;
  std::map<std::string, Color, std::less<>> base_;
  std::map<std::string, Color, std::less<>> overlay_;
};

/// Throws NetworkError when the network has validation errors.
GraphAbstraction build_graph_abstraction(const JointNetwork& net);

/// Generator buses yellow, PMU buses blue, both green.
GraphAbstraction classify_base_colors(GraphAbstraction g, const JointNetwork& net);

/// Power vertices with exactly one power-power edge.
IdSet pendant_vertices(const GraphAbstraction& g);

}  // namespace kcl
