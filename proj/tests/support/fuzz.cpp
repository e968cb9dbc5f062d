#include "fuzz.hpp"

#include <algorithm>
#include <sstream>

namespace kcl::testing {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

constexpr EntityKind kCommKinds[] = {EntityKind::kSubstationEntity, EntityKind::kSonetRingEntity,
                                     EntityKind::kDwdmRingEntity, EntityKind::kRtu,
                                     EntityKind::kPmuDevice};

Entity power_node(std::mt19937_64& rng) {
  Entity e;
  if (chance(rng, 0.1)) {
    e.kind = EntityKind::kBattery;
    return e;
  }
  e.is_generator = chance(rng, 0.3);
  e.has_pmu = chance(rng, 0.3);
  if (chance(rng, 0.3)) e.substation = uniform(rng, 1, 5);
  return e;
}

Entity comm_node(std::mt19937_64& rng) {
  Entity e;
  e.kind = kCommKinds[uniform(rng, 0, 4)];
  if (chance(rng, 0.3)) e.substation = uniform(rng, 1, 5);
  return e;
}

void add_relations(std::mt19937_64& rng, JointNetwork& net, double probability,
                   int max_depth) {
  const std::vector<std::string> ids = net.all_ids();
  if (ids.size() < 2) return;
  for (const std::string& id : ids) {
    if (!chance(rng, probability)) continue;
    std::vector<std::string> others;
    for (const std::string& o : ids) {
      if (o != id) others.push_back(o);
    }
    net.set_idr(id, random_expr(rng, others, uniform(rng, 0, max_depth)));
  }
}

}  // namespace

Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& ids, int depth) {
  if (depth <= 0 || chance(rng, 0.3)) return Expr::ref(pick(rng, ids));
  std::vector<Expr> children;
  const int n = uniform(rng, 2, 3);
  for (int i = 0; i < n; ++i) children.push_back(random_expr(rng, ids, depth - 1));
  switch (uniform(rng, 0, 2)) {
    case 0: return Expr::min_and(std::move(children));
    case 1: return Expr::max_or(std::move(children));
    default: return Expr::new_xor(std::move(children));
  }
}

JointNetwork random_network(std::mt19937_64& rng, const FuzzOptions& options) {
  JointNetwork net;
  const int nodes = uniform(rng, options.min_nodes, options.max_nodes);
  const int power = uniform(rng, 1, std::max(1, nodes - 1));
  std::vector<std::string> p_ids;
  std::vector<std::string> c_ids;
  for (int i = 1; i <= power; ++i) {
    p_ids.push_back("P" + std::to_string(i));
    net.add_entity(p_ids.back(), power_node(rng));
  }
  for (int i = 1; i <= nodes - power; ++i) {
    c_ids.push_back("C" + std::to_string(i));
    net.add_entity(c_ids.back(), comm_node(rng));
  }

  std::vector<Edge> edges;
  // Random spanning tree over the power vertices, then a few extra lines.
  for (std::size_t i = 1; i < p_ids.size(); ++i) {
    const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(i) - 1));
    edges.push_back({EdgeClass::kPP, p_ids[j], p_ids[i], std::nullopt});
  }
  for (std::size_t i = 0; i < p_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < p_ids.size(); ++j) {
      if (chance(rng, options.extra_edge_probability)) {
        edges.push_back({EdgeClass::kPP, p_ids[i], p_ids[j], std::nullopt});
      }
    }
  }
  for (const std::string& c : c_ids) {
    const int links = uniform(rng, 0, 2);
    for (int l = 0; l < links; ++l) {
      edges.push_back({EdgeClass::kPC, pick(rng, p_ids), c, std::nullopt});
    }
  }
  for (std::size_t i = 0; i < c_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < c_ids.size(); ++j) {
      if (chance(rng, 0.3)) edges.push_back({EdgeClass::kCC, c_ids[i], c_ids[j], std::nullopt});
    }
  }

  // Channels ride on distinct edges.
  const int channels = std::min(uniform(rng, 0, options.max_channels),
                                static_cast<int>(edges.size()));
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < channels; ++i) {
    Edge& e = edges[order[static_cast<std::size_t>(i)]];
    const std::string id = "L" + std::to_string(i + 1);
    Entity ch;
    ch.kind = e.cls == EdgeClass::kPP
                  ? (chance(rng, 0.7) ? EntityKind::kTransmissionLine : EntityKind::kTransformer)
                  : EntityKind::kPowerSupplyLine;
    net.add_entity(id, ch);
    e.bound_entity = id;
  }
  for (Edge& e : edges) net.add_edge(std::move(e));

  add_relations(rng, net, options.relation_probability, options.max_depth);
  return net;
}

JointNetwork random_grid_network(std::mt19937_64& rng, int rows, int cols, int comm) {
  JointNetwork net;
  const auto bus = [](int r, int c) { return "B" + std::to_string(r) + "_" + std::to_string(c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) net.add_entity(bus(r, c), power_node(rng));
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) net.add_edge({EdgeClass::kPP, bus(r, c), bus(r, c + 1), std::nullopt});
      if (r + 1 < rows) net.add_edge({EdgeClass::kPP, bus(r, c), bus(r + 1, c), std::nullopt});
    }
  }
  std::vector<std::string> c_ids;
  for (int i = 1; i <= comm; ++i) {
    c_ids.push_back("C" + std::to_string(i));
    net.add_entity(c_ids.back(), comm_node(rng));
    net.add_edge({EdgeClass::kPC, bus(uniform(rng, 0, rows - 1), uniform(rng, 0, cols - 1)),
                  c_ids.back(), std::nullopt});
    if (i > 1) net.add_edge({EdgeClass::kCC, c_ids[c_ids.size() - 2], c_ids.back(), std::nullopt});
  }
  add_relations(rng, net, 0.6, 2);
  return net;
}

std::string break_network_text(std::mt19937_64& rng, const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const auto line_no = [&](const std::string& needle) -> std::optional<std::size_t> {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].find(needle) != std::string::npos) hits.push_back(i);
    }
    if (hits.empty()) return std::nullopt;
    return pick(rng, hits);
  };

  switch (uniform(rng, 0, 5)) {
    case 0:  // stray character at the start of a line
      lines.insert(lines.begin() + uniform(rng, 0, static_cast<int>(lines.size())), "@");
      break;
    case 1:
      if (auto i = line_no("<-")) {
        lines[*i] += " . (";
      } else {
        lines.push_back("[idrs]");
        lines.push_back("x <- (a");
      }
      break;
    case 2:
      if (auto i = line_no("<-")) {
        lines.push_back(lines[*i]);  // duplicate relation target
      } else {
        lines.push_back("[idrs]");
        lines.push_back("Q9 <- Q8");
      }
      break;
    case 3:
      lines.push_back("[idrs]");
      lines.push_back("ZZ_undeclared <- P1");
      break;
    case 4:
      lines.push_back("[entities]");
      lines.push_back("X1 warp_core");
      break;
    default:
      lines.push_back("[edges");
      break;
  }
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

std::string scramble_text(std::mt19937_64& rng, const std::string& text) {
  static constexpr char kAlphabet[] = "ab PC1_.+^()<-=,[]\n/#$\x01\xff";
  std::string out = text;
  const int edits = uniform(rng, 1, 6);
  for (int e = 0; e < edits; ++e) {
    const int pos = uniform(rng, 0, static_cast<int>(out.size()));
    const char c = kAlphabet[uniform(rng, 0, static_cast<int>(sizeof(kAlphabet)) - 2)];
    switch (uniform(rng, 0, 2)) {
      case 0: out.insert(out.begin() + pos, c); break;
      case 1:
        if (pos < static_cast<int>(out.size())) out.erase(out.begin() + pos);
        break;
      default:
        if (pos < static_cast<int>(out.size())) out[static_cast<std::size_t>(pos)] = c;
        break;
    }
  }
  return out;
}

}  // namespace kcl::testing
