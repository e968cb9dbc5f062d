#pragma once

// Random network generation for property tests.

#include <cstdint>
#include <random>
#include <string>

#include "kcl/network.hpp"

namespace kcl::testing {

struct FuzzOptions {
  int min_nodes = 3;
  int max_nodes = 10;
  int max_channels = 2;
  int max_depth = 3;
  double relation_probability = 0.8;
  double extra_edge_probability = 0.15;
};

/// A network that passes validation: every relation refers to declared
/// entities other than its own target, and edges respect the layer rules.
JointNetwork random_network(std::mt19937_64& rng, const FuzzOptions& options = {});

/// Power buses on a rows x cols grid with nearest-neighbor lines, plus
/// `comm` communication vertices attached to random buses. Sparse relations.
JointNetwork random_grid_network(std::mt19937_64& rng, int rows, int cols, int comm);

/// Random relation over `ids`.
Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& ids, int depth);

/// Applies one edit that always makes network text invalid.
std::string break_network_text(std::mt19937_64& rng, const std::string& text);

/// Applies a few arbitrary byte-level edits; the result may or may not parse.
std::string scramble_text(std::mt19937_64& rng, const std::string& text);

}  // namespace kcl::testing
