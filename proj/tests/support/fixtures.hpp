#pragma once

#include <filesystem>
#include <string>

#include "kcl/dsl.hpp"
#include "kcl/runner.hpp"

namespace kcl::testing {

inline std::filesystem::path data_dir() { return KCL_DATA_DIR; }

/// Parses a bundled network; aborts the test binary on diagnostics.
inline JointNetwork load_fixture(const std::string& name) {
  ParseResult<JointNetwork> r = parse_network(read_file(data_dir() / name));
  if (!r.ok()) throw std::runtime_error("fixture " + name + " does not parse");
  return std::move(*r.value);
}

inline JointNetwork net_a() { return load_fixture("net_a.grid"); }

/// NET-A twice, the second copy with primed ids (P1 -> P1x).
inline JointNetwork net_a_twice() {
  std::string text = read_file(data_dir() / "net_a.grid");
  std::string copy;
  for (std::size_t i = 0; i < text.size(); ++i) {
    copy += text[i];
    const bool id_end = (text[i] >= '0' && text[i] <= '9') &&
                        (i > 0 && (text[i - 1] == 'P' || text[i - 1] == 'C'));
    if (id_end) copy += 'x';
  }
  ParseResult<JointNetwork> a = parse_network(text);
  ParseResult<JointNetwork> b = parse_network(copy);
  if (!a.ok() || !b.ok()) throw std::runtime_error("NET-A copy does not parse");
  JointNetwork net = *a.value;
  for (const auto& [id, e] : b.value->entities()) net.add_entity(id, e);
  for (const Edge& e : b.value->edges()) net.add_edge(e);
  for (const auto& [id, x] : b.value->idrs()) net.set_idr(id, x);
  return net;
}

}  // namespace kcl::testing
