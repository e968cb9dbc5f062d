// kcl: command-line front end for the contingency library.
//
// Exit codes: 0 success, 1 diagnostics or invalid input, 2 infeasible query.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kcl/cascade.hpp"
#include "kcl/dsl.hpp"
#include "kcl/engine.hpp"
#include "kcl/runner.hpp"
#include "kcl/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitInfeasible = 2;

// Raised after diagnostics have been printed.
struct Diagnosed {};

void print_diagnostics(const std::string& path,
                       const std::vector<kcl::ParseDiagnostic>& diagnostics) {
  for (const kcl::ParseDiagnostic& d : diagnostics) {
    std::cerr << path << ":" << kcl::format_diagnostic(d) << "\n";
  }
}

kcl::JointNetwork load_network(const std::string& path) {
  kcl::ParseResult<kcl::JointNetwork> parsed = kcl::parse_network(kcl::read_file(path));
  print_diagnostics(path, parsed.diagnostics);
  if (!parsed.ok()) throw Diagnosed{};
  return std::move(*parsed.value);
}

kcl::IdSet split_ids(const std::string& text) {
  kcl::IdSet ids;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) ids.insert(id);
  }
  return ids;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kcl::RunnerError("cannot write " + path);
  out << text;
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contingency analysis for interdependent power and communication networks"};
  app.require_subcommand(1);

  std::string net_path;
  std::string scenario_path;
  std::string fail_ids;
  std::string out_file;
  std::string out_format = "csv";
  std::string trace_format = "csv";
  std::string mode_name = "miim";
  std::string objective_name = "failed";
  std::string solver_name = "heuristic";
  int k = 1;
  int s = 0;
  bool trace = false;
  bool include_edges = false;
  bool timing = false;
  std::uint64_t cap = 5'000'000;

  const auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode_name, "Evaluation mode")
        ->check(CLI::IsMember({"miim", "iim"}, CLI::ignore_case));
  };
  const auto add_objective = [&](CLI::App* cmd) {
    cmd->add_option("--objective", objective_name, "Damage objective")
        ->check(CLI::IsMember({"failed", "deficit"}, CLI::ignore_case));
  };

  CLI::App* validate = app.add_subcommand("validate", "Parse and check a network file");
  validate->add_option("network", net_path)->required();

  CLI::App* cascade = app.add_subcommand("cascade", "Simulate a failure to steady state");
  cascade->add_option("network", net_path)->required();
  cascade->add_option("--fail", fail_ids, "Comma-separated entity ids")->required();
  add_mode(cascade);
  cascade->add_flag("--trace", trace, "Print every round");
  cascade->add_option("--trace-format", trace_format)
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* list = app.add_subcommand("list", "Compute the K-contingency list");
  list->add_option("network", net_path)->required();
  list->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  list->add_option("--solver", solver_name)
      ->check(CLI::IsMember({"exact", "heuristic"}, CLI::ignore_case));
  add_mode(list);
  add_objective(list);
  list->add_flag("--include-edge-entities", include_edges,
                 "Also consider lines, transformers and supply lines");

  CLI::App* decide = app.add_subcommand("decide", "Does some K-set fail at least S entities?");
  decide->add_option("network", net_path)->required();
  decide->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  decide->add_option("--s", s)->required()->check(CLI::NonNegativeNumber);
  add_mode(decide);

  CLI::App* run = app.add_subcommand("run", "Replay a scenario into a timeline report");
  run->add_option("scenario", scenario_path)->required();
  run->add_option("--out", out_format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out-file", out_file);
  run->add_flag("--timing", timing, "Record wall time per row");

  CLI::App* bench = app.add_subcommand("bench", "Compare exact and heuristic solvers");
  bench->add_option("network", net_path)->required();
  bench->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  bench->add_option("--cap", cap, "Largest C(n,k) the exact solver attempts");
  add_mode(bench);
  add_objective(bench);

  CLI11_PARSE(app, argc, argv);
  const kcl::Mode mode = *kcl::mode_from_string(mode_name);
  const kcl::Objective objective = *kcl::objective_from_string(objective_name);
  const kcl::SolverKind solver = *kcl::solver_from_string(solver_name);

  try {
    if (validate->parsed()) {
      const kcl::JointNetwork net = load_network(net_path);
      std::cout << net_path << ": ok, " << net.size() << " entities, "
                << net.edges().size() << " edges\n";
      return kExitOk;
    }

    if (cascade->parsed()) {
      const kcl::JointNetwork net = load_network(net_path);
      const kcl::CascadeTrace t = kcl::run_cascade(net, split_ids(fail_ids), mode);
      if (trace) {
        std::cout << (trace_format == "json" ? kcl::trace_to_json(t) : kcl::trace_to_csv(t));
      }
      const kcl::DamageReport d = kcl::damage_of(t);
      std::cout << "failed_count=" << d.failed_count << " state_deficit=" << d.state_deficit
                << " rounds_to_steady=" << d.rounds_to_steady << "\n";
      return kExitOk;
    }

    if (list->parsed()) {
      const kcl::JointNetwork net = load_network(net_path);
      const kcl::ContingencyQuery q{k, std::nullopt, mode, objective,
                                    include_edges ? kcl::CandidateScope::kIncludeEdgeEntities
                                                  : kcl::CandidateScope::kNodesOnly};
      if (include_edges && solver == kcl::SolverKind::kHeuristic) {
        std::cerr << "note: the heuristic searches node entities only\n";
      }
      const kcl::SolveResult r = kcl::solve(net, kcl::EngineConfig{q, solver});
      std::cout << kcl::to_json(r.list) << "\ncandidates_evaluated=" << r.candidates_evaluated
                << "\n";
      return kExitOk;
    }

    if (decide->parsed()) {
      const kcl::JointNetwork net = load_network(net_path);
      const kcl::ContingencyQuery q{k, s, mode, kcl::Objective::kFailed,
                                    kcl::CandidateScope::kNodesOnly};
      std::cout << (kcl::decide_k_s(net, q) ? "yes" : "no") << "\n";
      return kExitOk;
    }

    if (run->parsed()) {
      kcl::ParseResult<kcl::Scenario> parsed =
          kcl::parse_scenario(kcl::read_file(scenario_path));
      print_diagnostics(scenario_path, parsed.diagnostics);
      if (!parsed.ok()) return kExitDiagnostics;
      const std::filesystem::path base =
          std::filesystem::path(scenario_path).parent_path();
      const auto records = kcl::run_scenario(*parsed.value, base, kcl::RunOptions{timing});
      write_output(kcl::emit_report(records, out_format == "json" ? kcl::ReportFormat::kJson
                                                                  : kcl::ReportFormat::kCsv),
                   out_file);
      return kExitOk;
    }

    if (bench->parsed()) {
      const kcl::JointNetwork net = load_network(net_path);
      std::cout << kcl::bench_to_json(kcl::bench_solvers(net, k, mode, objective, cap));
      return kExitOk;
    }
  } catch (const Diagnosed&) {
    return kExitDiagnostics;
  } catch (const kcl::InfeasibleQuery& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}
