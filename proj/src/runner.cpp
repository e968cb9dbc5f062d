#include "kcl/runner.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "kcl/dsl.hpp"

namespace kcl {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since)
      .count();
}

TimelineRecord record_of(const EngineState& st, std::int64_t t_ms) {
  TimelineRecord r;
  r.t_ms = t_ms;
  r.sets = st.reported_sets();
  r.set_count = r.sets.size();
  if (!st.current_list.best_sets.empty()) r.damage = st.current_list.damage;
  r.candidates = st.candidates_evaluated;
  r.note = st.list_note;
  return r;
}

}  // namespace

std::vector<TimelineRecord> run_scenario(const Scenario& sc, const JointNetwork& net,
                                         const RunOptions& options) {
  const EngineConfig config{
      ContingencyQuery{sc.k, std::nullopt, sc.mode, sc.objective,
                       CandidateScope::kNodesOnly},
      sc.solver};
  for (const FailureEvent& ev : sc.events) {
    for (const std::string& id : ev.entity_ids) {
      if (!net.contains(id)) throw RunnerError("scenario fails unknown entity " + id);
    }
  }

  auto start = Clock::now();
  EngineState st = initial_engine_state(net, config);
  std::int64_t settled_ns = elapsed_ns(start);

  std::optional<CascadeInProgress> cascade;
  // Snapshot of the in-flight cascade, reused while its failed set is unchanged.
  std::optional<std::pair<IdSet, EngineState>> snapshot;
  std::int64_t snapshot_ns = 0;

  std::vector<TimelineRecord> records;
  std::size_t next_event = 0;
  std::int64_t t = sc.query_begin;
  if (!sc.events.empty()) t = std::min(t, sc.events.front().time_ms);

  for (; t <= sc.query_end; ++t) {
    if (cascade && !cascade->advance()) {
      start = Clock::now();
      st = settle_into(st, cascade->states(), t, config);
      settled_ns = elapsed_ns(start);
      cascade.reset();
      snapshot.reset();
    }

    if (t >= sc.query_begin) {
      TimelineRecord r;
      if (cascade) {
        const IdSet failed = cascade->failed();
        if (!snapshot || snapshot->first != failed) {
          start = Clock::now();
          snapshot.emplace(failed, settle_into(st, cascade->states(), t, config));
          snapshot_ns = elapsed_ns(start);
        }
        r = record_of(snapshot->second, t);
        r.wall_ns = snapshot_ns;
      } else {
        st = handle_event(st, std::nullopt, config).state;
        r = record_of(st, t);
        r.wall_ns = settled_ns;
      }
      if (!options.measure_time) r.wall_ns = 0;
      records.push_back(std::move(r));
    }

    IdSet live;
    for (; next_event < sc.events.size() && sc.events[next_event].time_ms == t;
         ++next_event) {
      for (const std::string& id : sc.events[next_event].entity_ids) {
        if (st.network.contains(id)) live.insert(id);
      }
    }
    if (!live.empty()) {
      if (!cascade) cascade.emplace(st.network, st.states, config.query.mode);
      cascade->fail(live);
      snapshot.reset();
    }
  }
  return records;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunnerError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<TimelineRecord> run_scenario(const Scenario& sc,
                                         const std::filesystem::path& base_dir,
                                         const RunOptions& options) {
  if (sc.network_path.empty()) throw RunnerError("scenario names no network");
  std::filesystem::path path(sc.network_path);
  if (path.is_relative()) path = base_dir / path;
  ParseResult<JointNetwork> parsed = parse_network(read_file(path));
  if (!parsed.ok()) {
    std::string message = "invalid network " + path.string();
    for (const ParseDiagnostic& d : parsed.diagnostics) {
      message += "\n  " + format_diagnostic(d);
    }
    throw RunnerError(message);
  }
  return run_scenario(sc, *parsed.value, options);
}

namespace {

std::string join_members(const IdSet& set) {
  std::string out;
  for (const std::string& id : set) {
    if (!out.empty()) out += ';';
    out += id;
  }
  return out;
}

nlohmann::ordered_json damage_json(const DamageReport& d) {
  return {{"failed_count", d.failed_count},
          {"state_deficit", d.state_deficit},
          {"rounds_to_steady", d.rounds_to_steady}};
}

DamageReport damage_from_json(const nlohmann::json& j) {
  return {j.at("failed_count").get<int>(), j.at("state_deficit").get<int>(),
          j.at("rounds_to_steady").get<int>()};
}

}  // namespace

std::string emit_report(const std::vector<TimelineRecord>& records,
                        ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "t_ms,set_index,members,failed_count,state_deficit,candidates,wall_ns\n";
    for (const TimelineRecord& r : records) {
      const auto row = [&](const std::string& index, const std::string& members) {
        out << r.t_ms << ',' << index << ',' << members << ',' << r.damage.failed_count
            << ',' << r.damage.state_deficit << ',' << r.candidates << ',' << r.wall_ns
            << '\n';
      };
      if (r.sets.empty()) row("", "");
      for (std::size_t i = 0; i < r.sets.size(); ++i) {
        row(std::to_string(i), join_members(r.sets[i]));
      }
    }
    return out.str();
  }

  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const TimelineRecord& r : records) {
    nlohmann::ordered_json sets = nlohmann::ordered_json::array();
    for (const IdSet& s : r.sets) sets.push_back(std::vector<std::string>(s.begin(), s.end()));
    out.push_back({{"t_ms", r.t_ms},
                   {"sets", std::move(sets)},
                   {"set_count", r.set_count},
                   {"damage", damage_json(r.damage)},
                   {"candidates", r.candidates},
                   {"wall_ns", r.wall_ns},
                   {"note", r.note}});
  }
  return out.dump(2) + "\n";
}

std::vector<TimelineRecord> parse_report_json(const std::string& text) {
  std::vector<TimelineRecord> records;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const nlohmann::json& item : j) {
      TimelineRecord r;
      r.t_ms = item.at("t_ms").get<std::int64_t>();
      for (const nlohmann::json& set : item.at("sets")) {
        const auto ids = set.get<std::vector<std::string>>();
        r.sets.emplace_back(ids.begin(), ids.end());
      }
      r.set_count = item.at("set_count").get<std::size_t>();
      r.damage = damage_from_json(item.at("damage"));
      r.candidates = item.at("candidates").get<std::size_t>();
      r.wall_ns = item.at("wall_ns").get<std::int64_t>();
      r.note = item.value("note", "");
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw RunnerError(std::string("malformed report: ") + e.what());
  }
  return records;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

BenchRecord bench_solvers(const JointNetwork& net, int k, Mode mode,
                          Objective objective, std::uint64_t exact_cap) {
  BenchRecord rec;
  rec.k = k;
  rec.mode = mode;
  const ContingencyQuery q{k, std::nullopt, mode, objective, CandidateScope::kNodesOnly};
  rec.pool_size = eligible_candidates(net, q.scope).size();

  const auto run = [&](SolverRun& out, auto&& solver) {
    const auto start = Clock::now();
    try {
      SolveResult r = solver();
      out.list = std::move(r.list);
      out.candidates = r.candidates_evaluated;
    } catch (const SolverError& e) {
      out.error = e.what();
    }
    out.wall_ns = elapsed_ns(start);
  };

  if (k >= 1 && choose(rec.pool_size, static_cast<std::uint64_t>(k)) > exact_cap) {
    rec.exact.skipped = true;
  } else {
    run(rec.exact, [&] { return exact_k_list(net, q); });
  }
  run(rec.heuristic, [&] { return heuristic_list(net, q); });

  if (rec.exact.list && rec.heuristic.list) {
    const DamageReport& e = rec.exact.list->damage;
    const DamageReport& h = rec.heuristic.list->damage;
    rec.gap = DamageReport{e.failed_count - h.failed_count,
                           e.state_deficit - h.state_deficit, 0};
  }
  return rec;
}

std::string bench_to_json(const BenchRecord& record) {
  const auto solver_json = [](const SolverRun& run) {
    nlohmann::ordered_json j;
    j["skipped"] = run.skipped;
    j["candidates"] = run.candidates;
    j["wall_ns"] = run.wall_ns;
    if (!run.error.empty()) j["error"] = run.error;
    if (run.list) j["list"] = nlohmann::ordered_json::parse(to_json(*run.list));
    return j;
  };
  nlohmann::ordered_json j;
  j["k"] = record.k;
  j["mode"] = std::string(to_string(record.mode));
  j["pool_size"] = record.pool_size;
  j["exact"] = solver_json(record.exact);
  j["heuristic"] = solver_json(record.heuristic);
  if (record.gap) {
    j["gap"] = {{"failed_count", record.gap->failed_count},
                {"state_deficit", record.gap->state_deficit}};
  }
  return j.dump(2) + "\n";
}

}  // namespace kcl
