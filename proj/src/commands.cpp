#include "lagsim/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "lagsim/ensemble.hpp"
#include "lagsim/errors.hpp"
#include "lagsim/output.hpp"

namespace lagsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool wants(const RunConfig& c, const std::string& fmt) {
  for (const std::string& f : c.formats) {
    if (f == fmt) return true;
  }
  return false;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write file: " + path);
  f << content;
}

struct LoadedRun {
  RunConfig config;
  Scenario scenario;
  std::vector<std::uint64_t> seeds;
  fs::path dir;
};

LoadedRun prepare(const std::string& config_path, const CommandOverrides& ov,
                  bool needs_outputs) {
  LoadedRun run;
  run.config = load_config(config_path);
  if (ov.seeds > 0) {
    run.config.seed_count = ov.seeds;
    run.config.seed_list.clear();
  }
  run.scenario = build_scenario(run.config);
  run.seeds = run.config.seeds();
  if (needs_outputs) {
    run.dir = resolve_out_dir(run.config, ov);
    std::error_code ec;
    fs::create_directories(run.dir, ec);
    if (ec) throw IoError("cannot create output directory: " + run.dir.string());
  }
  return run;
}

json manifest_base(const LoadedRun& run, double wall_seconds) {
  json j;
  j["scenario"] = hash_hex(run.scenario.fingerprint());
  j["measure"] = run.scenario.measure.describe();
  j["speed"] = run.scenario.speed.describe();
  j["epsilon"] = run.scenario.trunc.epsilon;
  j["truncation_bias"] = run.scenario.trunc.bias_bound;
  j["seeds"] = run.seeds;
  j["master_seed"] = run.config.master_seed;
  j["wall_seconds"] = wall_seconds;
  return j;
}

class WallClock {
 public:
  double elapsed() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace

std::string resolve_out_dir(const RunConfig& c, const CommandOverrides& ov) {
  if (!ov.out_dir.empty()) return ov.out_dir;
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("LAGSIM_OUT_DIR")) {
    if (*env) return env;
  }
  return "out";
}

int cmd_simulate(const std::string& config_path, const CommandOverrides& ov) {
  WallClock clock;
  LoadedRun run = prepare(config_path, ov, /*needs_outputs=*/true);
  const std::vector<Trajectory> paths = run_ensemble(
      run.scenario, run.seeds, run.config.master_seed, run.config.workers);

  std::vector<std::string> csv_files;
  std::size_t budget_hits = 0;
  for (const Trajectory& t : paths) {
    const std::string stem = "seed" + std::to_string(t.seed);
    if (wants(run.config, "csv")) {
      const fs::path p = run.dir / ("traj_" + stem + ".csv");
      write_trajectory_csv(t, p.string());
      csv_files.push_back(p.filename().string());
    }
    if (wants(run.config, "jsonl")) {
      write_events_jsonl(t, (run.dir / ("events_" + stem + ".jsonl")).string());
    }
    if (t.budget_exceeded) ++budget_hits;
  }

  json manifest = manifest_base(run, clock.elapsed());
  manifest["paths"] = paths.size();
  manifest["budget_exceeded_count"] = budget_hits;
  manifest["log_rejected"] = run.scenario.log_rejected;
  write_text((run.dir / "manifest.json").string(), manifest.dump(2) + "\n");

  if (run.config.emit_plot_script && !csv_files.empty()) {
    write_text((run.dir / "plot.gp").string(), plot_script(csv_files));
  }
  std::cout << "simulate: " << paths.size() << " path(s) -> " << run.dir.string()
            << " (scenario " << hash_hex(run.scenario.fingerprint()) << ")\n";
  return budget_hits == 0 ? exit_ok : exit_partial;
}

int cmd_classify(const std::string& config_path, const CommandOverrides& ov) {
  LoadedRun run = prepare(config_path, ov, /*needs_outputs=*/true);
  MomentFunctionals funcs(run.scenario.measure, run.scenario.model);
  const RegimeReport rep =
      classify(funcs, run.scenario.speed, run.config.boundary_tol);
  const std::uint64_t hash = run.scenario.fingerprint();

  write_text((run.dir / "report.json").string(),
             regime_report_json(rep, hash) + "\n");
  for (const ConditionVerdict& v : rep.evidence) {
    write_text((run.dir / ("evidence_" + v.id + ".csv")).string(),
               condition_evidence_csv(v, hash));
  }

  std::cout << "m = " << format_double(rep.m) << ", V = " << format_double(rep.V)
            << ", vbar = " << format_double(rep.vbar) << "\n";
  if (rep.verdict == Verdict::transient) {
    char line[64];
    std::snprintf(line, sizeof line, "Transient, speed %.3f",
                  rep.transient_speed);
    std::cout << line << "\n";
  } else {
    std::cout << verdict_name(rep.verdict) << "\n";
  }
  for (const ConditionVerdict& v : rep.evidence) {
    std::cout << "  " << v.id << ": "
              << (v.satisfied == Satisfied::yes    ? "yes"
                  : v.satisfied == Satisfied::no   ? "no"
                                                   : "inconclusive")
              << " (trend " << v.trend << ")\n";
  }
  if (!rep.note.empty()) std::cout << "  note: " << rep.note << "\n";
  return rep.verdict == Verdict::boundary_undetermined ? exit_undetermined
                                                       : exit_ok;
}

int cmd_ensemble(const std::string& config_path, const CommandOverrides& ov) {
  WallClock clock;
  LoadedRun run = prepare(config_path, ov, /*needs_outputs=*/true);
  if (run.seeds.size() < 2) {
    throw ConfigError("key 'run.seeds': ensemble needs at least 2 seeds");
  }
  const std::vector<Trajectory> paths = run_ensemble(
      run.scenario, run.seeds, run.config.master_seed, run.config.workers);
  const EnsembleSummary summary =
      summarize_ensemble(run.scenario, paths, run.config.return_level);

  write_text((run.dir / "summary.json").string(),
             ensemble_summary_json(summary) + "\n");

  std::ostringstream table;
  table << "# scenario " << hash_hex(summary.scenario_hash) << "\n";
  table << "seed,slope,martingale_ratio,qv_residual,returns_completed,"
           "budget_exceeded\n";
  for (const PerSeedRow& r : summary.rows) {
    table << r.seed << "," << format_double(r.slope) << ","
          << format_double(r.mart_ratio) << "," << format_double(r.qv_residual)
          << "," << r.returns_completed << "," << (r.budget_exceeded ? 1 : 0)
          << "\n";
  }
  write_text((run.dir / "per_seed.csv").string(), table.str());

  std::vector<std::string> csv_files;
  if (wants(run.config, "csv")) {
    for (const Trajectory& t : paths) {
      const fs::path p =
          run.dir / ("traj_seed" + std::to_string(t.seed) + ".csv");
      write_trajectory_csv(t, p.string());
      csv_files.push_back(p.filename().string());
    }
  }
  if (run.config.emit_plot_script && !csv_files.empty()) {
    write_text((run.dir / "plot.gp").string(), plot_script(csv_files));
  }

  json manifest = manifest_base(run, clock.elapsed());
  manifest["paths"] = paths.size();
  manifest["budget_exceeded_count"] = summary.budget_exceeded_count;
  write_text((run.dir / "manifest.json").string(), manifest.dump(2) + "\n");

  std::cout << "slope " << format_double(summary.slope.mean) << " +- "
            << format_double(summary.slope.half_width) << ", |M_T/T| mean "
            << format_double(summary.mean_abs_mart_ratio) << ", returns "
            << summary.returns.completed << " completed / "
            << summary.returns.censored << " censored\n";
  return summary.budget_exceeded_count == 0 ? exit_ok : exit_partial;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values,
              const CommandOverrides& ov) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  LoadedRun base = prepare(config_path, ov, /*needs_outputs=*/true);

  json sweep = json::array();
  std::ostringstream table;
  table << param << ",verdict,m,vbar,transient_speed,scenario\n";
  bool any_undetermined = false;
  for (const std::string& value : values) {
    RunConfig cfg = base.config;
    set_config_key(cfg, param, value);
    const Scenario sc = build_scenario(cfg);
    MomentFunctionals funcs(sc.measure, sc.model);
    const RegimeReport rep = classify(funcs, sc.speed, cfg.boundary_tol);
    any_undetermined |= rep.verdict == Verdict::boundary_undetermined;

    json row;
    row[param] = value;
    row["verdict"] = verdict_name(rep.verdict);
    row["m"] = std::isinf(rep.m) ? json("inf") : json(rep.m);
    row["vbar"] = rep.vbar;
    row["scenario"] = hash_hex(sc.fingerprint());
    if (rep.verdict == Verdict::transient) {
      row["transient_speed"] = rep.transient_speed;
    }
    sweep.push_back(row);
    table << value << "," << verdict_name(rep.verdict) << ","
          << format_double(rep.m) << "," << format_double(rep.vbar) << ","
          << format_double(rep.verdict == Verdict::transient
                               ? rep.transient_speed
                               : 0.0)
          << "," << hash_hex(sc.fingerprint()) << "\n";
    std::cout << param << " = " << value << " -> " << verdict_name(rep.verdict)
              << "\n";
  }
  write_text((base.dir / "sweep.json").string(), sweep.dump(2) + "\n");
  write_text((base.dir / "sweep.csv").string(), table.str());
  return any_undetermined ? exit_undetermined : exit_ok;
}

}  // namespace lagsim
