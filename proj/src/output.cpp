#include "lagsim/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lagsim/errors.hpp"

namespace lagsim {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write file: " + path);
  return f;
}

json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return json(x);
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "# scenario " << hash_hex(traj.scenario_hash) << " seed " << traj.seed
    << "\n";
  f << "t,x\n";
  for (const Sample& s : traj.samples) {
    f << format_double(s.t) << "," << format_double(s.x) << "\n";
  }
  if (!f) throw IoError("short write: " + path);
}

void write_events_jsonl(const Trajectory& traj, const std::string& path) {
  std::ofstream f = open_out(path);
  f << R"({"scenario":")" << hash_hex(traj.scenario_hash) << R"(","seed":)"
    << traj.seed << "}\n";
  for (const JumpEvent& e : traj.events) {
    f << R"({"t":)" << format_double(e.t) << R"(,"kind":")"
      << (e.kind == EventKind::fixed ? "fixed" : "rejected")
      << R"(","alpha":)" << format_double(e.alpha) << R"(,"x_before":)"
      << format_double(e.x_before) << R"(,"x_after":)"
      << format_double(e.x_after) << "}\n";
  }
  if (!f) throw IoError("short write: " + path);
}

namespace {

json condition_json(const ConditionVerdict& v) {
  json j;
  j["id"] = v.id;
  j["grid"] = v.grid;
  j["values"] = v.values;
  j["reference"] = v.reference;
  j["limit_estimate"] = number_or_inf(v.limit_estimate);
  j["trend"] = v.trend;
  j["satisfied"] = v.satisfied == Satisfied::yes            ? "yes"
                   : v.satisfied == Satisfied::no           ? "no"
                                                            : "inconclusive";
  if (v.chosen_p > 0.0) j["chosen_p"] = v.chosen_p;
  return j;
}

}  // namespace

std::string regime_report_json(const RegimeReport& rep,
                               std::uint64_t scenario_hash) {
  json j;
  j["scenario"] = hash_hex(scenario_hash);
  j["m"] = number_or_inf(rep.m);
  j["V"] = number_or_inf(rep.V);
  j["vbar"] = rep.vbar;
  j["verdict"] = verdict_name(rep.verdict);
  if (rep.verdict == Verdict::transient) {
    j["transient_speed"] = rep.transient_speed;
  }
  j["boundary_tol"] = rep.boundary_tol;
  if (!rep.note.empty()) j["note"] = rep.note;
  j["condition_evidence"] = json::array();
  for (const ConditionVerdict& v : rep.evidence) {
    j["condition_evidence"].push_back(condition_json(v));
  }
  return j.dump(2);
}

std::string ensemble_summary_json(const EnsembleSummary& s) {
  json j;
  j["scenario"] = hash_hex(s.scenario_hash);
  j["n_paths"] = s.n_paths;
  j["slope_mean"] = s.slope.mean;
  j["slope_ci_half_width"] = s.slope.half_width;
  j["mean_abs_martingale_ratio"] = s.mean_abs_mart_ratio;
  j["qv_max_residual"] = s.qv_max_residual;
  j["qv_tolerance"] = s.qv_tolerance;
  j["return_level"] = s.return_level;
  j["returns_completed"] = s.returns.completed;
  j["returns_censored"] = s.returns.censored;
  if (s.returns.completed > 0) {
    j["return_time_mean"] = s.returns.mean;
    j["return_time_median"] = s.returns.median;
  }
  j["no_crossings"] = s.returns.no_crossings;
  j["budget_exceeded_count"] = s.budget_exceeded_count;
  return j.dump(2);
}

std::string condition_evidence_csv(const ConditionVerdict& v,
                                   std::uint64_t scenario_hash) {
  std::ostringstream os;
  os << "# scenario " << hash_hex(scenario_hash) << " condition " << v.id
     << "\n";
  os << "x,value,reference\n";
  for (std::size_t i = 0; i < v.grid.size(); ++i) {
    os << format_double(v.grid[i]) << "," << format_double(v.values[i]) << ","
       << format_double(v.reference[i]) << "\n";
  }
  return os.str();
}

std::string plot_script(const std::vector<std::string>& csv_files) {
  std::ostringstream os;
  os << "set datafile separator ','\n";
  os << "set xlabel 't'\n";
  os << "set ylabel 'x'\n";
  os << "set key off\n";
  os << "plot \\\n";
  for (std::size_t i = 0; i < csv_files.size(); ++i) {
    os << "  '" << csv_files[i] << "' using 1:2 with lines";
    os << (i + 1 < csv_files.size() ? ", \\\n" : "\n");
  }
  return os.str();
}

}  // namespace lagsim
