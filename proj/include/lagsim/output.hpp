#ifndef LAGSIM_OUTPUT_HPP
#define LAGSIM_OUTPUT_HPP

#include <string>

#include "lagsim/analysis.hpp"
#include "lagsim/ensemble.hpp"
#include "lagsim/trajectory.hpp"

namespace lagsim {

/// Shortest round-trip decimal form; all numeric output funnels through
/// this so identical runs produce byte-identical files.
std::string format_double(double x);

std::string hash_hex(std::uint64_t h);

/// Trajectory CSV: a provenance comment line carrying the scenario hash
/// and seed, a `t,x` header, then one sample per line.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// Event log, one JSON object per line:
/// {"t":..,"kind":"fixed"|"rejected","alpha":..,"x_before":..,"x_after":..}
void write_events_jsonl(const Trajectory& traj, const std::string& path);

std::string regime_report_json(const RegimeReport& rep,
                               std::uint64_t scenario_hash);
std::string ensemble_summary_json(const EnsembleSummary& s);

/// Condition evidence as CSV for plotting: x, value, reference, behind a
/// provenance comment line.
std::string condition_evidence_csv(const ConditionVerdict& v,
                                   std::uint64_t scenario_hash);

/// gnuplot-compatible script plotting the per-seed trajectory CSVs.
std::string plot_script(const std::vector<std::string>& csv_files);

}  // namespace lagsim

#endif  // LAGSIM_OUTPUT_HPP
