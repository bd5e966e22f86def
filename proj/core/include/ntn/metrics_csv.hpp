#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ntn/baselines.hpp"
#include "ntn/trainer.hpp"

namespace ntn {

/// Provenance lines written at the top of every CSV as "# key=value".
struct CsvHeader {
  std::string kind;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// One slot of a learned or baseline run. Satellite indices are 0-based
/// here and written 1-based.
struct SlotRecord {
  long slot = 0;
  double sum_bps = 0.0;
  std::optional<double> reward;
  std::vector<double> path_bps;
  std::vector<double> power_w;
  std::vector<std::vector<int>> sats;
  std::vector<std::vector<LinkType>> links;
  std::vector<Vec3> relay_position;  // empty for relay-free schemes
};

struct RunTable {
  std::string run_id;
  int episode = 0;
  std::vector<SlotRecord> rows;
};

RunTable table_from_eval(const EvalResult& eval, std::string run_id);
RunTable table_from_baseline(const BaselineSeries& series, std::span<const Vec3> relays = {});

struct RunSummary {
  std::string run_id;
  std::uint64_t seed = 0;
  double mean_sum_bps = 0.0;
  double mean_power_w = 0.0;  // per relay, per slot
  double energy_efficiency = 0.0;  // bits / J, 0 when no energy is spent
  double min_path_mean_bps = 0.0;
  std::vector<double> fso_fraction;  // per hop position, share of slots on FSO
  std::optional<double> oracle_mean_bps;
};

/// Energy is not recoverable from the table alone (kinetic correction), so
/// the caller passes the episode energy.
RunSummary summarize(const RunTable& table, double total_energy_j, double dt_s);

std::string format_number(double v);

void write_header(std::ostream& os, const CsvHeader& h);
void write_slot_csv(std::ostream& os, const RunTable& table, const CsvHeader& h);
void write_curve_csv(std::ostream& os, std::span<const EpisodeLog> curve, const CsvHeader& h);
void write_summary_csv(std::ostream& os, std::span<const RunSummary> rows, const CsvHeader& h);

}  // namespace ntn
