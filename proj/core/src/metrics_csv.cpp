#include "ntn/metrics_csv.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace ntn {

namespace {

std::string join_sats(const std::vector<int>& sats) {
  std::string out;
  for (std::size_t i = 0; i < sats.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(sats[i] + 1);
  }
  return out;
}

std::string join_links(const std::vector<LinkType>& links) {
  std::string out;
  for (LinkType l : links) out += l == LinkType::fso ? 'F' : 'R';
  return out;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.9g}", v); }

RunTable table_from_eval(const EvalResult& eval, std::string run_id) {
  RunTable t;
  t.run_id = std::move(run_id);
  for (std::size_t n = 0; n < eval.steps.size(); ++n) {
    const StepResult& s = eval.steps[n];
    SlotRecord r;
    r.slot = static_cast<long>(n);
    r.sum_bps = s.metrics.sum_throughput_bps;
    r.reward = s.reward;
    r.power_w = s.power_w;
    for (std::size_t j = 0; j < s.paths.size(); ++j) {
      r.path_bps.push_back(s.paths[j].e2e_bps);
      r.sats.push_back({s.assoc[j].lane1, s.assoc[j].lane2});
      r.links.emplace_back(s.paths[j].link.begin(), s.paths[j].link.end());
      r.relay_position.push_back(eval.uavs_before[n][j].position);
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

RunTable table_from_baseline(const BaselineSeries& series, std::span<const Vec3> relays) {
  RunTable t;
  t.run_id = series.name;
  for (std::size_t n = 0; n < series.slots.size(); ++n) {
    const BaselineSlot& b = series.slots[n];
    SlotRecord r;
    r.slot = static_cast<long>(n);
    r.sum_bps = b.sum_bps;
    r.path_bps = b.path_bps;
    r.power_w.assign(b.path_bps.size(), 0.0);
    r.sats = b.sats;
    r.links = b.links;
    if (relays.size() == b.path_bps.size()) r.relay_position.assign(relays.begin(), relays.end());
    t.rows.push_back(std::move(r));
  }
  return t;
}

RunSummary summarize(const RunTable& table, double total_energy_j, double dt_s) {
  RunSummary s;
  s.run_id = table.run_id;
  if (table.rows.empty()) return s;
  const std::size_t paths = table.rows.front().path_bps.size();
  std::vector<double> path_mean(paths, 0.0);
  std::size_t hops = 0;
  for (const auto& l : table.rows.front().links) hops = std::max(hops, l.size());
  std::vector<double> fso(hops, 0.0);
  std::vector<double> seen(hops, 0.0);
  double power = 0.0;
  std::size_t power_terms = 0;
  for (const SlotRecord& r : table.rows) {
    s.mean_sum_bps += r.sum_bps;
    for (std::size_t p = 0; p < paths; ++p) path_mean[p] += r.path_bps[p];
    for (double w : r.power_w) {
      power += w;
      ++power_terms;
    }
    for (const auto& l : r.links) {
      for (std::size_t h = 0; h < l.size(); ++h) {
        seen[h] += 1.0;
        if (l[h] == LinkType::fso) fso[h] += 1.0;
      }
    }
  }
  const auto n = static_cast<double>(table.rows.size());
  s.mean_sum_bps /= n;
  s.min_path_mean_bps = paths ? *std::min_element(path_mean.begin(), path_mean.end()) / n : 0.0;
  s.mean_power_w = power_terms ? power / static_cast<double>(power_terms) : 0.0;
  for (std::size_t h = 0; h < hops; ++h) s.fso_fraction.push_back(seen[h] > 0.0 ? fso[h] / seen[h] : 0.0);
  s.energy_efficiency = total_energy_j > 0.0 ? s.mean_sum_bps * n * dt_s / total_energy_j : 0.0;
  return s;
}

void write_header(std::ostream& os, const CsvHeader& h) {
  os << "# kind=" << h.kind << '\n';
  os << "# config_hash=" << fmt::format("{:016x}", h.config_hash) << '\n';
  os << "# seed=" << h.seed << '\n';
}

void write_slot_csv(std::ostream& os, const RunTable& table, const CsvHeader& h) {
  write_header(os, h);
  const std::size_t paths = table.rows.empty() ? 0 : table.rows.front().path_bps.size();
  os << "run_id,episode,slot,sum_bps,reward";
  for (std::size_t p = 1; p <= paths; ++p) {
    os << fmt::format(",e2e_bps_{0},power_w_{0},sats_{0},links_{0},x_km_{0},y_km_{0}", p);
  }
  os << '\n';
  for (const SlotRecord& r : table.rows) {
    os << table.run_id << ',' << table.episode << ',' << r.slot + 1 << ',' << format_number(r.sum_bps) << ','
       << (r.reward ? format_number(*r.reward) : std::string{});
    for (std::size_t p = 0; p < paths; ++p) {
      os << ',' << format_number(r.path_bps[p]) << ',' << format_number(r.power_w[p]) << ',' << join_sats(r.sats[p])
         << ',' << join_links(r.links[p]);
      if (p < r.relay_position.size()) {
        os << ',' << format_number(r.relay_position[p].x / kMetersPerKm) << ','
           << format_number(r.relay_position[p].y / kMetersPerKm);
      } else {
        os << ",,";
      }
    }
    os << '\n';
  }
}

void write_curve_csv(std::ostream& os, std::span<const EpisodeLog> curve, const CsvHeader& h) {
  write_header(os, h);
  os << "episode,cumulative_reward,mean_sum_bps,mean_power_w,ee_bits_per_j,critic_loss,actor_loss,updates\n";
  for (const EpisodeLog& l : curve) {
    os << l.episode << ',' << format_number(l.cumulative_reward) << ',' << format_number(l.mean_sum_throughput_bps)
       << ',' << format_number(l.mean_power_w) << ',' << format_number(l.energy_efficiency) << ','
       << format_number(l.critic_loss) << ',' << format_number(l.actor_loss) << ',' << l.updates << '\n';
  }
}

void write_summary_csv(std::ostream& os, std::span<const RunSummary> rows, const CsvHeader& h) {
  write_header(os, h);
  std::size_t hops = 0;
  for (const RunSummary& r : rows) hops = std::max(hops, r.fso_fraction.size());
  os << "run_id,seed,mean_sum_mbps,mean_power_w,ee_kbits_per_j,min_path_mbps,oracle_mean_mbps";
  for (std::size_t k = 1; k <= hops; ++k) os << ",fso_pct_hop" << k;
  os << '\n';
  for (const RunSummary& r : rows) {
    os << r.run_id << ',' << r.seed << ',' << format_number(r.mean_sum_bps / 1e6) << ','
       << format_number(r.mean_power_w) << ',' << format_number(r.energy_efficiency / 1e3) << ','
       << format_number(r.min_path_mean_bps / 1e6) << ','
       << (r.oracle_mean_bps ? format_number(*r.oracle_mean_bps / 1e6) : std::string{});
    for (std::size_t k = 0; k < hops; ++k) {
      os << ',' << (k < r.fso_fraction.size() ? format_number(100.0 * r.fso_fraction[k]) : std::string{});
    }
    os << '\n';
  }
}

}  // namespace ntn
