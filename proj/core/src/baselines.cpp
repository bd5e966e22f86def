#include "ntn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

const char* to_string(Cooperation mode) {
  return mode == Cooperation::cooperative ? "cooperative" : "non_cooperative";
}

double BaselineSeries::mean_bps() const {
  if (slots.empty()) return 0.0;
  double total = 0.0;
  for (const BaselineSlot& s : slots) total += s.sum_bps;
  return total / static_cast<double>(slots.size());
}

double BaselineSeries::min_path_mean_bps() const {
  if (slots.empty()) return 0.0;
  std::vector<double> mean(slots.front().path_bps.size(), 0.0);
  for (const BaselineSlot& s : slots) {
    for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += s.path_bps[p];
  }
  double lo = std::numeric_limits<double>::infinity();
  for (double m : mean) lo = std::min(lo, m / static_cast<double>(slots.size()));
  return lo;
}

BaselineSeries run_direct(const Scenario& s) {
  const HybridRate r = hybrid_rate(distance(s.src, s.dst), s.channel);
  BaselineSeries out;
  out.name = "direct";
  BaselineSlot slot;
  slot.sum_bps = r.rate_bps;
  slot.path_bps = {r.rate_bps};
  slot.sats = {{}};
  slot.links = {{r.link}};
  out.slots.assign(static_cast<std::size_t>(s.slots), slot);
  return out;
}

namespace {

struct Chain {
  double rate = -1.0;
  std::vector<int> sats;
  std::vector<LinkType> links;
};

// Exhaustive search over one satellite per lane; ties to the lexicographically
// smallest index tuple.
Chain best_chain(const Vec3& src, const Vec3& dst, const std::vector<std::vector<SatSnapshot>>& lanes,
                 const ChannelParams& ch) {
  Chain best;
  std::vector<int> idx(lanes.size(), 0);
  while (true) {
    std::vector<Vec3> nodes{src};
    for (std::size_t l = 0; l < lanes.size(); ++l) nodes.push_back(lanes[l][static_cast<std::size_t>(idx[l])].position);
    nodes.push_back(dst);
    double rate = std::numeric_limits<double>::infinity();
    std::vector<LinkType> links;
    for (std::size_t h = 0; h + 1 < nodes.size(); ++h) {
      const HybridRate r = hybrid_rate(distance(nodes[h], nodes[h + 1]), ch);
      rate = std::min(rate, r.rate_bps);
      links.push_back(r.link);
    }
    if (rate > best.rate) best = Chain{rate, idx, links};
    std::size_t l = lanes.size();
    while (l > 0) {
      --l;
      if (++idx[l] < static_cast<int>(lanes[l].size())) break;
      idx[l] = 0;
      if (l == 0) return best;
    }
  }
}

BaselineSlot slot_from_paths(const std::vector<PathRates>& paths, const AssociationMatrix& assoc) {
  BaselineSlot out;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    out.path_bps.push_back(paths[j].e2e_bps);
    out.sum_bps += paths[j].e2e_bps;
    out.sats.push_back({assoc[j].lane1, assoc[j].lane2});
    out.links.emplace_back(paths[j].link.begin(), paths[j].link.end());
  }
  return out;
}

}  // namespace

BaselineSeries run_sat_only(const Scenario& s, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument(fmt::format("SAT-only supports K in 1..3, got {}", k));
  if (k == 3 && !s.lane_mid) throw std::invalid_argument("SAT-only K=3 needs a middle lane");
  BaselineSeries out;
  out.name = fmt::format("sat_only_k{}", k);
  for (long n = 0; n < s.slots; ++n) {
    std::vector<std::vector<SatSnapshot>> lanes{visible_sats(s.lane1, 1, n, s.dt_s)};
    if (k == 3) lanes.push_back(visible_sats(*s.lane_mid, 3, n, s.dt_s));
    if (k >= 2) lanes.push_back(visible_sats(s.lane2, 2, n, s.dt_s));
    const Chain c = best_chain(s.src, s.dst, lanes, s.channel);
    BaselineSlot slot;
    slot.sum_bps = c.rate;
    slot.path_bps = {c.rate};
    slot.sats = {c.sats};
    slot.links = {c.links};
    out.slots.push_back(std::move(slot));
  }
  return out;
}

BaselineSeries run_fixed_relays(const Scenario& s, std::span<const Vec3> relays, Cooperation mode, std::string name) {
  BaselineSeries out;
  out.name = std::move(name);
  for (long n = 0; n < s.slots; ++n) {
    const SlotLinkTable table(slot_geometry(s, n, relays), s.channel);
    AssociationMatrix assoc;
    if (mode == Cooperation::cooperative) {
      assoc = best_joint_association(table).assoc;
    } else {
      for (int j = 0; j < table.relays(); ++j) assoc.push_back(table.best_unshared(j));
    }
    out.slots.push_back(slot_from_paths(table.evaluate(assoc), assoc));
  }
  return out;
}

BaselineSeries run_sat_ground(const Scenario& s, Cooperation mode) {
  const std::vector<Vec3> relays = ground_relay_positions(s);
  return run_fixed_relays(s, relays, mode, fmt::format("sat_ground_{}", to_string(mode)));
}

BaselineSeries frozen_uav_oracle(const Scenario& s, std::span<const std::vector<UavState>> trajectory) {
  BaselineSeries out;
  out.name = "frozen_uav_oracle";
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    std::vector<Vec3> relays;
    for (const UavState& u : trajectory[n]) relays.push_back(u.position);
    const SlotLinkTable table(slot_geometry(s, static_cast<long>(n), relays), s.channel);
    const AssociationMatrix assoc = best_joint_association(table).assoc;
    out.slots.push_back(slot_from_paths(table.evaluate(assoc), assoc));
  }
  return out;
}

RewardWeights derive_reward_weights(const Scenario& s, RewardMode mode, Objective objective) {
  RewardWeights w;
  w.mode = mode;
  w.objective = objective;
  const BaselineSeries ground = run_sat_ground(s, Cooperation::cooperative);
  w.mu_r = ground.mean_bps();
  double spread = 0.0;
  for (const BaselineSlot& slot : ground.slots) spread = std::max(spread, std::abs(slot.sum_bps - w.mu_r));
  w.sigma_r = spread > 0.0 ? spread : (w.mu_r > 0.0 ? w.mu_r : 1.0);
  w.mu_e = s.agents() * s.dt_s * min_steady_power(s.power);
  w.sigma_e = w.mu_e;
  return w;
}

}  // namespace ntn
