#include "ntn/network.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

HopArray link_distances(const Vec3& src, const Vec3& dst, const Vec3& sat1, const Vec3& sat2, const Vec3& relay) {
  return {distance(sat1, src), distance(relay, sat1), distance(sat2, relay), distance(dst, sat2)};
}

double e2e_throughput(const HopArray& capacities) {
  return *std::min_element(capacities.begin(), capacities.end());
}

SlotLinkTable::SlotLinkTable(const SlotGeometry& g, const ChannelParams& channel)
    : relays_(static_cast<int>(g.relays.size())),
      n1_(static_cast<int>(g.lane1.size())),
      n2_(static_cast<int>(g.lane2.size())) {
  auto hop = [&](const Vec3& a, const Vec3& b) {
    const double d = distance(a, b);
    return Hop{d, hybrid_rate(d, channel)};
  };
  src_sat1_.reserve(g.lane1.size());
  for (const Vec3& s : g.lane1) src_sat1_.push_back(hop(g.src, s));
  sat2_dst_.reserve(g.lane2.size());
  for (const Vec3& s : g.lane2) sat2_dst_.push_back(hop(s, g.dst));
  sat1_relay_.reserve(g.lane1.size() * g.relays.size());
  for (const Vec3& s : g.lane1)
    for (const Vec3& r : g.relays) sat1_relay_.push_back(hop(s, r));
  relay_sat2_.reserve(g.lane2.size() * g.relays.size());
  for (const Vec3& r : g.relays)
    for (const Vec3& s : g.lane2) relay_sat2_.push_back(hop(r, s));
}

void SlotLinkTable::check(const AssociationMatrix& assoc) const {
  if (static_cast<int>(assoc.size()) != relays_) {
    throw std::invalid_argument(fmt::format("association has {} rows for {} relays", assoc.size(), relays_));
  }
  for (const Association& a : assoc) {
    if (a.lane1 < 0 || a.lane1 >= n1_ || a.lane2 < 0 || a.lane2 >= n2_) {
      throw std::out_of_range(fmt::format("association ({}, {}) outside {}x{} satellites", a.lane1, a.lane2, n1_, n2_));
    }
  }
}

std::vector<PathRates> SlotLinkTable::evaluate(const AssociationMatrix& assoc) const {
  check(assoc);
  std::vector<int> m1(static_cast<std::size_t>(n1_), 0);
  std::vector<int> m2(static_cast<std::size_t>(n2_), 0);
  for (const Association& a : assoc) {
    ++m1[static_cast<std::size_t>(a.lane1)];
    ++m2[static_cast<std::size_t>(a.lane2)];
  }
  std::vector<PathRates> paths(assoc.size());
  for (int j = 0; j < relays_; ++j) {
    const Association& a = assoc[static_cast<std::size_t>(j)];
    const double s1 = 1.0 / m1[static_cast<std::size_t>(a.lane1)];
    const double s2 = 1.0 / m2[static_cast<std::size_t>(a.lane2)];
    const std::array<const Hop*, kHops> hops = {&src_sat1_[static_cast<std::size_t>(a.lane1)], &sat1_relay(a.lane1, j),
                                                &relay_sat2(j, a.lane2), &sat2_dst_[static_cast<std::size_t>(a.lane2)]};
    const HopArray share = {s1, s1, s2, s2};
    PathRates& p = paths[static_cast<std::size_t>(j)];
    double upstream = std::numeric_limits<double>::infinity();
    for (int h = 0; h < kHops; ++h) {
      const auto hi = static_cast<std::size_t>(h);
      p.distance_m[hi] = hops[hi]->distance_m;
      p.link[hi] = hops[hi]->rate.link;
      p.share[hi] = share[hi];
      p.capacity_bps[hi] = share[hi] * hops[hi]->rate.rate_bps;
      upstream = std::min(upstream, p.capacity_bps[hi]);
      p.rate_bps[hi] = upstream;
    }
    p.e2e_bps = e2e_throughput(p.capacity_bps);
  }
  return paths;
}

double SlotLinkTable::sum_e2e(const AssociationMatrix& assoc) const {
  check(assoc);
  // small fixed-size counts; relays and satellites per lane are tiny
  double total = 0.0;
  for (int j = 0; j < relays_; ++j) {
    const Association& a = assoc[static_cast<std::size_t>(j)];
    int c1 = 0;
    int c2 = 0;
    for (const Association& b : assoc) {
      c1 += b.lane1 == a.lane1;
      c2 += b.lane2 == a.lane2;
    }
    const double up = std::min(src_sat1_[static_cast<std::size_t>(a.lane1)].rate.rate_bps,
                               sat1_relay(a.lane1, j).rate.rate_bps) / c1;
    const double down = std::min(relay_sat2(j, a.lane2).rate.rate_bps,
                                 sat2_dst_[static_cast<std::size_t>(a.lane2)].rate.rate_bps) / c2;
    total += std::min(up, down);
  }
  return total;
}

Association SlotLinkTable::best_unshared(int relay) const {
  if (relay < 0 || relay >= relays_) throw std::out_of_range("relay index out of range");
  Association best;
  double best_up = -1.0;
  for (int i = 0; i < n1_; ++i) {
    const double up = std::min(src_sat1_[static_cast<std::size_t>(i)].rate.rate_bps, sat1_relay(i, relay).rate.rate_bps);
    if (up > best_up) {
      best_up = up;
      best.lane1 = i;
    }
  }
  double best_down = -1.0;
  for (int i = 0; i < n2_; ++i) {
    const double down = std::min(relay_sat2(relay, i).rate.rate_bps, sat2_dst_[static_cast<std::size_t>(i)].rate.rate_bps);
    if (down > best_down) {
      best_down = down;
      best.lane2 = i;
    }
  }
  return best;
}

std::vector<PathRates> effective_capacities(const SlotGeometry& geometry, const AssociationMatrix& assoc,
                                            const ChannelParams& channel) {
  return SlotLinkTable(geometry, channel).evaluate(assoc);
}

SystemMetrics system_step_metrics(std::span<const PathRates> paths, std::span<const double> energies_j, double sigma_r,
                                  double sigma_e) {
  if (!energies_j.empty() && energies_j.size() != paths.size()) {
    throw std::invalid_argument(fmt::format("{} paths but {} energy values", paths.size(), energies_j.size()));
  }
  SystemMetrics m;
  for (const PathRates& p : paths) m.sum_throughput_bps += p.e2e_bps;
  for (double e : energies_j) m.sum_energy_j += e;
  m.scalarized = sigma_r * m.sum_throughput_bps - sigma_e * m.sum_energy_j;
  return m;
}

SystemMetrics ground_relay_metrics(SlotGeometry geometry, const AssociationMatrix& assoc, const ChannelParams& channel) {
  for (Vec3& r : geometry.relays) r.z = 0.0;
  const auto paths = effective_capacities(geometry, assoc, channel);
  SystemMetrics m = system_step_metrics(paths, {}, 1.0, 0.0);
  return m;
}

long joint_association_count(int relays, int lane1_size, int lane2_size) {
  long count = 1;
  for (int j = 0; j < relays; ++j) count *= static_cast<long>(lane1_size) * lane2_size;
  return count;
}

AssociationMatrix decode_joint_association(long index, int relays, int lane1_size, int lane2_size) {
  if (index < 0 || index >= joint_association_count(relays, lane1_size, lane2_size)) {
    throw std::out_of_range(fmt::format("joint association index {} out of range", index));
  }
  AssociationMatrix assoc(static_cast<std::size_t>(relays));
  for (int j = relays - 1; j >= 0; --j) {
    auto& a = assoc[static_cast<std::size_t>(j)];
    a.lane2 = static_cast<int>(index % lane2_size);
    index /= lane2_size;
    a.lane1 = static_cast<int>(index % lane1_size);
    index /= lane1_size;
  }
  return assoc;
}

JointSearchResult best_joint_association(const SlotLinkTable& table) {
  const long total = joint_association_count(table.relays(), table.lane1_size(), table.lane2_size());
  JointSearchResult best;
  best.sum_bps = -1.0;
  for (long idx = 0; idx < total; ++idx) {
    AssociationMatrix assoc = decode_joint_association(idx, table.relays(), table.lane1_size(), table.lane2_size());
    const double value = table.sum_e2e(assoc);
    if (value > best.sum_bps) {
      best.sum_bps = value;
      best.index = idx;
      best.assoc = std::move(assoc);
    }
  }
  return best;
}

}  // namespace ntn
