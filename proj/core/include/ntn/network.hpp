#pragma once

#include <array>
#include <span>
#include <vector>

#include "ntn/channel.hpp"
#include "ntn/vec3.hpp"

namespace ntn {

/// Satellite choice of one relay: 0-based indices into the per-slot
/// visible_sats() ordering of lane 1 and lane 2. The Src->SAT1 and SAT2->Dst
/// hops follow the relay's choice.
struct Association {
  int lane1 = 0;
  int lane2 = 0;
  friend bool operator==(const Association&, const Association&) = default;
};

using AssociationMatrix = std::vector<Association>;

inline constexpr int kHops = 4;

/// Hop order along a relayed path: Src-SAT1, SAT1-relay, relay-SAT2, SAT2-Dst.
using HopArray = std::array<double, kHops>;

HopArray link_distances(const Vec3& src, const Vec3& dst, const Vec3& sat1, const Vec3& sat2, const Vec3& relay);

struct PathRates {
  HopArray distance_m{};
  HopArray capacity_bps{};  // after overlap sharing
  HopArray rate_bps{};      // decode-and-forward chain, rate[h] <= capacity[h]
  HopArray share{};         // 1/m for m relays on the same satellite
  std::array<LinkType, kHops> link{};
  double e2e_bps = 0.0;
};

/// Bottleneck of a decode-and-forward chain without buffering.
double e2e_throughput(const HopArray& capacities);

/// Node positions for one slot.
struct SlotGeometry {
  Vec3 src;
  Vec3 dst;
  std::vector<Vec3> lane1;  // in visible_sats() order
  std::vector<Vec3> lane2;
  std::vector<Vec3> relays;
};

/// Hybrid link rates of every candidate hop in one slot, so that many
/// association patterns can be scored without re-evaluating the channel.
class SlotLinkTable {
 public:
  SlotLinkTable(const SlotGeometry& geometry, const ChannelParams& channel);

  int relays() const { return relays_; }
  int lane1_size() const { return n1_; }
  int lane2_size() const { return n2_; }

  /// Throws std::invalid_argument / std::out_of_range on a malformed matrix.
  std::vector<PathRates> evaluate(const AssociationMatrix& assoc) const;
  double sum_e2e(const AssociationMatrix& assoc) const;

  /// Best own-path E2E of relay `j` when it alone uses the chosen satellites.
  Association best_unshared(int relay) const;

 private:
  struct Hop {
    double distance_m;
    HybridRate rate;
  };
  void check(const AssociationMatrix& assoc) const;
  const Hop& sat1_relay(int sat, int relay) const { return sat1_relay_[static_cast<std::size_t>(sat * relays_ + relay)]; }
  const Hop& relay_sat2(int relay, int sat) const { return relay_sat2_[static_cast<std::size_t>(relay * n2_ + sat)]; }

  int relays_;
  int n1_;
  int n2_;
  std::vector<Hop> src_sat1_;
  std::vector<Hop> sat1_relay_;
  std::vector<Hop> relay_sat2_;
  std::vector<Hop> sat2_dst_;
};

/// Per-relay hop capacities with equal bandwidth sharing among relays that
/// pick the same satellite, plus the resulting E2E rates.
std::vector<PathRates> effective_capacities(const SlotGeometry& geometry, const AssociationMatrix& assoc,
                                            const ChannelParams& channel);

struct SystemMetrics {
  double sum_throughput_bps = 0.0;
  double sum_energy_j = 0.0;
  double scalarized = 0.0;  // sigma_r * throughput - sigma_e * energy
};

SystemMetrics system_step_metrics(std::span<const PathRates> paths, std::span<const double> energies_j,
                                  double sigma_r = 1.0, double sigma_e = 1.0);

/// Fixed ground relays: relay altitudes forced to zero and no energy term.
/// `scalarized` carries the plain sum throughput.
SystemMetrics ground_relay_metrics(SlotGeometry geometry, const AssociationMatrix& assoc, const ChannelParams& channel);

/// Running totals for energy efficiency over an episode.
class EpisodeAccumulator {
 public:
  void add_slot(const SystemMetrics& m, double dt) {
    bits_ += m.sum_throughput_bps * dt;
    energy_j_ += m.sum_energy_j;
    ++slots_;
  }
  void add_energy(double joules) { energy_j_ += joules; }
  double bits() const { return bits_; }
  double energy_j() const { return energy_j_; }
  int slots() const { return slots_; }
  /// bits per joule; 0 when no energy was spent.
  double energy_efficiency() const { return energy_j_ > 0.0 ? bits_ / energy_j_ : 0.0; }

 private:
  double bits_ = 0.0;
  double energy_j_ = 0.0;
  int slots_ = 0;
};

/// Joint associations are indexed in mixed radix with relay 0's lane-1
/// choice as the most significant digit.
long joint_association_count(int relays, int lane1_size, int lane2_size);
AssociationMatrix decode_joint_association(long index, int relays, int lane1_size, int lane2_size);

struct JointSearchResult {
  AssociationMatrix assoc;
  double sum_bps = 0.0;
  long index = 0;
};

/// Exhaustive search for the sum-throughput maximizing joint association;
/// ties go to the lowest joint index.
JointSearchResult best_joint_association(const SlotLinkTable& table);

}  // namespace ntn
