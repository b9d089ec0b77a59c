#ifndef SAND_RANKING_HPP
#define SAND_RANKING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sand/network.hpp"

namespace sand {

// Per-device social metrics. rank multiplies all four factors, so a device
// with a single social link (clustering and betweenness both defined as 0)
// always ranks 0.
struct RankEntry {
    DeviceId device = 0;
    std::uint32_t degree = 0;    // social links
    std::uint32_t diversity = 0; // distinct relation label values
    double clustering = 0.0;     // in [0, 1]
    double betweenness = 0.0;    // in [0, 1]
    double rank = 0.0;           // degree * diversity * clustering * betweenness
};

struct RankTable {
    std::vector<RankEntry> entries; // indexed by DeviceId
    std::uint64_t seed = 0;         // fingerprint of the ranked network
    TopologyKind topology = TopologyKind::Fixture;

    const RankEntry& operator[](DeviceId i) const { return entries[i]; }
};

// Number of distinct relation label values across a device's social links.
// Every SharedFeature(f) counts as its own type; Acquaintance is one type.
std::uint32_t diversity(const Network& net, DeviceId i);

// Local clustering coefficient: 2 * |links between distinct social
// neighbors| / (k * (k - 1)); 0 when the device has fewer than two links.
double clustering_coefficient(const Network& net, DeviceId i);

// Local betweenness: the fraction of ordered neighbor pairs (s, t) whose
// shortest path within the closed neighborhood (the device plus its social
// neighbors) passes through the device; 0 when it has fewer than two links.
// Within that subgraph a non-adjacent neighbor pair is always at distance
// two via the device itself, so the pair contributes exactly when s and t
// are not directly linked.
double local_betweenness(const Network& net, DeviceId i);

// Same contract as local_betweenness, computed the slow way: breadth-first
// all-pairs search over the explicit neighborhood subgraph with full
// enumeration of every shortest path. Test oracle; small neighborhoods only.
double oracle_betweenness(const Network& net, DeviceId i);

RankTable build_rank_table(const Network& net);

// CSV dump: device,k,d,c,b,R with 6-decimal reals.
void write_rank_csv(const RankTable& table, std::ostream& out);

} // namespace sand

#endif
