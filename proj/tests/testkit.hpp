#ifndef SAND_TESTS_TESTKIT_HPP
#define SAND_TESTS_TESTKIT_HPP

// Small graph builders and brute-force reference computations shared by the
// unit and acceptance suites. Everything here stays independent of the
// library's own traversal/counting code paths.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sand/network.hpp"
#include "sand/rng.hpp"

namespace sand::testkit {

// Network from an explicit edge list; every communication edge doubles as an
// Acquaintance social edge unless labels are supplied. Unit latencies by
// default so hop counts and elapsed time coincide.
inline Network make_net(std::uint32_t n, const std::vector<std::pair<DeviceId, DeviceId>>& edges,
                        double latency = 1.0) {
    Network net;
    net.n = n;
    net.topology = TopologyKind::Fixture;
    net.profiles.assign(n, {});
    for (auto [u, v] : edges) {
        net.comm.push_back({u, v, latency});
        net.overlay.push_back({u, v, {{RelationKind::Acquaintance, 0}}});
    }
    net.finalize();
    return net;
}

// Erdos-Renyi style random network: each pair is linked with probability p;
// isolated graphs are fine (callers that need connectivity must check).
inline Network make_er_net(std::uint32_t n, double p, std::uint64_t seed, double latency = 1.0) {
    Rng rng(seed);
    std::vector<std::pair<DeviceId, DeviceId>> edges;
    for (DeviceId u = 0; u < n; ++u)
        for (DeviceId v = u + 1; v < n; ++v)
            if (rng.real(0.0, 1.0) < p) edges.emplace_back(u, v);
    return make_net(n, edges, latency);
}

// Assigns feature f to exactly the given holders (every other device gets a
// private filler feature so profile sizes stay uniform).
inline void set_single_feature_profiles(Network& net, FeatureId f,
                                        const std::vector<DeviceId>& holders_of_f) {
    net.feature_pool = std::max<FeatureId>(f + 1, net.n + 1);
    net.features_per_device = 1;
    net.profiles.assign(net.n, {});
    for (DeviceId i = 0; i < net.n; ++i) net.profiles[i] = {static_cast<FeatureId>(i)};
    for (DeviceId h : holders_of_f) net.profiles[h] = {f};
    net.finalize();
}

// Brute-force clustering coefficient: neighborhood and neighbor-neighbor
// links are both recovered by scanning the raw overlay edge list.
inline double oracle_clustering(const Network& net, DeviceId i) {
    std::vector<DeviceId> nbrs;
    for (const auto& e : net.overlay) {
        if (e.u == i) nbrs.push_back(e.v);
        if (e.v == i) nbrs.push_back(e.u);
    }
    const std::uint64_t k = nbrs.size();
    if (k < 2) return 0.0;
    std::uint64_t links = 0;
    for (const auto& e : net.overlay) {
        if (e.u == i || e.v == i) continue;
        const bool u_in = std::find(nbrs.begin(), nbrs.end(), e.u) != nbrs.end();
        const bool v_in = std::find(nbrs.begin(), nbrs.end(), e.v) != nbrs.end();
        if (u_in && v_in) ++links;
    }
    return static_cast<double>(2 * links) / static_cast<double>(k * (k - 1));
}

// BFS hop distances over the communication graph.
inline std::vector<std::uint32_t> bfs_hops(const Network& net, DeviceId src) {
    std::vector<std::uint32_t> dist(net.n, ~0u);
    std::vector<DeviceId> queue{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const DeviceId u = queue[head];
        for (const auto& nb : net.comm_neighbors(u))
            if (dist[nb.id] == ~0u) {
                dist[nb.id] = dist[u] + 1;
                queue.push_back(nb.id);
            }
    }
    return dist;
}

// Devices reachable from src through the social overlay.
inline std::vector<std::uint8_t> overlay_reachable(const Network& net, DeviceId src) {
    std::vector<std::uint8_t> seen(net.n, 0);
    std::vector<DeviceId> queue{src};
    seen[src] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (const auto& nb : net.social_neighbors(queue[head]))
            if (!seen[nb.id]) {
                seen[nb.id] = 1;
                queue.push_back(nb.id);
            }
    return seen;
}

inline bool comm_connected(const Network& net) {
    if (net.n == 0) return true;
    std::vector<std::uint8_t> seen(net.n, 0);
    std::vector<DeviceId> queue{0};
    seen[0] = 1;
    std::size_t count = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (const auto& nb : net.comm_neighbors(queue[head]))
            if (!seen[nb.id]) {
                seen[nb.id] = 1;
                ++count;
                queue.push_back(nb.id);
            }
    return count == net.n;
}

} // namespace sand::testkit

#endif
