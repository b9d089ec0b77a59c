#include "sand/ranking.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace sand {

namespace {

// Number of social links between distinct neighbors of i (links incident to
// i itself are not counted). `mark` is an n-sized scratch buffer, zeroed on
// entry and exit.
std::uint64_t neighbor_link_count(const Network& net, DeviceId i, std::vector<std::uint8_t>& mark) {
    const auto& nbrs = net.social_neighbors(i);
    for (const auto& s : nbrs) mark[s.id] = 1;
    std::uint64_t links = 0;
    for (const auto& s : nbrs)
        for (const auto& t : net.social_neighbors(s.id))
            if (t.id > s.id && t.id != i && mark[t.id]) ++links;
    for (const auto& s : nbrs) mark[s.id] = 0;
    return links;
}

RankEntry make_entry(const Network& net, DeviceId i, std::vector<std::uint8_t>& mark) {
    RankEntry e;
    e.device = i;
    e.degree = net.social_degree(i);
    e.diversity = diversity(net, i);
    if (e.degree >= 2) {
        const std::uint64_t pairs = std::uint64_t{e.degree} * (e.degree - 1); // ordered
        const std::uint64_t links = neighbor_link_count(net, i, mark);
        e.clustering = static_cast<double>(2 * links) / static_cast<double>(pairs);
        e.betweenness = static_cast<double>(pairs - 2 * links) / static_cast<double>(pairs);
    }
    e.rank = e.degree * static_cast<double>(e.diversity) * e.clustering * e.betweenness;
    return e;
}

} // namespace

std::uint32_t diversity(const Network& net, DeviceId i) {
    std::vector<RelationLabel> labels;
    for (const auto& nb : net.social_neighbors(i)) {
        const auto& edge = net.overlay[nb.edge];
        labels.insert(labels.end(), edge.labels.begin(), edge.labels.end());
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return static_cast<std::uint32_t>(labels.size());
}

double clustering_coefficient(const Network& net, DeviceId i) {
    std::vector<std::uint8_t> mark(net.n, 0);
    return make_entry(net, i, mark).clustering;
}

double local_betweenness(const Network& net, DeviceId i) {
    std::vector<std::uint8_t> mark(net.n, 0);
    return make_entry(net, i, mark).betweenness;
}

double oracle_betweenness(const Network& net, DeviceId i) {
    const auto& nbrs = net.social_neighbors(i);
    const std::uint32_t k = static_cast<std::uint32_t>(nbrs.size());
    if (k < 2) return 0.0;

    // Explicit neighborhood subgraph: local index 0 is device i.
    std::vector<DeviceId> members(1, i);
    for (const auto& nb : nbrs) members.push_back(nb.id);
    std::vector<std::vector<std::uint32_t>> adj(members.size());
    for (std::uint32_t a = 0; a < members.size(); ++a)
        for (std::uint32_t b = a + 1; b < members.size(); ++b)
            if (net.social_adjacent(members[a], members[b])) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }

    // Any shortest path from `at` back to the source walks the BFS distance
    // downhill one level per step; enumerate them all.
    auto any_path_through = [&](auto&& self, const std::vector<std::uint32_t>& dist,
                                std::uint32_t at, std::uint32_t through) -> bool {
        if (at == through) return true;
        if (dist[at] == 0) return false;
        for (std::uint32_t prev : adj[at])
            if (dist[prev] + 1 == dist[at] && self(self, dist, prev, through))
                return true;
        return false;
    };

    std::uint64_t traversed = 0;
    std::vector<std::uint32_t> dist;
    std::vector<std::uint32_t> queue;
    for (std::uint32_t s = 1; s < members.size(); ++s) {
        dist.assign(members.size(), ~0u);
        dist[s] = 0;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t u = queue[head];
            for (std::uint32_t v : adj[u])
                if (dist[v] == ~0u) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }
        for (std::uint32_t t = 1; t < members.size(); ++t) {
            if (t == s || dist[t] == ~0u) continue;
            // Endpoints do not count as "passing through"; walk interior nodes.
            bool through = false;
            if (dist[t] >= 2)
                for (std::uint32_t prev : adj[t]) {
                    if (dist[prev] + 1 != dist[t]) continue;
                    if (prev != s && any_path_through(any_path_through, dist, prev, 0)) {
                        through = true;
                        break;
                    }
                }
            if (through) ++traversed;
        }
    }
    return static_cast<double>(traversed) / static_cast<double>(std::uint64_t{k} * (k - 1));
}

RankTable build_rank_table(const Network& net) {
    RankTable table;
    table.seed = net.seed;
    table.topology = net.topology;
    table.entries.reserve(net.n);
    std::vector<std::uint8_t> mark(net.n, 0);
    for (DeviceId i = 0; i < net.n; ++i) table.entries.push_back(make_entry(net, i, mark));
    return table;
}

void write_rank_csv(const RankTable& table, std::ostream& out) {
    out << "device,k,d,c,b,R\n";
    char buf[96];
    for (const auto& e : table.entries) {
        std::snprintf(buf, sizeof buf, "%u,%u,%u,%.6f,%.6f,%.6f", e.device, e.degree, e.diversity,
                      e.clustering, e.betweenness, e.rank);
        out << buf << '\n';
    }
}

} // namespace sand
