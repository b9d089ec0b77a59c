#include "sand/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace sand {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::uint64_t edge_key(DeviceId a, DeviceId b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

constexpr std::uint64_t kTopologyStream = 0x746f706fULL; // stream tags for sub-seeding
constexpr std::uint64_t kFeatureStream = 0x66656174ULL;

double quantize_latency(double ms) { return std::round(ms * 1000.0) / 1000.0; }

} // namespace

void Network::finalize() {
    if (profiles.size() != n) fail("network: profile count must equal device count");

    for (auto& e : comm) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v) fail("network: communication self-loop");
        if (e.v >= n) fail("network: communication edge endpoint out of range");
        if (!(e.latency_ms > 0.0)) fail("network: non-positive link latency");
    }
    std::sort(comm.begin(), comm.end(),
              [](const CommEdge& a, const CommEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < comm.size(); ++i) {
        if (comm[i].u == comm[i - 1].u && comm[i].v == comm[i - 1].v)
            fail("network: duplicate communication edge");
    }

    std::unordered_map<std::uint64_t, double> comm_latency;
    comm_latency.reserve(comm.size() * 2);
    for (const auto& e : comm) comm_latency.emplace(edge_key(e.u, e.v), e.latency_ms);

    for (auto& e : overlay) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u == e.v) fail("network: social self-loop");
        if (e.v >= n) fail("network: social edge endpoint out of range");
        if (e.labels.empty()) fail("network: social edge without labels");
        std::sort(e.labels.begin(), e.labels.end());
        e.labels.erase(std::unique(e.labels.begin(), e.labels.end()), e.labels.end());
        for (const auto& l : e.labels) {
            if (l.kind == RelationKind::SharedFeature && feature_pool > 0 && l.feature >= feature_pool)
                fail("network: shared-feature label outside the feature pool");
        }
        if (!comm_latency.count(edge_key(e.u, e.v)))
            fail("network: social edge without a communication edge");
    }
    std::sort(overlay.begin(), overlay.end(),
              [](const SocialEdge& a, const SocialEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < overlay.size(); ++i) {
        if (overlay[i].u == overlay[i - 1].u && overlay[i].v == overlay[i - 1].v)
            fail("network: duplicate social edge");
    }

    for (auto& p : profiles) {
        std::sort(p.begin(), p.end());
        if (std::adjacent_find(p.begin(), p.end()) != p.end())
            fail("network: duplicate feature in device profile");
        if (!p.empty() && p.back() >= feature_pool)
            fail("network: profile feature outside the feature pool");
        if (p.size() != features_per_device)
            fail("network: profile size must equal features-per-device");
    }

    comm_adj_.assign(n, {});
    for (const auto& e : comm) {
        comm_adj_[e.u].push_back({e.v, e.latency_ms});
        comm_adj_[e.v].push_back({e.u, e.latency_ms});
    }
    for (auto& adj : comm_adj_)
        std::sort(adj.begin(), adj.end(),
                  [](const CommNeighbor& a, const CommNeighbor& b) { return a.id < b.id; });

    social_adj_.assign(n, {});
    for (std::uint32_t idx = 0; idx < overlay.size(); ++idx) {
        const auto& e = overlay[idx];
        const double lat = comm_latency.at(edge_key(e.u, e.v));
        social_adj_[e.u].push_back({e.v, lat, idx});
        social_adj_[e.v].push_back({e.u, lat, idx});
    }
    for (auto& adj : social_adj_)
        std::sort(adj.begin(), adj.end(),
                  [](const SocialNeighbor& a, const SocialNeighbor& b) { return a.id < b.id; });
}

bool Network::has_feature(DeviceId i, FeatureId f) const {
    const auto& p = profiles[i];
    return std::binary_search(p.begin(), p.end(), f);
}

bool Network::social_adjacent(DeviceId a, DeviceId b) const {
    const auto& adj = social_adj_[a];
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const SocialNeighbor& s, DeviceId id) { return s.id < id; });
    return it != adj.end() && it->id == b;
}

// ---------------------------------------------------------------------------
// Topology generation
// ---------------------------------------------------------------------------

namespace {

struct EdgeSet {
    std::unordered_map<std::uint64_t, int> count;

    void add(DeviceId a, DeviceId b) { ++count[edge_key(a, b)]; }
    void remove(DeviceId a, DeviceId b) {
        auto it = count.find(edge_key(a, b));
        if (--it->second == 0) count.erase(it);
    }
    bool contains(DeviceId a, DeviceId b) const { return count.count(edge_key(a, b)) != 0; }
    int multiplicity(DeviceId a, DeviceId b) const {
        auto it = count.find(edge_key(a, b));
        return it == count.end() ? 0 : it->second;
    }
};

using EdgeList = std::vector<std::pair<DeviceId, DeviceId>>;

// Stub matching for a fixed degree sequence, followed by conflict repair:
// every remaining self-loop or duplicate edge is removed by a degree-
// preserving double swap with a randomly chosen partner edge. A swap is
// accepted only if it introduces no new conflict, so the conflict count is
// strictly decreasing. Returns false if repair stalls (caller resamples).
bool realize_degrees(const std::vector<std::uint32_t>& degrees, Rng& rng, EdgeList& edges) {
    std::vector<DeviceId> stubs;
    for (DeviceId i = 0; i < degrees.size(); ++i)
        stubs.insert(stubs.end(), degrees[i], i);
    rng.shuffle(stubs);

    edges.clear();
    EdgeSet set;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
        edges.emplace_back(stubs[i], stubs[i + 1]);
        set.add(stubs[i], stubs[i + 1]);
    }

    auto is_conflict = [&](const std::pair<DeviceId, DeviceId>& e) {
        return e.first == e.second || set.multiplicity(e.first, e.second) > 1;
    };

    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (is_conflict(edges[i])) bad.push_back(i);

    std::uint64_t budget = 200 * (edges.size() + 1);
    while (!bad.empty()) {
        if (budget-- == 0) return false;
        const std::size_t ei = bad.back();
        if (!is_conflict(edges[ei])) { // repaired as a side effect of an earlier swap
            bad.pop_back();
            continue;
        }
        const std::size_t fi = static_cast<std::size_t>(rng.below(edges.size()));
        if (fi == ei) continue;
        auto [a, b] = edges[ei];
        auto [c, d] = edges[fi];
        if (rng.below(2) == 1) std::swap(c, d);
        // proposed replacement: (a, c) and (b, d)
        if (a == c || b == d) continue;
        if (set.contains(a, c) || set.contains(b, d)) continue;
        if (edge_key(a, c) == edge_key(b, d)) continue;
        set.remove(a, b);
        set.remove(c, d);
        set.add(a, c);
        set.add(b, d);
        edges[ei] = {a, c};
        edges[fi] = {b, d};
        if (!is_conflict(edges[ei])) bad.pop_back();
        if (is_conflict(edges[fi])) bad.push_back(fi);
    }
    return true;
}

std::vector<std::uint32_t> component_labels(std::uint32_t n, const EdgeList& edges,
                                            std::uint32_t& count) {
    std::vector<std::vector<DeviceId>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::uint32_t> label(n, ~0u);
    std::vector<DeviceId> queue;
    count = 0;
    for (DeviceId s = 0; s < n; ++s) {
        if (label[s] != ~0u) continue;
        label[s] = count;
        queue.assign(1, s);
        while (!queue.empty()) {
            DeviceId u = queue.back();
            queue.pop_back();
            for (DeviceId v : adj[u])
                if (label[v] == ~0u) {
                    label[v] = count;
                    queue.push_back(v);
                }
        }
        ++count;
    }
    return label;
}

// Merges components with cross-component double swaps: an edge from each of
// two components is rewired into two bridging edges. Endpoints sit in
// different components, so the new edges can be neither self-loops nor
// duplicates, and all degrees are preserved.
void patch_connectivity(std::uint32_t n, EdgeList& edges, Rng& rng) {
    // Bounded: a sequence like all-degree-1 over 4+ devices has no connected
    // realization, and swapping two bridges can leave the component count
    // unchanged, so the loop must not rely on guaranteed progress.
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > 100 + 10 * std::uint64_t{n})
            fail("random topology: degree sequence admits no connected realization");
        std::uint32_t ncomp = 0;
        const auto label = component_labels(n, edges, ncomp);
        if (ncomp <= 1) return;

        std::vector<std::vector<std::size_t>> edges_by_comp(ncomp);
        for (std::size_t i = 0; i < edges.size(); ++i)
            edges_by_comp[label[edges[i].first]].push_back(i);

        // Components are non-trivial here (minimum degree >= 1), so each has
        // at least one edge to give up.
        const std::uint32_t c0 = label[0];
        std::uint32_t other = c0 == 0 ? 1 : 0;
        const std::size_t ei = edges_by_comp[c0][rng.below(edges_by_comp[c0].size())];
        const std::size_t fi = edges_by_comp[other][rng.below(edges_by_comp[other].size())];
        auto [a, b] = edges[ei];
        auto [c, d] = edges[fi];
        edges[ei] = {a, c};
        edges[fi] = {b, d};
    }
}

EdgeList generate_random_mesh(std::uint32_t n, const TopologyParams& params, Rng& rng) {
    const std::uint32_t dmin = params.degree_min;
    const std::uint32_t dmax = params.degree_max;
    if (n == 1) {
        if (dmax != 0) fail("random topology: degree bounds must be 0 for a single device");
        return {};
    }
    if (dmin < 1 || dmin > dmax || dmax >= n)
        fail("random topology: require 1 <= degree_min <= degree_max < devices");

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::uint32_t> degrees(n);
        std::uint64_t total = 0;
        for (auto& d : degrees) {
            d = rng.range_u32(dmin, dmax);
            total += d;
        }
        if (total % 2 != 0) continue; // resample the whole sequence
        EdgeList edges;
        if (!realize_degrees(degrees, rng, edges)) continue;
        patch_connectivity(n, edges, rng);
        return edges;
    }
    fail("random topology: no feasible degree sequence after 100 attempts");
}

// Preferential attachment. Seed devices [0, attach) start isolated; each
// joining device picks `attach` distinct targets uniformly from the repeated
// endpoint list (occurrence-weighted = degree-weighted). The first joiner
// links to all seed devices, so the result is connected with exactly
// (n - attach) * attach edges.
EdgeList generate_scale_free(std::uint32_t n, const TopologyParams& params, Rng& rng) {
    const std::uint32_t m = params.attach;
    if (m < 1) fail("scale-free topology: attach count must be >= 1");
    if (m >= n) fail("scale-free topology: attach count must be smaller than device count");

    EdgeList edges;
    edges.reserve(std::size_t{n - m} * m);
    std::vector<DeviceId> repeated;
    repeated.reserve(edges.capacity() * 2);

    std::vector<DeviceId> targets(m);
    for (std::uint32_t i = 0; i < m; ++i) targets[i] = i;

    std::vector<DeviceId> picked;
    for (DeviceId v = m; v < n; ++v) {
        for (DeviceId t : targets) {
            edges.emplace_back(v, t);
            repeated.push_back(v);
            repeated.push_back(t);
        }
        if (v + 1 == n) break;
        picked.clear();
        while (picked.size() < m) {
            DeviceId cand = repeated[rng.below(repeated.size())];
            if (std::find(picked.begin(), picked.end(), cand) == picked.end())
                picked.push_back(cand);
        }
        targets = picked;
    }
    return edges;
}

} // namespace

Network generate_topology(TopologyKind kind, std::uint32_t n, const TopologyParams& params,
                          std::uint64_t seed) {
    if (n < 1) fail("topology: device count must be >= 1");
    Rng rng(derive_seed(seed, kTopologyStream));

    EdgeList edges;
    switch (kind) {
    case TopologyKind::Random:
        edges = generate_random_mesh(n, params, rng);
        break;
    case TopologyKind::ScaleFree:
        edges = generate_scale_free(n, params, rng);
        break;
    case TopologyKind::Fixture:
        fail("topology: fixture networks are hand-built, not generated");
    }

    Network net;
    net.n = n;
    net.topology = kind;
    net.seed = seed;
    net.profiles.assign(n, {});
    net.comm.reserve(edges.size());
    for (auto [u, v] : edges) net.comm.push_back({u, v, 0.0});

    // Latencies are drawn in canonical edge order so the mapping from seed to
    // network is independent of construction details.
    std::sort(net.comm.begin(), net.comm.end(), [](const CommEdge& a, const CommEdge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (auto& e : net.comm) e.latency_ms = quantize_latency(rng.real(10.0, 40.0));

    net.finalize();
    return net;
}

void assign_features(Network& net, std::uint32_t feature_pool, std::uint32_t per_device,
                     std::uint64_t seed) {
    if (per_device < 1) fail("features: features-per-device must be >= 1");
    if (per_device > feature_pool)
        fail("features: cannot draw " + std::to_string(per_device) +
             " distinct features from a pool of " + std::to_string(feature_pool));

    Rng rng(derive_seed(derive_seed(seed, kFeatureStream), feature_pool));
    net.feature_pool = feature_pool;
    net.features_per_device = per_device;
    net.profiles.assign(net.n, {});
    for (auto& profile : net.profiles) {
        profile.reserve(per_device);
        while (profile.size() < per_device) {
            const FeatureId f = static_cast<FeatureId>(rng.below(feature_pool));
            if (std::find(profile.begin(), profile.end(), f) == profile.end())
                profile.push_back(f);
        }
    }
    net.overlay.clear(); // stale against the new profiles
    net.finalize();
}

void build_overlay(Network& net, OverlayMode mode) {
    net.overlay.clear();
    net.overlay.reserve(mode == OverlayMode::Enriched ? net.comm.size() : 0);
    std::vector<FeatureId> shared;
    for (const auto& e : net.comm) {
        const auto& pu = net.profiles[e.u];
        const auto& pv = net.profiles[e.v];
        shared.clear();
        std::set_intersection(pu.begin(), pu.end(), pv.begin(), pv.end(),
                              std::back_inserter(shared));
        if (shared.empty() && mode == OverlayMode::Literal) continue;

        SocialEdge s{e.u, e.v, {}};
        if (shared.empty()) {
            s.labels.push_back({RelationKind::Acquaintance, 0});
        } else {
            for (FeatureId f : shared) s.labels.push_back(RelationLabel::shared(f));
        }
        net.overlay.push_back(std::move(s));
    }
    net.finalize();
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

namespace {

const char* topology_name(TopologyKind k) {
    switch (k) {
    case TopologyKind::Random: return "random";
    case TopologyKind::ScaleFree: return "scale-free";
    case TopologyKind::Fixture: return "fixture";
    }
    return "?";
}

TopologyKind topology_from_name(const std::string& s) {
    if (s == "random") return TopologyKind::Random;
    if (s == "scale-free") return TopologyKind::ScaleFree;
    if (s == "fixture") return TopologyKind::Fixture;
    fail("network file: unknown topology kind '" + s + "'");
}

std::string label_name(const RelationLabel& l) {
    switch (l.kind) {
    case RelationKind::Family: return "family";
    case RelationKind::Friend: return "friend";
    case RelationKind::Neighbor: return "neighbor";
    case RelationKind::Colleague: return "colleague";
    case RelationKind::SharedFeature: return "feat:" + std::to_string(l.feature);
    case RelationKind::Acquaintance: return "acq";
    }
    return "?";
}

RelationLabel label_from_name(const std::string& s) {
    if (s == "family") return {RelationKind::Family, 0};
    if (s == "friend") return {RelationKind::Friend, 0};
    if (s == "neighbor") return {RelationKind::Neighbor, 0};
    if (s == "colleague") return {RelationKind::Colleague, 0};
    if (s == "acq") return {RelationKind::Acquaintance, 0};
    if (s.rfind("feat:", 0) == 0) {
        FeatureId f = 0;
        const char* first = s.data() + 5;
        const char* last = s.data() + s.size();
        auto [p, ec] = std::from_chars(first, last, f);
        if (ec != std::errc{} || p != last) fail("network file: bad feature label '" + s + "'");
        return RelationLabel::shared(f);
    }
    fail("network file: unknown relation label '" + s + "'");
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Splits the next line into whitespace-separated tokens; empty at EOF.
    const std::vector<std::string>& next(const char* expect_tag) {
        tokens_.clear();
        std::string line;
        if (!std::getline(in_, line))
            fail(std::string("network file: unexpected end of file, expected '") + expect_tag + "'");
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) tokens_.push_back(tok);
        if (tokens_.empty() || tokens_[0] != expect_tag)
            fail(std::string("network file: expected '") + expect_tag + "' record");
        return tokens_;
    }

private:
    std::istream& in_;
    std::vector<std::string> tokens_;
};

template <typename T>
T parse_uint(const std::string& s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail("network file: bad integer '" + s + "'");
    return v;
}

double parse_latency(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail("network file: bad latency '" + s + "'");
    }
    if (pos != s.size()) fail("network file: bad latency '" + s + "'");
    return v;
}

} // namespace

void save_network(const Network& net, std::ostream& out) {
    out << "sandnet 1\n";
    out << "topology " << topology_name(net.topology) << "\n";
    out << "seed " << net.seed << "\n";
    out << "devices " << net.n << "\n";
    out << "feature-pool " << net.feature_pool << "\n";
    out << "features-per-device " << net.features_per_device << "\n";
    out << "comm-edges " << net.comm.size() << "\n";
    out << "social-edges " << net.overlay.size() << "\n";
    for (DeviceId i = 0; i < net.n; ++i) {
        out << "node " << i;
        for (FeatureId f : net.profiles[i]) out << ' ' << f;
        out << '\n';
    }
    char buf[32];
    for (const auto& e : net.comm) {
        std::snprintf(buf, sizeof buf, "%.3f", e.latency_ms);
        out << "comm " << e.u << ' ' << e.v << ' ' << buf << '\n';
    }
    for (const auto& e : net.overlay) {
        out << "social " << e.u << ' ' << e.v << ' ';
        for (std::size_t i = 0; i < e.labels.size(); ++i) {
            if (i) out << ',';
            out << label_name(e.labels[i]);
        }
        out << '\n';
    }
    if (!out) fail("network file: write failure");
}

Network load_network(std::istream& in) {
    LineReader reader(in);

    const auto& magic = reader.next("sandnet");
    if (magic.size() != 2) fail("network file: malformed header");
    if (magic[1] != "1")
        fail("network file: unsupported format version '" + magic[1] + "'");

    Network net;
    {
        const auto& t = reader.next("topology");
        if (t.size() != 2) fail("network file: malformed topology record");
        net.topology = topology_from_name(t[1]);
    }
    auto scalar = [&](const char* tag) {
        const auto& t = reader.next(tag);
        if (t.size() != 2) fail(std::string("network file: malformed ") + tag + " record");
        return t[1];
    };
    net.seed = parse_uint<std::uint64_t>(scalar("seed"));
    net.n = parse_uint<std::uint32_t>(scalar("devices"));
    net.feature_pool = parse_uint<std::uint32_t>(scalar("feature-pool"));
    net.features_per_device = parse_uint<std::uint32_t>(scalar("features-per-device"));
    const auto comm_count = parse_uint<std::uint64_t>(scalar("comm-edges"));
    const auto social_count = parse_uint<std::uint64_t>(scalar("social-edges"));

    net.profiles.assign(net.n, {});
    for (DeviceId i = 0; i < net.n; ++i) {
        const auto& t = reader.next("node");
        if (t.size() < 2) fail("network file: malformed node record");
        if (parse_uint<DeviceId>(t[1]) != i) fail("network file: node records out of order");
        for (std::size_t j = 2; j < t.size(); ++j)
            net.profiles[i].push_back(parse_uint<FeatureId>(t[j]));
    }
    for (std::uint64_t i = 0; i < comm_count; ++i) {
        const auto& t = reader.next("comm");
        if (t.size() != 4) fail("network file: malformed comm record");
        net.comm.push_back(
            {parse_uint<DeviceId>(t[1]), parse_uint<DeviceId>(t[2]), parse_latency(t[3])});
    }
    for (std::uint64_t i = 0; i < social_count; ++i) {
        const auto& t = reader.next("social");
        if (t.size() != 4) fail("network file: malformed social record");
        SocialEdge e{parse_uint<DeviceId>(t[1]), parse_uint<DeviceId>(t[2]), {}};
        std::string labels = t[3];
        std::size_t start = 0;
        while (start <= labels.size()) {
            const std::size_t comma = labels.find(',', start);
            const std::size_t end = comma == std::string::npos ? labels.size() : comma;
            e.labels.push_back(label_from_name(labels.substr(start, end - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        net.overlay.push_back(std::move(e));
    }

    net.finalize();
    return net;
}

std::vector<std::vector<DeviceId>> build_feature_index(const Network& net) {
    std::vector<std::vector<DeviceId>> holders(net.feature_pool);
    for (DeviceId i = 0; i < net.n; ++i)
        for (FeatureId f : net.profiles[i]) holders[f].push_back(i);
    return holders;
}

Network make_smart_home_network() {
    constexpr DeviceId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5, G = 6, H = 7;
    const RelationLabel family{RelationKind::Family, 0};
    const RelationLabel friendship{RelationKind::Friend, 0};
    const RelationLabel neighbor{RelationKind::Neighbor, 0};
    const RelationLabel colleague{RelationKind::Colleague, 0};

    Network net;
    net.n = 8;
    net.topology = TopologyKind::Fixture;
    net.seed = 0;
    net.feature_pool = 8;
    net.features_per_device = 1;

    const std::vector<SocialEdge> relations = {
        {A, E, {family}},    // TV - refrigerator: same manufacturer
        {C, E, {family}},    // washing machine - refrigerator
        {A, C, {family}},    // TV - washing machine
        {B, C, {neighbor}},  // vacuum - washing machine: same storage room
        {A, D, {friendship}}, // telephone - TV: frequent interaction
        {E, F, {friendship}}, // refrigerator - PC
        {E, G, {colleague}}, // refrigerator - microwave: meal preparation
        {E, H, {colleague}}, // refrigerator - boiler
        {G, H, {colleague}}, // microwave - boiler
    };
    for (const auto& r : relations) {
        net.comm.push_back({r.u, r.v, 1.0});
        net.overlay.push_back(r);
    }
    for (DeviceId i = 0; i < net.n; ++i) net.profiles.push_back({i});

    net.finalize();
    return net;
}

} // namespace sand
