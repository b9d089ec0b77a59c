#ifndef SAND_NETWORK_HPP
#define SAND_NETWORK_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sand/rng.hpp"

namespace sand {

using DeviceId = std::uint32_t;
using FeatureId = std::uint32_t;

enum class TopologyKind : std::uint8_t { Random, ScaleFree, Fixture };
enum class OverlayMode : std::uint8_t { Literal, Enriched };

// Social link types. The named kinds describe hand-built networks; generated
// networks abstract device information into features, so their links carry
// SharedFeature labels (or Acquaintance when the endpoints share nothing).
enum class RelationKind : std::uint8_t {
    Family,
    Friend,
    Neighbor,
    Colleague,
    SharedFeature,
    Acquaintance,
};

struct RelationLabel {
    RelationKind kind = RelationKind::Acquaintance;
    FeatureId feature = 0; // meaningful only when kind == SharedFeature

    static RelationLabel shared(FeatureId f) {
        return RelationLabel{RelationKind::SharedFeature, f};
    }
    friend auto operator<=>(const RelationLabel&, const RelationLabel&) = default;
};

struct CommEdge {
    DeviceId u = 0;
    DeviceId v = 0;
    double latency_ms = 0.0;

    friend bool operator==(const CommEdge&, const CommEdge&) = default;
};

struct SocialEdge {
    DeviceId u = 0;
    DeviceId v = 0;
    std::vector<RelationLabel> labels; // sorted, unique, non-empty

    friend bool operator==(const SocialEdge&, const SocialEdge&) = default;
};

struct CommNeighbor {
    DeviceId id = 0;
    double latency_ms = 0.0;
};

struct SocialNeighbor {
    DeviceId id = 0;
    double latency_ms = 0.0;     // latency of the underlying communication link
    std::uint32_t edge = 0;      // index into Network::overlay
};

struct TopologyParams {
    std::uint32_t degree_min = 4;  // Random: uniform degree bounds
    std::uint32_t degree_max = 10;
    std::uint32_t attach = 3;      // ScaleFree: links added per joining device
};

// Two-layer network: a communication graph with per-link latencies and a
// social overlay whose edge set is always a subset of the communication
// edge set. Devices are dense ids in [0, n). A Network is immutable once
// finalized and safe to share across threads.
class Network {
public:
    std::uint32_t n = 0;
    TopologyKind topology = TopologyKind::Fixture;
    std::uint64_t seed = 0;
    std::uint32_t feature_pool = 0;        // F: total distinct features
    std::uint32_t features_per_device = 0; // k_f

    std::vector<CommEdge> comm;                   // canonical: u < v, sorted by (u, v)
    std::vector<SocialEdge> overlay;              // same ordering, labels sorted
    std::vector<std::vector<FeatureId>> profiles; // sorted features per device

    // Canonicalizes edge/profile order, rebuilds adjacency, and checks all
    // structural invariants. Throws std::runtime_error on violation. Must be
    // called after any mutation of the public fields.
    void finalize();

    const std::vector<CommNeighbor>& comm_neighbors(DeviceId i) const { return comm_adj_[i]; }
    const std::vector<SocialNeighbor>& social_neighbors(DeviceId i) const { return social_adj_[i]; }
    std::uint32_t social_degree(DeviceId i) const {
        return static_cast<std::uint32_t>(social_adj_[i].size());
    }
    bool has_feature(DeviceId i, FeatureId f) const;
    bool social_adjacent(DeviceId a, DeviceId b) const;

    friend bool operator==(const Network& a, const Network& b) {
        return a.n == b.n && a.topology == b.topology && a.seed == b.seed &&
               a.feature_pool == b.feature_pool &&
               a.features_per_device == b.features_per_device && a.comm == b.comm &&
               a.overlay == b.overlay && a.profiles == b.profiles;
    }

private:
    std::vector<std::vector<CommNeighbor>> comm_adj_;
    std::vector<std::vector<SocialNeighbor>> social_adj_;
};

// Builds the communication graph only (no features, no overlay).
//
// Random: every device draws a degree uniformly from [degree_min, degree_max];
// the degree sequence is realized by configuration-model stub matching with
// self-loop/multi-edge conflicts repaired by degree-preserving edge swaps, and
// the result is patched to a single connected component by cross-component
// swaps (degrees stay within bounds throughout).
//
// ScaleFree: preferential attachment; starts from `attach` isolated devices,
// every later device links to `attach` distinct existing devices chosen
// proportionally to degree, giving (n - attach) * attach edges and a
// heavy-tailed degree distribution.
//
// Latencies are drawn uniformly from [10, 40] ms, quantized to 3 decimals so
// the file format round-trips exactly, and frozen into the network.
Network generate_topology(TopologyKind kind, std::uint32_t n, const TopologyParams& params,
                          std::uint64_t seed);

// Draws `per_device` distinct features uniformly from [0, feature_pool) for
// every device. Replaces existing profiles and clears the overlay (it would
// be stale). Deterministic in (seed, feature_pool): re-assigning with a new
// pool size on the same topology is an independent redraw.
void assign_features(Network& net, std::uint32_t feature_pool, std::uint32_t per_device,
                     std::uint64_t seed);

// Populates the overlay from the communication graph and the profiles.
// Literal: social link iff the endpoints share a feature, one SharedFeature
// label per common feature. Enriched (default): every communication link is
// also a social link; pairs sharing nothing get a single Acquaintance label.
void build_overlay(Network& net, OverlayMode mode);

// Versioned text serialization; save and re-save of the same network are
// byte-identical. load_network throws on version mismatch, malformed input,
// or invariant violations (e.g. a social edge without a communication edge).
void save_network(const Network& net, std::ostream& out);
Network load_network(std::istream& in);

// Feature -> sorted holder list, indexed by FeatureId.
std::vector<std::vector<DeviceId>> build_feature_index(const Network& net);

// Hand-built 8-device smart-home network with typed relations: TV (A=0),
// vacuum (B=1), washing machine (C=2), telephone (D=3), refrigerator (E=4),
// PC (F=5), microwave (G=6), boiler (H=7). Nine social links over an
// identical communication graph with 1 ms links; device i holds feature i.
Network make_smart_home_network();

} // namespace sand

#endif
