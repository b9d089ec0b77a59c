#ifndef SAND_DISCOVERY_HPP
#define SAND_DISCOVERY_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sand/network.hpp"
#include "sand/ranking.hpp"

namespace sand {

struct DiscoveryRequest {
    DeviceId source = 0;
    FeatureId desired_feature = 0;
    double ttl_ms = 60000.0;        // simulated-time budget
    std::uint32_t depth_limit = 25; // maximum search path depth (edges)
};

enum class FailureReason : std::uint8_t {
    None,
    TtlExpired,   // the time budget ran out mid-search
    Exhausted,    // the reachable search space was covered without a hit
    NoSuchFeature // no device in the network holds the feature
};

struct DiscoveryOutcome {
    bool success = false;
    std::vector<DeviceId> path; // source..target on success, empty otherwise
    std::uint32_t hops = 0;     // path edge count
    std::uint32_t contacted = 0; // distinct devices that received the request
    double elapsed_ms = 0.0;    // simulated time consumed
    FailureReason failure = FailureReason::None;
};

const char* failure_name(FailureReason r);

// Unvisited social neighbors of i ordered for forwarding: descending rank,
// ties by descending degree, then descending diversity, then ascending id.
// `visited` is an n-sized membership array.
std::vector<DeviceId> order_neighbors(const Network& net, const RankTable& ranks, DeviceId i,
                                      const std::vector<std::uint8_t>& visited);

// Rank-guided discovery over the social overlay: depth-first traversal that
// target-tests each device on arrival, expands children in order_neighbors
// order, never expands devices at the depth limit, and never re-expands a
// visited device. The forwarded token physically walks the overlay — every
// traversal, forward or backtrack, consumes that link's latency — and the
// search aborts the moment a traversal would push elapsed time past the TTL.
//
// SandRouter precomputes the static forwarding order once per network + rank
// table; discover() is const and safe to call concurrently.
class SandRouter {
public:
    SandRouter(const Network& net, const RankTable& ranks);

    // When `trace` is given, writes one line per token move:
    // step,from,to,action,elapsed_ms with action in {forward, backtrack, found}.
    DiscoveryOutcome discover(const DiscoveryRequest& req, std::ostream* trace = nullptr) const;

private:
    const Network& net_;
    std::vector<std::vector<SocialNeighbor>> by_rank_; // adjacency in forwarding order
};

// One-shot convenience wrapper over SandRouter.
DiscoveryOutcome sand_discover(const Network& net, const RankTable& ranks,
                               const DiscoveryRequest& req, std::ostream* trace = nullptr);

// Flooding baseline over the communication graph. Every device relays the
// request to all neighbors, so a device's arrival time is the minimum summed
// latency over all paths. The target is the earliest-arriving holder of the
// feature (ties by ascending id); contacted counts every device that heard
// the request no later than the target did.
DiscoveryOutcome broadcast_discover(const Network& net, const DiscoveryRequest& req);

// Global-registry baseline: returns the minimum-hop communication path to
// the nearest holder (ties by ascending id). Contacted covers only the path;
// elapsed is the path's latency sum and must fit in the TTL.
DiscoveryOutcome centralized_discover(const Network& net, const DiscoveryRequest& req);

} // namespace sand

#endif
