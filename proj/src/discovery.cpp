#include "sand/discovery.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>

namespace sand {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool rank_before(const RankTable& ranks, DeviceId a, DeviceId b) {
    const RankEntry& ea = ranks[a];
    const RankEntry& eb = ranks[b];
    if (ea.rank != eb.rank) return ea.rank > eb.rank;
    if (ea.degree != eb.degree) return ea.degree > eb.degree;
    if (ea.diversity != eb.diversity) return ea.diversity > eb.diversity;
    return a < b;
}

void write_trace(std::ostream* trace, std::uint64_t step, DeviceId from, DeviceId to,
                 const char* action, double elapsed) {
    if (!trace) return;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu,%u,%u,%s,%.3f", static_cast<unsigned long long>(step),
                  from, to, action, elapsed);
    *trace << buf << '\n';
}

} // namespace

const char* failure_name(FailureReason r) {
    switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::TtlExpired: return "ttl-expired";
    case FailureReason::Exhausted: return "exhausted";
    case FailureReason::NoSuchFeature: return "no-such-feature";
    }
    return "?";
}

std::vector<DeviceId> order_neighbors(const Network& net, const RankTable& ranks, DeviceId i,
                                      const std::vector<std::uint8_t>& visited) {
    std::vector<DeviceId> out;
    for (const auto& nb : net.social_neighbors(i))
        if (!visited[nb.id]) out.push_back(nb.id);
    std::sort(out.begin(), out.end(),
              [&ranks](DeviceId a, DeviceId b) { return rank_before(ranks, a, b); });
    return out;
}

SandRouter::SandRouter(const Network& net, const RankTable& ranks) : net_(net) {
    by_rank_.reserve(net.n);
    for (DeviceId i = 0; i < net.n; ++i) {
        auto nbrs = net.social_neighbors(i);
        std::sort(nbrs.begin(), nbrs.end(), [&ranks](const SocialNeighbor& a,
                                                     const SocialNeighbor& b) {
            return rank_before(ranks, a.id, b.id);
        });
        by_rank_.push_back(std::move(nbrs));
    }
}

DiscoveryOutcome SandRouter::discover(const DiscoveryRequest& req, std::ostream* trace) const {
    struct Frame {
        DeviceId device;
        double parent_latency; // cost of the link back to the frame below
        std::uint32_t next;    // cursor into by_rank_[device]
        bool expandable;
    };

    DiscoveryOutcome out;
    std::vector<std::uint8_t> visited(net_.n, 0);
    std::vector<Frame> stack;
    std::uint64_t step = 0;

    auto arrive = [&](DeviceId dev) {
        visited[dev] = 1;
        ++out.contacted;
        return net_.has_feature(dev, req.desired_feature);
    };

    if (arrive(req.source)) {
        out.success = true;
        out.path = {req.source};
        return out;
    }
    stack.push_back({req.source, 0.0, 0, req.depth_limit >= 1});

    while (!stack.empty()) {
        Frame& top = stack.back();
        const auto& children = by_rank_[top.device];

        if (top.expandable && top.next < children.size()) {
            const SocialNeighbor& child = children[top.next++];
            if (visited[child.id]) continue;
            if (out.elapsed_ms + child.latency_ms > req.ttl_ms) {
                out.failure = FailureReason::TtlExpired;
                return out;
            }
            out.elapsed_ms += child.latency_ms;
            if (arrive(child.id)) {
                write_trace(trace, ++step, top.device, child.id, "found", out.elapsed_ms);
                out.success = true;
                out.path.reserve(stack.size() + 1);
                for (const Frame& f : stack) out.path.push_back(f.device);
                out.path.push_back(child.id);
                out.hops = static_cast<std::uint32_t>(out.path.size() - 1);
                return out;
            }
            write_trace(trace, ++step, top.device, child.id, "forward", out.elapsed_ms);
            // stack.size() is the child's depth; expand only below the limit.
            stack.push_back({child.id, child.latency_ms,
                             0, static_cast<std::uint32_t>(stack.size()) < req.depth_limit});
        } else {
            const Frame done = top;
            stack.pop_back();
            if (stack.empty()) break;
            if (out.elapsed_ms + done.parent_latency > req.ttl_ms) {
                out.failure = FailureReason::TtlExpired;
                return out;
            }
            out.elapsed_ms += done.parent_latency;
            write_trace(trace, ++step, done.device, stack.back().device, "backtrack",
                        out.elapsed_ms);
        }
    }

    out.failure = FailureReason::Exhausted;
    return out;
}

DiscoveryOutcome sand_discover(const Network& net, const RankTable& ranks,
                               const DiscoveryRequest& req, std::ostream* trace) {
    return SandRouter(net, ranks).discover(req, trace);
}

DiscoveryOutcome broadcast_discover(const Network& net, const DiscoveryRequest& req) {
    DiscoveryOutcome out;
    std::vector<double> arrival(net.n, kInf);
    std::vector<DeviceId> pred(net.n, req.source);
    std::vector<std::uint8_t> settled(net.n, 0);

    using Entry = std::pair<double, DeviceId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    arrival[req.source] = 0.0;
    heap.emplace(0.0, req.source);

    DeviceId target = net.n; // sentinel
    double target_time = kInf;

    // Settling order is (arrival, id) ascending, so the first settled holder
    // is the earliest-arriving one with ties broken by ascending id. Keep
    // settling through equal arrivals to count simultaneous listeners.
    while (!heap.empty()) {
        const auto [time, dev] = heap.top();
        heap.pop();
        if (settled[dev] || time > arrival[dev]) continue;
        if (time > req.ttl_ms) break;
        if (target != net.n && time > target_time) break;
        settled[dev] = 1;
        ++out.contacted;
        if (target == net.n && net.has_feature(dev, req.desired_feature)) {
            target = dev;
            target_time = time;
        }
        for (const auto& nb : net.comm_neighbors(dev)) {
            const double t = time + nb.latency_ms;
            if (t < arrival[nb.id]) {
                arrival[nb.id] = t;
                pred[nb.id] = dev;
                heap.emplace(t, nb.id);
            }
        }
    }

    if (target == net.n) {
        out.failure = FailureReason::TtlExpired;
        out.elapsed_ms = req.ttl_ms;
        return out;
    }
    out.success = true;
    out.elapsed_ms = target_time;
    for (DeviceId at = target;; at = pred[at]) {
        out.path.push_back(at);
        if (at == req.source) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    out.hops = static_cast<std::uint32_t>(out.path.size() - 1);
    return out;
}

DiscoveryOutcome centralized_discover(const Network& net, const DiscoveryRequest& req) {
    DiscoveryOutcome out;
    std::vector<std::uint32_t> dist(net.n, ~0u);
    std::vector<DeviceId> pred(net.n, req.source);
    std::vector<DeviceId> frontier{req.source};
    dist[req.source] = 0;

    DeviceId target = net.n;
    if (net.has_feature(req.source, req.desired_feature)) target = req.source;

    // Level-by-level search; the whole level is finished before choosing, so
    // the nearest holder with the smallest id wins.
    std::vector<DeviceId> next;
    while (target == net.n && !frontier.empty()) {
        next.clear();
        for (DeviceId u : frontier)
            for (const auto& nb : net.comm_neighbors(u))
                if (dist[nb.id] == ~0u) {
                    dist[nb.id] = dist[u] + 1;
                    pred[nb.id] = u;
                    next.push_back(nb.id);
                    if (net.has_feature(nb.id, req.desired_feature) && nb.id < target)
                        target = nb.id;
                }
        frontier.swap(next);
    }

    if (target == net.n) {
        bool held_anywhere = false;
        for (DeviceId i = 0; i < net.n && !held_anywhere; ++i)
            held_anywhere = net.has_feature(i, req.desired_feature);
        out.failure = held_anywhere ? FailureReason::Exhausted : FailureReason::NoSuchFeature;
        return out;
    }

    for (DeviceId at = target;; at = pred[at]) {
        out.path.push_back(at);
        if (at == req.source) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    out.hops = static_cast<std::uint32_t>(out.path.size() - 1);
    out.contacted = out.hops + 1;
    for (std::size_t i = 1; i < out.path.size(); ++i) {
        for (const auto& nb : net.comm_neighbors(out.path[i - 1]))
            if (nb.id == out.path[i]) {
                out.elapsed_ms += nb.latency_ms;
                break;
            }
    }
    if (out.elapsed_ms > req.ttl_ms) {
        out = DiscoveryOutcome{};
        out.failure = FailureReason::TtlExpired;
        out.elapsed_ms = req.ttl_ms;
        return out;
    }
    out.success = true;
    return out;
}

} // namespace sand
