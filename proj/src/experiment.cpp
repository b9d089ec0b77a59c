#include "sand/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <thread>

#include "sand/ranking.hpp"
#include "sand/rng.hpp"

namespace sand {

namespace {

constexpr std::uint64_t kWorkloadStream = 0x776f726bULL;

[[noreturn]] void bad_config(const std::string& msg) { throw std::invalid_argument(msg); }

unsigned worker_count(unsigned configured, std::size_t jobs) {
    unsigned t = configured != 0 ? configured : std::thread::hardware_concurrency();
    if (t == 0) t = 1;
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Static request partition; worker w owns [w * chunk, ...). Outcomes land in
// a pre-sized vector indexed by request, so the merge order never depends on
// scheduling.
template <typename Fn>
std::vector<DiscoveryOutcome> run_requests(const std::vector<DiscoveryRequest>& requests,
                                           unsigned threads, Fn&& discover) {
    std::vector<DiscoveryOutcome> outcomes(requests.size());
    const unsigned workers = worker_count(threads, requests.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < requests.size(); ++i) outcomes[i] = discover(requests[i]);
        return outcomes;
    }
    const std::size_t chunk = (requests.size() + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(requests.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) outcomes[i] = discover(requests[i]);
        });
    }
    for (auto& t : pool) t.join();
    return outcomes;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

} // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::Sand: return "sand";
    case Scheme::Broadcast: return "broadcast";
    case Scheme::Centralized: return "centralized";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "sand") return Scheme::Sand;
    if (name == "broadcast") return Scheme::Broadcast;
    if (name == "centralized") return Scheme::Centralized;
    bad_config("unknown scheme '" + name + "' (expected sand, broadcast or centralized)");
}

void ExperimentConfig::validate() const {
    if (devices < 1) bad_config("config: devices must be >= 1");
    if (requests < 1) bad_config("config: requests must be >= 1");
    if (features_per_device < 1) bad_config("config: features-per-device must be >= 1");
    if (features_total < features_per_device)
        bad_config("config: feature pool must be at least features-per-device");
    if (!(ttl_ms > 0.0)) bad_config("config: ttl must be positive");
    if (depth_limit < 1) bad_config("config: depth limit must be >= 1");
    if (schemes.empty()) bad_config("config: at least one scheme required");
    if (topology == TopologyKind::Fixture) bad_config("config: topology must be random or scale-free");
}

RequestWorkload make_workload(const Network& net,
                              const std::vector<std::vector<DeviceId>>& holders,
                              const ExperimentConfig& cfg) {
    std::vector<FeatureId> eligible; // features held by at least one device
    for (FeatureId f = 0; f < holders.size(); ++f)
        if (!holders[f].empty()) eligible.push_back(f);
    if (eligible.empty()) bad_config("workload: no feature is held by any device");

    const std::uint64_t base =
        derive_seed(derive_seed(cfg.seed, kWorkloadStream), cfg.features_total);

    RequestWorkload wl;
    wl.requests.reserve(cfg.requests);
    for (std::uint32_t i = 0; i < cfg.requests; ++i) {
        Rng rng(derive_seed(base, i));
        DiscoveryRequest req;
        req.source = static_cast<DeviceId>(rng.below(net.n));
        req.ttl_ms = cfg.ttl_ms;
        req.depth_limit = cfg.depth_limit;
        // Uniform over features held by somebody other than the source;
        // rejecting source-only features preserves uniformity on that set.
        for (int guard = 0;; ++guard) {
            if (guard == 100000)
                bad_config("workload: no feature is held by a device other than the source");
            const FeatureId f = eligible[rng.below(eligible.size())];
            const auto& h = holders[f];
            if (h.size() == 1 && h[0] == req.source) continue;
            req.desired_feature = f;
            break;
        }
        wl.requests.push_back(req);
    }
    return wl;
}

Network build_network(const ExperimentConfig& cfg) {
    cfg.validate();
    Network net = generate_topology(cfg.topology, cfg.devices, cfg.params, cfg.seed);
    assign_features(net, cfg.features_total, cfg.features_per_device, cfg.seed);
    build_overlay(net, cfg.overlay_mode);
    return net;
}

ExperimentResult run_schemes(const Network& net, const ExperimentConfig& cfg) {
    cfg.validate();
    const auto holders = build_feature_index(net);
    const RequestWorkload workload = make_workload(net, holders, cfg);

    const bool wants_sand =
        std::find(cfg.schemes.begin(), cfg.schemes.end(), Scheme::Sand) != cfg.schemes.end();
    RankTable ranks;
    SandRouter* router = nullptr;
    std::unique_ptr<SandRouter> router_storage;
    if (wants_sand) {
        ranks = build_rank_table(net);
        router_storage = std::make_unique<SandRouter>(net, ranks);
        router = router_storage.get();
    }

    ExperimentResult result;
    for (Scheme scheme : cfg.schemes) {
        std::vector<DiscoveryOutcome> outcomes;
        switch (scheme) {
        case Scheme::Sand:
            outcomes = run_requests(workload.requests, cfg.threads,
                                    [&](const DiscoveryRequest& r) { return router->discover(r); });
            break;
        case Scheme::Broadcast:
            outcomes = run_requests(workload.requests, cfg.threads, [&](const DiscoveryRequest& r) {
                return broadcast_discover(net, r);
            });
            break;
        case Scheme::Centralized:
            outcomes = run_requests(workload.requests, cfg.threads, [&](const DiscoveryRequest& r) {
                return centralized_discover(net, r);
            });
            break;
        }
        MetricsSummary summary = summarize(scheme_name(scheme), outcomes);
        summary.features = cfg.features_total;
        result.schemes.push_back({scheme, std::move(summary)});
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const Network net = build_network(cfg);
    return run_schemes(net, cfg);
}

void write_sweep_files(const std::vector<SchemeResult>& results, const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::vector<MetricsSummary> summaries;
    summaries.reserve(results.size());
    for (const auto& r : results) summaries.push_back(r.summary);
    {
        auto out = open_out(dir / "results.csv");
        emit_csv(std::move(summaries), out);
    }
    for (const auto& r : results) {
        const std::string name =
            "hist_" + r.summary.scheme + "_f" + std::to_string(r.summary.features) + ".csv";
        auto out = open_out(dir / name);
        emit_histogram_csv(r.summary.hop_histogram, out);
    }
}

void write_experiment_files(const Network& net, const std::vector<SchemeResult>& results,
                            const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "network.sandnet");
        save_network(net, out);
    }
    write_sweep_files(results, out_dir);
}

ExperimentResult run_experiment_files(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Network net = build_network(cfg);
    ExperimentResult result = run_schemes(net, cfg);
    write_experiment_files(net, result.schemes, out_dir);
    return result;
}

std::vector<SchemeResult> sweep_features(const ExperimentConfig& cfg,
                                         const std::vector<std::uint32_t>& feature_counts) {
    if (feature_counts.empty()) bad_config("sweep: feature count list is empty");
    cfg.validate();

    // One topology for the whole sweep; only profiles and overlay are
    // re-derived per feature-pool size.
    Network net = generate_topology(cfg.topology, cfg.devices, cfg.params, cfg.seed);

    std::vector<SchemeResult> all;
    for (std::uint32_t f : feature_counts) {
        ExperimentConfig step = cfg;
        step.features_total = f;
        step.validate();
        assign_features(net, f, cfg.features_per_device, cfg.seed);
        build_overlay(net, cfg.overlay_mode);
        ExperimentResult res = run_schemes(net, step);
        for (auto& r : res.schemes) all.push_back(std::move(r));
    }
    return all;
}

std::vector<SchemeResult> sweep_features_files(const ExperimentConfig& cfg,
                                               const std::vector<std::uint32_t>& feature_counts,
                                               const std::string& out_dir) {
    std::vector<SchemeResult> all = sweep_features(cfg, feature_counts);
    write_sweep_files(all, out_dir);
    return all;
}

} // namespace sand
