#ifndef SAND_EXPERIMENT_HPP
#define SAND_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sand/discovery.hpp"
#include "sand/metrics.hpp"
#include "sand/network.hpp"

namespace sand {

enum class Scheme : std::uint8_t { Sand, Broadcast, Centralized };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ExperimentConfig {
    TopologyKind topology = TopologyKind::ScaleFree;
    std::uint32_t devices = 20000;
    TopologyParams params;                 // degree bounds / attach count
    std::uint32_t features_total = 2000;   // F
    std::uint32_t features_per_device = 3; // k_f
    std::uint32_t requests = 15000;
    double ttl_ms = 60000.0;
    std::uint32_t depth_limit = 25;
    OverlayMode overlay_mode = OverlayMode::Enriched;
    std::vector<Scheme> schemes = {Scheme::Sand, Scheme::Broadcast, Scheme::Centralized};
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0: hardware concurrency

    void validate() const; // throws std::invalid_argument
};

// Deterministic request sequence: request i draws from an RNG stream derived
// from (seed, i). Sources are uniform over devices; desired features are
// uniform over features held by at least one device other than the source.
struct RequestWorkload {
    std::vector<DiscoveryRequest> requests;
};

RequestWorkload make_workload(const Network& net,
                              const std::vector<std::vector<DeviceId>>& holders,
                              const ExperimentConfig& cfg);

struct SchemeResult {
    Scheme scheme = Scheme::Sand;
    MetricsSummary summary;
};

struct ExperimentResult {
    std::vector<SchemeResult> schemes; // in configured order
};

// Topology -> features -> overlay, all sub-seeded from cfg.seed.
Network build_network(const ExperimentConfig& cfg);

// Runs every configured scheme over one identical workload on `net` (which
// must already carry profiles and overlay). Requests execute in parallel
// across cfg.threads workers; results are merged in request order, so the
// outcome is independent of the thread count.
ExperimentResult run_schemes(const Network& net, const ExperimentConfig& cfg);

// build_network + run_schemes.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Result-file writers: results.csv plus one hist_<scheme>_f<F>.csv per
// summary; the experiment variant also saves <out_dir>/network.sandnet.
void write_sweep_files(const std::vector<SchemeResult>& results, const std::string& out_dir);
void write_experiment_files(const Network& net, const std::vector<SchemeResult>& results,
                            const std::string& out_dir);

// Full experiment with result files in <out_dir>.
ExperimentResult run_experiment_files(const ExperimentConfig& cfg, const std::string& out_dir);

// Re-runs the experiment once per feature-pool size on a single fixed
// topology; profiles are re-drawn per F from a sub-seed. Returns summaries
// for every (scheme, F).
std::vector<SchemeResult> sweep_features(const ExperimentConfig& cfg,
                                         const std::vector<std::uint32_t>& feature_counts);

// Sweep with result files: <out_dir>/results.csv plus one histogram CSV per
// (scheme, F).
std::vector<SchemeResult> sweep_features_files(const ExperimentConfig& cfg,
                                               const std::vector<std::uint32_t>& feature_counts,
                                               const std::string& out_dir);

} // namespace sand

#endif
