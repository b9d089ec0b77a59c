#ifndef SAND_METRICS_HPP
#define SAND_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sand/discovery.hpp"

namespace sand {

// Aggregate of one scheme's outcomes over a request workload. Contacted and
// hop averages cover successful discoveries only; failed requests contribute
// to the success rate alone.
struct MetricsSummary {
    std::string scheme;
    std::uint32_t features = 0; // feature-pool size the run used
    std::uint64_t requests = 0;
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    double avg_contacted = 0.0;
    double avg_hops = 0.0;
    std::vector<std::uint64_t> hop_histogram; // successes per hop count, dense from 0
};

// Success counts per hop value, dense from 0 to the maximum observed hop
// count (empty when nothing succeeded).
std::vector<std::uint64_t> hop_distribution(const std::vector<DiscoveryOutcome>& outcomes);

// Throws std::invalid_argument on an empty outcome sequence.
MetricsSummary summarize(std::string scheme, const std::vector<DiscoveryOutcome>& outcomes);

// Results CSV: header scheme,features,requests,successes,success_rate,
// avg_contacted,avg_hops; one row per summary sorted by (scheme, features);
// reals printed with 4 decimals. Emission is byte-deterministic.
void emit_csv(std::vector<MetricsSummary> summaries, std::ostream& out);

// Parses a file produced by emit_csv (hop histograms are not part of the
// results CSV and come back empty).
std::vector<MetricsSummary> parse_results_csv(std::istream& in);

// Histogram CSV: header hops,count, one row per hop value.
void emit_histogram_csv(const std::vector<std::uint64_t>& histogram, std::ostream& out);

} // namespace sand

#endif
