#include "sand/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sand {

std::vector<std::uint64_t> hop_distribution(const std::vector<DiscoveryOutcome>& outcomes) {
    std::vector<std::uint64_t> hist;
    for (const auto& o : outcomes) {
        if (!o.success) continue;
        if (o.hops >= hist.size()) hist.resize(o.hops + 1, 0);
        ++hist[o.hops];
    }
    return hist;
}

MetricsSummary summarize(std::string scheme, const std::vector<DiscoveryOutcome>& outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("summarize: no outcomes");

    MetricsSummary s;
    s.scheme = std::move(scheme);
    s.requests = outcomes.size();
    double contacted_sum = 0.0;
    double hops_sum = 0.0;
    for (const auto& o : outcomes) {
        if (!o.success) continue;
        ++s.successes;
        contacted_sum += o.contacted;
        hops_sum += o.hops;
    }
    s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.requests);
    if (s.successes > 0) {
        s.avg_contacted = contacted_sum / static_cast<double>(s.successes);
        s.avg_hops = hops_sum / static_cast<double>(s.successes);
    }
    s.hop_histogram = hop_distribution(outcomes);
    return s;
}

void emit_csv(std::vector<MetricsSummary> summaries, std::ostream& out) {
    std::sort(summaries.begin(), summaries.end(),
              [](const MetricsSummary& a, const MetricsSummary& b) {
                  if (a.scheme != b.scheme) return a.scheme < b.scheme;
                  return a.features < b.features;
              });
    out << "scheme,features,requests,successes,success_rate,avg_contacted,avg_hops\n";
    char buf[160];
    for (const auto& s : summaries) {
        std::snprintf(buf, sizeof buf, "%s,%u,%llu,%llu,%.4f,%.4f,%.4f", s.scheme.c_str(),
                      s.features, static_cast<unsigned long long>(s.requests),
                      static_cast<unsigned long long>(s.successes), s.success_rate,
                      s.avg_contacted, s.avg_hops);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("results csv: write failure");
}

std::vector<MetricsSummary> parse_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "scheme,features,requests,successes,success_rate,avg_contacted,avg_hops")
        throw std::runtime_error("results csv: missing or unexpected header");

    std::vector<MetricsSummary> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw std::runtime_error("results csv: malformed row: " + line);
        MetricsSummary s;
        try {
            s.scheme = fields[0];
            s.features = static_cast<std::uint32_t>(std::stoul(fields[1]));
            s.requests = std::stoull(fields[2]);
            s.successes = std::stoull(fields[3]);
            s.success_rate = std::stod(fields[4]);
            s.avg_contacted = std::stod(fields[5]);
            s.avg_hops = std::stod(fields[6]);
        } catch (const std::exception&) {
            throw std::runtime_error("results csv: malformed row: " + line);
        }
        out.push_back(std::move(s));
    }
    return out;
}

void emit_histogram_csv(const std::vector<std::uint64_t>& histogram, std::ostream& out) {
    out << "hops,count\n";
    for (std::size_t h = 0; h < histogram.size(); ++h)
        out << h << ',' << histogram[h] << '\n';
    if (!out) throw std::runtime_error("histogram csv: write failure");
}

} // namespace sand
