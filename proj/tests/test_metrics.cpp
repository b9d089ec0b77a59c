#include <doctest.h>

#include <sstream>

#include "sand/metrics.hpp"
#include "sand/rng.hpp"

using namespace sand;

namespace {

DiscoveryOutcome success(std::uint32_t hops, std::uint32_t contacted) {
    DiscoveryOutcome o;
    o.success = true;
    o.hops = hops;
    o.contacted = contacted;
    return o;
}

DiscoveryOutcome failure() {
    DiscoveryOutcome o;
    o.failure = FailureReason::TtlExpired;
    return o;
}

} // namespace

TEST_CASE("summary arithmetic over mixed outcomes") {
    const MetricsSummary s = summarize("sand", {success(2, 4), failure()});
    CHECK(s.requests == 2);
    CHECK(s.successes == 1);
    CHECK(s.success_rate == 0.5);
    CHECK(s.avg_hops == 2.0);
    CHECK(s.avg_contacted == 4.0);
    CHECK(s.hop_histogram == std::vector<std::uint64_t>{0, 0, 1});
}

TEST_CASE("summarize rejects an empty outcome sequence") {
    CHECK_THROWS_AS(summarize("sand", {}), std::invalid_argument);
}

TEST_CASE("summary ignores order of outcomes") {
    std::vector<DiscoveryOutcome> outcomes = {success(1, 2), failure(), success(5, 9),
                                              success(1, 7), failure(), success(3, 3)};
    const MetricsSummary base = summarize("x", outcomes);
    Rng rng(404);
    for (int rep = 0; rep < 10; ++rep) {
        rng.shuffle(outcomes);
        const MetricsSummary s = summarize("x", outcomes);
        CHECK(s.success_rate == base.success_rate);
        CHECK(s.avg_hops == base.avg_hops);
        CHECK(s.avg_contacted == base.avg_contacted);
        CHECK(s.hop_histogram == base.hop_histogram);
    }
}

TEST_CASE("hop distribution counts successes per hop value") {
    CHECK(hop_distribution({failure(), failure()}).empty());
    CHECK(hop_distribution({}).empty());

    const auto hist = hop_distribution({success(3, 1), success(3, 1), success(5, 1)});
    CHECK(hist == std::vector<std::uint64_t>{0, 0, 0, 2, 0, 1});

    // totals match the summary's success count
    std::vector<DiscoveryOutcome> outcomes;
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        if (rng.below(3) == 0)
            outcomes.push_back(failure());
        else
            outcomes.push_back(success(static_cast<std::uint32_t>(rng.below(10)), 1));
    }
    const auto h = hop_distribution(outcomes);
    std::uint64_t total = 0;
    for (auto c : h) total += c;
    CHECK(total == summarize("x", outcomes).successes);
}

TEST_CASE("results csv is sorted, fixed-precision, and byte-deterministic") {
    MetricsSummary a = summarize("sand", {success(2, 4), failure()});
    a.features = 4000;
    MetricsSummary b = summarize("sand", {success(3, 6)});
    b.features = 2000;
    MetricsSummary c = summarize("broadcast", {success(1, 9)});
    c.features = 4000;

    std::ostringstream out1;
    emit_csv({a, b, c}, out1);
    const std::string expected =
        "scheme,features,requests,successes,success_rate,avg_contacted,avg_hops\n"
        "broadcast,4000,1,1,1.0000,9.0000,1.0000\n"
        "sand,2000,1,1,1.0000,6.0000,3.0000\n"
        "sand,4000,2,1,0.5000,4.0000,2.0000\n";
    CHECK(out1.str() == expected);

    std::ostringstream out2;
    emit_csv({c, b, a}, out2); // different input order, same bytes
    CHECK(out2.str() == expected);

    std::ostringstream empty;
    emit_csv({}, empty);
    CHECK(empty.str() ==
          "scheme,features,requests,successes,success_rate,avg_contacted,avg_hops\n");
}

TEST_CASE("results csv parses back to the printed precision") {
    MetricsSummary a = summarize("sand", {success(2, 4), failure(), success(7, 19)});
    a.features = 6000;
    MetricsSummary b = summarize("centralized", {success(1, 2)});
    b.features = 2000;

    std::ostringstream out;
    emit_csv({a, b}, out);
    std::istringstream in(out.str());
    const auto parsed = parse_results_csv(in);
    REQUIRE(parsed.size() == 2);

    std::ostringstream again;
    emit_csv(parsed, again);
    CHECK(again.str() == out.str());

    std::istringstream bad("nope\n");
    CHECK_THROWS_AS(parse_results_csv(bad), std::runtime_error);
}

TEST_CASE("histogram csv lists every hop value") {
    std::ostringstream out;
    emit_histogram_csv({0, 2, 5}, out);
    CHECK(out.str() == "hops,count\n0,0\n1,2\n2,5\n");

    std::ostringstream empty;
    emit_histogram_csv({}, empty);
    CHECK(empty.str() == "hops,count\n");
}
