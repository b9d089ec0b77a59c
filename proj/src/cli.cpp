#include "sand/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sand/experiment.hpp"
#include "sand/metrics.hpp"
#include "sand/network.hpp"
#include "sand/ranking.hpp"

namespace sand {

namespace {

struct CliOptions {
    ExperimentConfig cfg;
    std::vector<std::string> scheme_names = {"sand", "broadcast", "centralized"};
    std::vector<std::uint32_t> feature_counts = {2000, 4000, 6000, 8000, 10000};
    std::uint32_t generate_features = 0; // generate: 0 = topology only
    std::uint32_t generate_per_device = 0;
    std::string out = "out";
    std::string trace_file;
    std::string rank_csv;
    std::vector<std::string> report_inputs;
};

const std::map<std::string, TopologyKind> kTopologies = {
    {"random", TopologyKind::Random},
    {"scale-free", TopologyKind::ScaleFree},
};
const std::map<std::string, OverlayMode> kOverlays = {
    {"literal", OverlayMode::Literal},
    {"enriched", OverlayMode::Enriched},
};

void add_topology_flags(CLI::App& cmd, CliOptions& opt) {
    cmd.add_option("--topology", opt.cfg.topology, "Topology kind")
        ->transform(CLI::CheckedTransformer(kTopologies, CLI::ignore_case))
        ->capture_default_str();
    cmd.add_option("--devices", opt.cfg.devices, "Device count")->capture_default_str();
    cmd.add_option("--dmin", opt.cfg.params.degree_min, "Random topology: minimum degree")
        ->capture_default_str();
    cmd.add_option("--dmax", opt.cfg.params.degree_max, "Random topology: maximum degree")
        ->capture_default_str();
    cmd.add_option("--attach", opt.cfg.params.attach,
                   "Scale-free topology: links per joining device")
        ->capture_default_str();
    cmd.add_option("--overlay", opt.cfg.overlay_mode, "Overlay construction mode")
        ->transform(CLI::CheckedTransformer(kOverlays, CLI::ignore_case))
        ->capture_default_str();
    cmd.add_option("--seed", opt.cfg.seed, "Master seed (all outputs derive from it)")
        ->required();
}

// Flags shared by run and sweep.
void add_experiment_flags(CLI::App& cmd, CliOptions& opt) {
    add_topology_flags(cmd, opt);
    cmd.add_option("--features", opt.cfg.features_total, "Feature-pool size")
        ->capture_default_str();
    cmd.add_option("--features-per-device", opt.cfg.features_per_device, "Features per device")
        ->capture_default_str();
    cmd.add_option("--requests", opt.cfg.requests, "Discovery request count")
        ->capture_default_str();
    cmd.add_option("--ttl", opt.cfg.ttl_ms, "Request time-to-live in ms")->capture_default_str();
    cmd.add_option("--depth-limit", opt.cfg.depth_limit, "Search depth limit")
        ->capture_default_str();
    cmd.add_option("--schemes", opt.scheme_names, "Schemes to run")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--threads", opt.cfg.threads, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();
}

void apply_schemes(CliOptions& opt) {
    opt.cfg.schemes.clear();
    for (const auto& name : opt.scheme_names) opt.cfg.schemes.push_back(scheme_from_name(name));
}

void print_summaries(const std::vector<SchemeResult>& results) {
    for (const auto& r : results) {
        const auto& s = r.summary;
        std::printf("%-11s F=%-6u success %6.2f%%  avg contacted %10.1f  avg hops %6.2f\n",
                    s.scheme.c_str(), s.features, 100.0 * s.success_rate, s.avg_contacted,
                    s.avg_hops);
    }
}

void write_sand_trace(const Network& net, const ExperimentConfig& cfg, const std::string& path) {
    const auto holders = build_feature_index(net);
    const RequestWorkload workload = make_workload(net, holders, cfg);
    const RankTable ranks = build_rank_table(net);
    const SandRouter router(net, ranks);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open trace file: " + path);
    out << "step,from,to,action,elapsed_ms\n";
    for (std::size_t i = 0; i < workload.requests.size(); ++i) {
        const auto& req = workload.requests[i];
        out << "# request " << i << " source=" << req.source
            << " feature=" << req.desired_feature << '\n';
        router.discover(req, &out);
    }
}

int cmd_generate(CliOptions& opt) {
    Network net = generate_topology(opt.cfg.topology, opt.cfg.devices, opt.cfg.params,
                                    opt.cfg.seed);
    if (opt.generate_features > 0) {
        assign_features(net, opt.generate_features,
                        opt.generate_per_device > 0 ? opt.generate_per_device : 3, opt.cfg.seed);
        build_overlay(net, opt.cfg.overlay_mode);
    }
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + opt.out);
    save_network(net, out);
    std::printf("wrote %s: %u devices, %zu comm edges, %zu social edges\n", opt.out.c_str(),
                net.n, net.comm.size(), net.overlay.size());
    return 0;
}

int cmd_run(CliOptions& opt) {
    apply_schemes(opt);
    const Network net = build_network(opt.cfg);
    const ExperimentResult result = run_schemes(net, opt.cfg);
    write_experiment_files(net, result.schemes, opt.out);

    if (!opt.rank_csv.empty()) {
        std::ofstream out(opt.rank_csv, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open rank csv: " + opt.rank_csv);
        write_rank_csv(build_rank_table(net), out);
    }
    if (!opt.trace_file.empty()) write_sand_trace(net, opt.cfg, opt.trace_file);

    print_summaries(result.schemes);
    std::printf("results in %s\n", opt.out.c_str());
    return 0;
}

int cmd_sweep(CliOptions& opt) {
    apply_schemes(opt);
    const auto results = sweep_features_files(opt.cfg, opt.feature_counts, opt.out);
    print_summaries(results);
    std::printf("results in %s\n", opt.out.c_str());
    return 0;
}

int cmd_report(CliOptions& opt) {
    std::vector<MetricsSummary> merged;
    for (const auto& path : opt.report_inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open results csv: " + path);
        auto rows = parse_results_csv(in);
        merged.insert(merged.end(), rows.begin(), rows.end());
    }
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + opt.out);
    emit_csv(std::move(merged), out);
    std::printf("merged %zu files into %s\n", opt.report_inputs.size(), opt.out.c_str());
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CliOptions opt;

    CLI::App app{"Social-aware IoT device-discovery simulator"};
    app.require_subcommand(1);
    // config keys match flag names inside a [generate] / [run] / [sweep]
    // section; the flag itself belongs to the top level: sand --config F run
    app.set_config("--config", "", "Read options from a config file");

    CLI::App* generate = app.add_subcommand("generate", "Generate a network and write it to a file");
    generate->configurable();
    add_topology_flags(*generate, opt);
    generate->add_option("--features", opt.generate_features,
                         "Also assign features from a pool of this size and build the overlay");
    generate->add_option("--features-per-device", opt.generate_per_device,
                         "Features per device when --features is given");
    generate->add_option("--out", opt.out, "Output network file")->required();

    CLI::App* run = app.add_subcommand("run", "Run one experiment and write result files");
    run->configurable();
    add_experiment_flags(*run, opt);
    run->add_option("--out", opt.out, "Output directory")->capture_default_str();
    run->add_option("--trace", opt.trace_file,
                    "Write a per-request token-move trace of the sand scheme");
    run->add_option("--rank-csv", opt.rank_csv, "Also dump the device rank table as CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "Run the feature-pool sweep on one topology");
    sweep->configurable();
    add_experiment_flags(*sweep, opt);
    sweep->add_option("--feature-counts", opt.feature_counts, "Feature-pool sizes to sweep")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--out", opt.out, "Output directory")->capture_default_str();

    CLI::App* report = app.add_subcommand("report", "Merge result CSV files into one");
    report->add_option("inputs", opt.report_inputs, "Result CSV files")->required();
    report->add_option("--out", opt.out, "Merged output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e); // prints the one-line diagnostic
    }

    try {
        if (generate->parsed()) return cmd_generate(opt);
        if (run->parsed()) return cmd_run(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (report->parsed()) return cmd_report(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace sand
