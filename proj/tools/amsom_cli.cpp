// amsom: train a single map, run the benchmark protocol, or render a snapshot.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime error.

#include "amsom/baseline.hpp"
#include "amsom/config.hpp"
#include "amsom/error.hpp"
#include "amsom/experiment.hpp"
#include "amsom/snapshot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace amsom;

enum ExitCode { kOk = 0, kConfig = 1, kData = 2, kRuntime = 3 };

KeyValues overrides(const std::vector<std::string>& sets) {
    KeyValues kv;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
        kv.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return kv;
}

struct TrainArgs {
    std::string data;
    std::string config_file;
    std::string label_column;
    std::vector<std::string> sets;
    std::string out = "amsom-out";
    bool normalize = false;
    bool baseline = false;
    std::uint64_t data_seed = 7;
};

void write_epoch_log(const std::filesystem::path& path, const TrainResult& phase2, const TrainResult& phase3) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "phase,epoch,sigma,mqe,neurons,edges\n";
    char line[128];
    for (const auto* result : {&phase2, &phase3}) {
        const char* phase = result == &phase2 ? "train" : "smooth";
        for (const auto& r : result->reports) {
            std::snprintf(line, sizeof line, "%s,%d,%.6f,%.8f,%ld,%ld\n", phase, r.epoch, r.sigma, r.mqe,
                          static_cast<long>(r.neurons), r.edges);
            out << line;
        }
    }
}

void print_quality(const char* model, const QualityReport& q) {
    std::printf("%-6s QE %.4f  TE %.4f  neurons %ld  dead %ld\n", model, q.qe, q.te, static_cast<long>(q.neurons),
                static_cast<long>(q.dead_units));
}

int run_train(const TrainArgs& args) {
    KeyValues kv;
    if (!args.config_file.empty()) kv = read_key_values(args.config_file);
    for (auto& entry : overrides(args.sets)) kv.push_back(std::move(entry));
    const TrainConfig config = parse_train_config(kv);

    Dataset data = args.data == kClusterDataset
                       ? generate_cluster_dataset(args.data_seed)
                       : load_csv(args.data, CsvOptions{args.label_column.empty()
                                                            ? std::nullopt
                                                            : std::optional<std::string>(args.label_column)})
                             .data;
    if (args.normalize) data = MinMaxScaler::fit(data).apply(data);
    if (data.dim() < 2) throw ConfigError("AMSOM needs at least two features");

    const auto [rows, cols] = side_lengths(data, target_neuron_count(data.size()));
    MapState initial = build_lattice({rows, cols, config.topology}, data.dim());
    init_weights(initial, data, derive_seed(config.seed, 1));
    std::printf("grid %dx%d, %ld patterns, %ld features\n", rows, cols, static_cast<long>(data.size()),
                static_cast<long>(data.dim()));

    const TrainResult phase2 = train(data, initial, config);
    const TrainResult phase3 = smooth(data, phase2.map, config);
    const QualityReport quality = evaluate(data, phase3.map);
    std::printf("AMSOM: %d training + %d smoothing epochs\n", phase2.epochs(), phase3.epochs());
    print_quality("AMSOM", quality);

    const std::filesystem::path dir = args.out;
    std::filesystem::create_directories(dir);
    MapSnapshot snap = make_snapshot(phase3.map, data);
    snap.config = to_json(config);
    snap.config["model"] = "amsom";
    snap.config["dataset"] = args.data;
    snap.metrics["train"] = {{"qe", quality.qe}, {"te", quality.te}, {"dead_units", quality.dead_units}};
    snap.metrics["epochs"] = phase2.epochs();
    snap.metrics["smooth_epochs"] = phase3.epochs();
    export_snapshot_json(snap, dir / "amsom.json");
    render_svg(snap, dir / "amsom.svg");
    write_epoch_log(dir / "epochs.csv", phase2, phase3);

    if (args.baseline) {
        const TrainResult som = train_batch_som(data, std::move(initial), config);
        const QualityReport q = evaluate(data, som.map);
        std::printf("SOM: %d epochs\n", som.epochs());
        print_quality("SOM", q);
        MapSnapshot s = make_snapshot(som.map, data);
        s.config = to_json(config);
        s.config["model"] = "som";
        s.config["dataset"] = args.data;
        s.metrics["train"] = {{"qe", q.qe}, {"te", q.te}, {"dead_units", q.dead_units}};
        s.metrics["epochs"] = som.epochs();
        export_snapshot_json(s, dir / "som.json");
        render_svg(s, dir / "som.svg");
    }
    std::printf("wrote %s\n", dir.string().c_str());
    return kOk;
}

struct BenchArgs {
    std::string spec_file;
    std::vector<std::string> sets;
    std::string out;
    bool quiet = false;
};

int run_bench(const BenchArgs& args) {
    KeyValues kv = read_key_values(args.spec_file);
    for (auto& entry : overrides(args.sets)) {
        std::erase_if(kv, [&](const auto& e) { return e.first == entry.first; });
        kv.push_back(std::move(entry));
    }
    ExperimentSpec spec = parse_experiment_spec(kv);
    if (!args.out.empty()) spec.output_dir = args.out;

    const Dataset data = load_experiment_data(spec);
    const ExperimentResult result = run_experiment(spec, data, [&](const RunResult& r) {
        if (args.quiet) return;
        std::fprintf(stderr, "run %2d  AMSOM QE %.4f TE %.4f M %ld | SOM QE %.4f TE %.4f M %ld\n", r.run,
                     r.amsom_train.qe, r.amsom_train.te, static_cast<long>(r.amsom_train.neurons), r.som_train.qe,
                     r.som_train.te, static_cast<long>(r.som_train.neurons));
    });
    write_experiment(result, spec.output_dir);
    std::cout << summary_text(result);
    if (!result.complete()) {
        std::fprintf(stderr, "error: run %d failed: %s\n", *result.failed_run, result.failure.c_str());
        return kRuntime;
    }
    return kOk;
}

struct RenderArgs {
    std::string snapshot;
    std::string out;
    int width = 800;
    int height = 800;
};

int run_render(const RenderArgs& args) {
    if (args.width < 100 || args.height < 100) throw ConfigError("canvas must be at least 100x100");
    const MapSnapshot snap = load_snapshot_json(args.snapshot);
    std::filesystem::path out = args.out;
    if (out.empty()) out = std::filesystem::path(args.snapshot).replace_extension(".svg");
    SvgOptions options;
    options.width = args.width;
    options.height = args.height;
    render_svg(snap, out, options);
    std::printf("wrote %s\n", out.string().c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive moving self-organizing maps"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train one AMSOM map on a dataset");
    train_cmd->add_option("data", train_args.data, "CSV file, or 'cluster' for the synthetic dataset")->required();
    train_cmd->add_option("-c,--config", train_args.config_file, "key=value config file");
    train_cmd->add_option("-s,--set", train_args.sets, "Override one config key (key=value)");
    train_cmd->add_option("-l,--label-column", train_args.label_column, "Class column index or header name");
    train_cmd->add_option("-o,--out", train_args.out, "Output directory")->capture_default_str();
    train_cmd->add_option("--data-seed", train_args.data_seed, "Seed of the synthetic dataset")->capture_default_str();
    train_cmd->add_flag("--normalize", train_args.normalize, "Min-max scale features first");
    train_cmd->add_flag("--baseline", train_args.baseline, "Also train the batch SOM from the same initial map");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run the repeated-split benchmark from an experiment spec");
    bench_cmd->add_option("spec", bench_args.spec_file, "key=value experiment spec")->required();
    bench_cmd->add_option("-s,--set", bench_args.sets, "Override one spec key (key=value)");
    bench_cmd->add_option("-o,--out", bench_args.out, "Output directory (overrides output_dir)");
    bench_cmd->add_flag("-q,--quiet", bench_args.quiet, "No per-run progress");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "Draw a snapshot JSON as SVG");
    render_cmd->add_option("snapshot", render_args.snapshot, "Snapshot JSON")->required();
    render_cmd->add_option("-o,--out", render_args.out, "SVG path (default: snapshot name with .svg)");
    render_cmd->add_option("--width", render_args.width)->capture_default_str();
    render_cmd->add_option("--height", render_args.height)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*train_cmd) return run_train(train_args);
        if (*bench_cmd) return run_bench(bench_args);
        return run_render(render_args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
}
