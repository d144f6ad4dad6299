#include "amsom/experiment.hpp"

#include "amsom/baseline.hpp"
#include "amsom/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace amsom {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

ojson quality_json(const QualityReport& q) {
    ojson j;
    j["qe"] = q.qe;
    j["te"] = q.te;
    j["neurons"] = q.neurons;
    j["dead_units"] = q.dead_units;
    j["dead_fraction"] = q.dead_fraction;
    return j;
}

ojson stat_json(const Stat& s) { return ojson{{"mean", s.mean}, {"std", s.std}}; }

struct MetricRow {
    std::string name;
    std::vector<double> amsom;
    std::optional<std::vector<double>> som;  // unset for AMSOM-only measures
};

std::vector<MetricRow> metric_rows(const ExperimentResult& r) {
    const auto collect = [&](auto get) {
        std::vector<double> v;
        v.reserve(r.runs.size());
        for (const auto& run : r.runs) v.push_back(get(run));
        return v;
    };
    std::vector<MetricRow> rows;
    rows.push_back({"qe_train", collect([](const RunResult& x) { return x.amsom_train.qe; }),
                    collect([](const RunResult& x) { return x.som_train.qe; })});
    rows.push_back({"te_train", collect([](const RunResult& x) { return x.amsom_train.te; }),
                    collect([](const RunResult& x) { return x.som_train.te; })});
    rows.push_back({"qe_test", collect([](const RunResult& x) { return x.amsom_test.qe; }),
                    collect([](const RunResult& x) { return x.som_test.qe; })});
    rows.push_back({"te_test", collect([](const RunResult& x) { return x.amsom_test.te; }),
                    collect([](const RunResult& x) { return x.som_test.te; })});
    rows.push_back({"neurons", collect([](const RunResult& x) { return double(x.amsom_train.neurons); }),
                    collect([](const RunResult& x) { return double(x.som_train.neurons); })});
    rows.push_back({"dead_fraction", collect([](const RunResult& x) { return x.amsom_train.dead_fraction; }),
                    collect([](const RunResult& x) { return x.som_train.dead_fraction; })});
    rows.push_back({"epochs", collect([](const RunResult& x) { return double(x.amsom_epochs); }),
                    collect([](const RunResult& x) { return double(x.som_epochs); })});
    rows.push_back({"smooth_epochs", collect([](const RunResult& x) { return double(x.smooth_epochs); }), std::nullopt});
    return rows;
}

RunResult run_once(const ExperimentSpec& spec, const Dataset& data, int run) {
    RunResult out;
    out.run = run;
    out.seed = derive_seed(spec.config.seed, static_cast<std::uint64_t>(run));

    Split split = split_dataset(data, spec.split, derive_seed(out.seed, 0));
    Dataset train_set = std::move(split.train);
    Dataset test_set = std::move(split.test);
    if (spec.normalize) {
        const auto scaler = MinMaxScaler::fit(train_set);
        train_set = scaler.apply(train_set);
        test_set = scaler.apply(test_set);
    }

    // Neuron target from the full dataset size, so every split gets the same budget.
    const auto [rows, cols] = side_lengths(train_set, target_neuron_count(data.size()));
    out.lattice = LatticeSpec{rows, cols, spec.config.topology};
    MapState initial = build_lattice(out.lattice, train_set.dim());
    init_weights(initial, train_set, derive_seed(out.seed, 1));

    TrainConfig config = spec.config;
    config.seed = derive_seed(out.seed, 2);

    const TrainResult phase2 = train(train_set, initial, config);
    TrainResult smoothed = smooth(train_set, phase2.map, config);
    TrainResult som = train_batch_som(train_set, std::move(initial), config);

    out.amsom_epochs = phase2.epochs();
    out.smooth_epochs = smoothed.epochs();
    out.som_epochs = som.epochs();
    out.amsom_train = evaluate(train_set, smoothed.map);
    out.amsom_test = evaluate(test_set, smoothed.map);
    out.som_train = evaluate(train_set, som.map);
    out.som_test = evaluate(test_set, som.map);

    const auto snapshot = [&](const MapState& map, const char* model, const QualityReport& tr,
                              const QualityReport& te, int epochs) {
        MapSnapshot snap = make_snapshot(map, train_set);
        snap.config = to_json(spec);
        snap.config["model"] = model;
        snap.config["run"] = run;
        snap.config["run_seed"] = out.seed;
        snap.config["lattice"] = ojson{{"rows", rows}, {"cols", cols}, {"topology", to_string(out.lattice.topology)}};
        snap.metrics["train"] = quality_json(tr);
        snap.metrics["test"] = quality_json(te);
        snap.metrics["epochs"] = epochs;
        return snap;
    };
    out.amsom = snapshot(smoothed.map, "amsom", out.amsom_train, out.amsom_test, out.amsom_epochs);
    out.amsom.metrics["smooth_epochs"] = out.smooth_epochs;
    out.som = snapshot(som.map, "som", out.som_train, out.som_test, out.som_epochs);
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Dataset load_experiment_data(const ExperimentSpec& spec) {
    if (spec.dataset == kClusterDataset) return generate_cluster_dataset(spec.data_seed);
    return load_csv(spec.dataset, CsvOptions{spec.label_column}).data;
}

Stat summarize(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size()));
    return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunCallback& on_run) {
    spec.validate();
    return run_experiment(spec, load_experiment_data(spec), on_run);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& data, const RunCallback& on_run) {
    spec.validate();
    if (data.dim() < 2) throw ConfigError("AMSOM needs at least two features, the data has " + std::to_string(data.dim()));
    (void)split_sizes(data.size(), spec.split);

    ExperimentResult result;
    result.spec = spec;
    for (int run = 0; run < spec.runs; ++run) {
        try {
            result.runs.push_back(run_once(spec, data, run));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            result.failed_run = run;
            result.failure = e.what();
            break;
        }
        if (on_run) on_run(result.runs.back());
    }
    return result;
}

std::string summary_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "metric,amsom_mean,amsom_std,som_mean,som_std\n";
    for (const auto& row : metric_rows(result)) {
        const Stat a = summarize(row.amsom);
        out << row.name << ',' << num(a.mean) << ',' << num(a.std) << ',';
        if (row.som) {
            const Stat s = summarize(*row.som);
            out << num(s.mean) << ',' << num(s.std);
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

std::string runs_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "run,seed,rows,cols,amsom_qe,amsom_te,amsom_qe_test,amsom_te_test,amsom_neurons,amsom_dead,"
           "amsom_epochs,smooth_epochs,som_qe,som_te,som_qe_test,som_te_test,som_neurons,som_dead,som_epochs\n";
    for (const auto& r : result.runs) {
        out << r.run << ',' << r.seed << ',' << r.lattice.rows << ',' << r.lattice.cols << ',' << num(r.amsom_train.qe)
            << ',' << num(r.amsom_train.te) << ',' << num(r.amsom_test.qe) << ',' << num(r.amsom_test.te) << ','
            << r.amsom_train.neurons << ',' << r.amsom_train.dead_units << ',' << r.amsom_epochs << ','
            << r.smooth_epochs << ',' << num(r.som_train.qe) << ',' << num(r.som_train.te) << ','
            << num(r.som_test.qe) << ',' << num(r.som_test.te) << ',' << r.som_train.neurons << ','
            << r.som_train.dead_units << ',' << r.som_epochs << '\n';
    }
    return out.str();
}

std::string summary_text(const ExperimentResult& result) {
    std::ostringstream out;
    out << "dataset " << result.spec.dataset << ", " << result.runs.size() << " of " << result.spec.runs
        << " runs\n";
    if (!result.complete()) out << "INCOMPLETE: run " << *result.failed_run << " failed: " << result.failure << '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %12s %10s %12s %10s\n", "metric", "AMSOM mean", "std", "SOM mean", "std");
    out << line;
    for (const auto& row : metric_rows(result)) {
        const Stat a = summarize(row.amsom);
        if (row.som) {
            const Stat s = summarize(*row.som);
            std::snprintf(line, sizeof line, "%-14s %12.4f %10.4f %12.4f %10.4f\n", row.name.c_str(), a.mean, a.std,
                          s.mean, s.std);
        } else {
            std::snprintf(line, sizeof line, "%-14s %12.4f %10.4f %12s %10s\n", row.name.c_str(), a.mean, a.std, "-",
                          "-");
        }
        out << line;
    }
    return out.str();
}

ojson summary_json(const ExperimentResult& result) {
    ojson j;
    j["spec"] = to_json(result.spec);
    j["runs_completed"] = result.runs.size();
    j["complete"] = result.complete();
    if (!result.complete()) {
        j["failed_run"] = *result.failed_run;
        j["failure"] = result.failure;
    }
    ojson amsom = ojson::object();
    ojson som = ojson::object();
    for (const auto& row : metric_rows(result)) {
        amsom[row.name] = stat_json(summarize(row.amsom));
        if (row.som) som[row.name] = stat_json(summarize(*row.som));
    }
    j["amsom"] = std::move(amsom);
    j["som"] = std::move(som);
    return j;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

    write_file(dir / "summary.csv", summary_csv(result));
    write_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
    write_file(dir / "summary.txt", summary_text(result));
    write_file(dir / "runs.csv", runs_csv(result));
    for (const auto& run : result.runs) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "run_%02d", run.run);
        export_snapshot_json(run.amsom, dir / (std::string(stem) + "_amsom.json"));
        export_snapshot_json(run.som, dir / (std::string(stem) + "_som.json"));
        if (result.spec.svg) {
            render_svg(run.amsom, dir / (std::string(stem) + "_amsom.svg"));
            render_svg(run.som, dir / (std::string(stem) + "_som.svg"));
        }
    }
}

}  // namespace amsom
