// Command-line front end for the time-multiplexed spiking network pipeline:
// dataset generation/ingestion, drive encoding, reservoir simulation, readout
// training, evaluation and grid sweeps. Every output is reproducible from the
// master seed; all artifacts are plain text plus JSON manifests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmsnn/dataset.hpp"
#include "tmsnn/encoding.hpp"
#include "tmsnn/errors.hpp"
#include "tmsnn/eval.hpp"
#include "tmsnn/io.hpp"
#include "tmsnn/reservoir.hpp"
#include "tmsnn/rng.hpp"
#include "tmsnn/training.hpp"
#include "tmsnn/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tmsnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

MaskDistribution parse_mask_distribution(const std::string& name)
{
    if (name == "uniform01") return MaskDistribution::uniform01;
    if (name == "uniform_pm1") return MaskDistribution::uniform_pm1;
    if (name == "binary_pm1") return MaskDistribution::binary_pm1;
    throw ParameterError("unknown mask distribution: " + name);
}

ClusterLabeling parse_labeling(const std::string& name)
{
    if (name == "hyperplane") return ClusterLabeling::hyperplane;
    if (name == "uniform_random") return ClusterLabeling::uniform_random;
    throw ParameterError("unknown labeling mode: " + name);
}

TrainingMethod parse_method(const std::string& name)
{
    if (name == "ols") return TrainingMethod::ols;
    if (name == "significance") return TrainingMethod::significance;
    throw ParameterError("unknown training method: " + name);
}

// Grid syntax: "a,b,c" or "lo:hi" or "lo:hi:step".
std::vector<int> parse_grid(const std::string& text)
{
    std::vector<int> grid;
    if (text.find(':') != std::string::npos) {
        int lo = 0, hi = 0, step = 1;
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        lo = std::stoi(text.substr(0, first));
        if (second == std::string::npos) {
            hi = std::stoi(text.substr(first + 1));
        } else {
            hi = std::stoi(text.substr(first + 1, second - first - 1));
            step = std::stoi(text.substr(second + 1));
        }
        if (step < 1 || hi < lo) throw ParameterError("bad grid range: " + text);
        for (int v = lo; v <= hi; v += step) grid.push_back(v);
        return grid;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string token =
            text.substr(pos, (comma == std::string::npos ? text.size() : comma) - pos);
        if (!token.empty()) grid.push_back(std::stoi(token));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (grid.empty()) throw ParameterError("empty grid: " + text);
    return grid;
}

void write_manifest(const fs::path& path, const json& body)
{
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << body.dump(2) << '\n';
}

json manifest_header(const std::string& command)
{
    json j;
    j["tool"] = "tmsnn";
    j["version"] = tmsnn::version;
    j["command"] = command;
    return j;
}

struct GenerateOptions {
    std::string out;
    std::uint64_t master_seed = 1;
    MadelonParams params;
    std::string labeling = "hyperplane";
};

int cmd_generate(GenerateOptions& opt)
{
    opt.params.labeling = parse_labeling(opt.labeling);
    opt.params.seed = derive_seed(opt.master_seed, "dataset");
    const Dataset ds = generate_madelon(opt.params);
    save_dataset(opt.out, ds, &opt.params);

    json manifest = manifest_header("generate");
    manifest["master_seed"] = opt.master_seed;
    manifest["dataset_seed"] = opt.params.seed;
    manifest["n_points"] = opt.params.n_points;
    manifest["n_features"] = opt.params.n_features();
    manifest["class_counts"] = {ds.class_counts()[0], ds.class_counts()[1]};
    manifest["files"] = {"dataset.data", "dataset.labels", "dataset.meta"};
    write_manifest(fs::path(opt.out) / "generate_manifest.json", manifest);
    return kExitOk;
}

struct LoadOptions {
    std::string data_file;
    std::string labels_file;
    std::string out;
    bool standardize_features = false;
};

int cmd_load(LoadOptions& opt)
{
    Dataset ds = load_madelon_files(opt.data_file, opt.labels_file);
    std::vector<std::string> warnings;
    if (opt.standardize_features) ds = standardize(ds, &warnings);
    save_dataset(opt.out, ds, nullptr);

    json manifest = manifest_header("load");
    manifest["data_file"] = opt.data_file;
    manifest["labels_file"] = opt.labels_file;
    manifest["standardized"] = opt.standardize_features;
    manifest["n_points"] = ds.n_points();
    manifest["n_features"] = ds.n_features();
    manifest["warnings"] = warnings;
    write_manifest(fs::path(opt.out) / "load_manifest.json", manifest);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return kExitOk;
}

struct RunOptions {
    std::string data_dir;
    std::string out;
    std::uint64_t master_seed = 1;
    int n_v = 2048;
    std::string mask_dist = "uniform_pm1";
    std::optional<std::uint64_t> mask_seed;
    bool standardize_features = false;
    DriveConfig drive;
    NeuronParams neuron;
    std::optional<double> threshold;
    double calibrate_density = 0.07;
    std::optional<std::uint64_t> noise_seed;
    int export_traces = 0;
    bool export_drive = false;
    bool export_temporal_map = false;
};

int cmd_run(RunOptions& opt)
{
    Dataset ds = load_dataset(opt.data_dir);
    std::vector<std::string> warnings;
    if (opt.standardize_features) ds = standardize(ds, &warnings);

    const std::uint64_t mask_seed =
        opt.mask_seed ? *opt.mask_seed : derive_seed(opt.master_seed, "mask");
    const Mask mask =
        make_mask(ds.n_features(), opt.n_v, parse_mask_distribution(opt.mask_dist), mask_seed);
    const EncodedDataset encoded = encode_dataset(ds, mask, opt.drive);

    NeuronParams neuron = opt.neuron;
    neuron.noise_seed = opt.noise_seed ? *opt.noise_seed : derive_seed(opt.master_seed, "noise");
    CalibrationResult calibration{};
    if (opt.threshold) {
        neuron.threshold = *opt.threshold;
        calibration.threshold = neuron.threshold;
    } else {
        calibration = calibrate_threshold(encoded.signals, neuron, opt.calibrate_density);
        neuron.threshold = calibration.threshold;
    }

    const SpikeRaster raster = run_reservoir(encoded.signals, neuron);

    fs::create_directories(opt.out);
    write_raster_csv(fs::path(opt.out) / "raster.csv", raster.bits);
    write_labels(fs::path(opt.out) / "labels.csv", ds.labels);

    if (opt.export_drive) write_drive_csv(fs::path(opt.out) / "drive.csv", encoded.signals);
    for (int i = 0; i < opt.export_traces && i < static_cast<int>(encoded.signals.size()); ++i) {
        const SimulationResult sim = simulate(encoded.signals[static_cast<std::size_t>(i)], neuron, true);
        write_trace_csv(fs::path(opt.out) / ("membrane_" + std::to_string(i) + ".csv"),
                        sim.trace_times, sim.trace);
        Eigen::VectorXd times, values;
        render_spike_waveform(sim.spike_times, encoded.signals[static_cast<std::size_t>(i)], neuron,
                              times, values);
        write_trace_csv(fs::path(opt.out) / ("output_" + std::to_string(i) + ".csv"), times, values);
    }
    if (opt.export_temporal_map) {
        const TemporalMap map = temporal_map(raster, ds.labels);
        write_temporal_map(opt.out, map);
    }

    json manifest = manifest_header("run");
    manifest["master_seed"] = opt.master_seed;
    manifest["n_points"] = ds.n_points();
    manifest["n_v"] = opt.n_v;
    manifest["n_pad"] = opt.drive.n_pad;
    manifest["theta_s"] = opt.drive.theta_s;
    manifest["mask"] = {{"distribution", opt.mask_dist}, {"seed", mask_seed}};
    manifest["standardized"] = opt.standardize_features;
    manifest["drive_scale"] = {{"gain", encoded.scale.gain}, {"offset", encoded.scale.offset}};
    manifest["neuron"] = {{"tau_s", neuron.tau_s},
                          {"dt_s", neuron.dt_s},
                          {"threshold", neuron.threshold},
                          {"reset_value", neuron.reset_value},
                          {"refractory_s", neuron.refractory_s},
                          {"spike_width_s", neuron.spike_width_s},
                          {"input_gain", neuron.input_gain},
                          {"bias", neuron.bias},
                          {"noise_sigma", neuron.noise_sigma},
                          {"noise_seed", neuron.noise_seed}};
    manifest["calibration"] = {{"requested_density", opt.threshold ? 0.0 : opt.calibrate_density},
                               {"achieved_density", calibration.density},
                               {"threshold", neuron.threshold}};
    manifest["raster_density"] = raster.density();
    manifest["per_datapoint_duration_s"] =
        static_cast<double>(opt.n_v + opt.drive.n_pad) * opt.drive.theta_s;
    manifest["total_simulated_time_s"] = static_cast<double>(ds.n_points()) *
                                         static_cast<double>(opt.n_v + opt.drive.n_pad) *
                                         opt.drive.theta_s;
    manifest["warnings"] = warnings;
    write_manifest(fs::path(opt.out) / "run_manifest.json", manifest);
    return kExitOk;
}

struct EvalOptions {
    std::string raster_file;
    std::string labels_file;
    std::string out;
    std::string method = "both";
    int n_t = 15;
    int n_n = 20;
    int repeats = 10;
    std::uint64_t master_seed = 1;
    bool export_weights = false;
};

// Training split of the first cross-validation repeat, for weight export.
TrainingSet first_repeat_split(const SpikeRaster& raster, const Eigen::VectorXi& labels, int n_t,
                               std::uint64_t cv_seed)
{
    TrainingSet train;
    train.n_t = n_t;
    train.selection_seed = derive_seed(cv_seed, "cv-split", 0);
    Rng rng(train.selection_seed);
    std::vector<Eigen::Index> rows;
    for (const int cls : {-1, +1}) {
        std::vector<Eigen::Index> pool;
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) pool.push_back(i);
        rng.shuffle(pool);
        rows.insert(rows.end(), pool.begin(), pool.begin() + n_t);
    }
    std::sort(rows.begin(), rows.end());
    train.raster.resize(static_cast<Eigen::Index>(rows.size()), raster.n_nodes());
    train.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        train.raster.row(static_cast<Eigen::Index>(i)) = raster.bits.row(rows[i]);
        train.labels[static_cast<Eigen::Index>(i)] = labels[rows[i]];
    }
    return train;
}

int cmd_eval(EvalOptions& opt)
{
    SpikeRaster raster;
    raster.bits = read_raster_csv(opt.raster_file);
    const Eigen::VectorXi labels = read_labels(opt.labels_file);
    const std::uint64_t cv_seed = derive_seed(opt.master_seed, "cv");

    std::vector<std::pair<std::string, TrainingMethod>> methods;
    if (opt.method == "both") {
        methods = {{"ols", TrainingMethod::ols}, {"significance", TrainingMethod::significance}};
    } else {
        methods = {{opt.method, parse_method(opt.method)}};
    }

    fs::create_directories(opt.out);
    json manifest = manifest_header("eval");
    manifest["master_seed"] = opt.master_seed;
    manifest["cv_seed"] = cv_seed;
    manifest["n_t"] = opt.n_t;
    manifest["repeats"] = opt.repeats;

    for (const auto& [name, method] : methods) {
        const std::optional<int> n_n =
            method == TrainingMethod::significance ? std::optional<int>(opt.n_n) : std::nullopt;
        const EvalResult result =
            cross_validate(raster, labels, method, opt.n_t, n_n, opt.repeats, cv_seed);
        write_eval_csv(fs::path(opt.out) / ("eval_" + name + ".csv"), result, name);
        write_confusion_csv(fs::path(opt.out) / ("confusion_" + name + ".csv"), result.confusion);
        std::ofstream txt(fs::path(opt.out) / ("confusion_" + name + ".txt"));
        txt << render_confusion(result.confusion);
        manifest["results"][name] = {{"accuracy", result.accuracy},
                                     {"n_n", n_n ? json(*n_n) : json(nullptr)}};
        if (opt.export_weights) {
            const TrainingSet train = first_repeat_split(raster, labels, opt.n_t, cv_seed);
            if (method == TrainingMethod::ols) {
                write_weights_csv(fs::path(opt.out) / "weights_ols.csv", train_ols(train));
            } else {
                const SignificanceTable table = score(count_spikes(train));
                write_significance_csv(fs::path(opt.out) / "significance_table.csv", table);
                write_weights_csv(fs::path(opt.out) / "weights_significance.csv",
                                  select_top_nodes(table, opt.n_n));
            }
            manifest["weight_export"] = {{"split_seed", derive_seed(cv_seed, "cv-split", 0)},
                                         {"n_t", opt.n_t}};
        }
        std::cout << name << ": accuracy " << format_double(result.accuracy) << '\n'
                  << render_confusion(result.confusion);
    }
    write_manifest(fs::path(opt.out) / "eval_manifest.json", manifest);
    return kExitOk;
}

struct SweepOptions {
    std::string raster_file;
    std::string labels_file;
    std::string out;
    std::string method = "significance";
    std::string n_t_grid = "5,10,20,40,80";
    std::string n_n_grid = "1,2,4,8,16,32,64";
    int repeats = 10;
    std::uint64_t master_seed = 1;
};

int cmd_sweep(SweepOptions& opt)
{
    SpikeRaster raster;
    raster.bits = read_raster_csv(opt.raster_file);
    const Eigen::VectorXi labels = read_labels(opt.labels_file);
    const std::uint64_t cv_seed = derive_seed(opt.master_seed, "cv");

    const SweepResult result =
        sweep(raster, labels, parse_method(opt.method), parse_grid(opt.n_t_grid),
              parse_grid(opt.n_n_grid), opt.repeats, cv_seed);

    fs::create_directories(opt.out);
    write_sweep_csv(fs::path(opt.out) / "sweep_rows.csv", fs::path(opt.out) / "sweep_cells.csv",
                    result);

    json manifest = manifest_header("sweep");
    manifest["master_seed"] = opt.master_seed;
    manifest["cv_seed"] = cv_seed;
    manifest["method"] = opt.method;
    manifest["n_t_grid"] = result.n_t_grid;
    manifest["n_n_grid"] = result.n_n_grid;
    manifest["repeats"] = opt.repeats;
    write_manifest(fs::path(opt.out) / "sweep_manifest.json", manifest);

    for (const auto& row : result.rows)
        std::cout << "n_t " << row.n_t << ": best mean accuracy "
                  << format_double(row.best_mean_accuracy)
                  << (row.best_n_n_mean ? " at n_n " + std::to_string(*row.best_n_n_mean) : "")
                  << '\n';
    return kExitOk;
}

struct ReportOptions {
    std::string in;
};

int cmd_report(ReportOptions& opt)
{
    bool found = false;
    for (const auto& entry : fs::directory_iterator(opt.in)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("eval_", 0) == 0 && entry.path().extension() == ".csv") {
            std::ifstream in(entry.path());
            std::cout << "== " << name << " ==\n" << in.rdbuf() << '\n';
            found = true;
        }
        if (name.rfind("confusion_", 0) == 0 && entry.path().extension() == ".txt") {
            std::ifstream in(entry.path());
            std::cout << "== " << name << " ==\n" << in.rdbuf() << '\n';
            found = true;
        }
        if (name == "sweep_rows.csv") {
            std::ifstream in(entry.path());
            std::cout << "== sweep ==\n" << in.rdbuf() << '\n';
            found = true;
        }
        if (name == "run_manifest.json" || name == "eval_manifest.json") {
            std::ifstream in(entry.path());
            std::cout << "== " << name << " ==\n" << in.rdbuf() << '\n';
            found = true;
        }
    }
    if (!found) {
        std::cerr << "no result files under " << opt.in << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-multiplexed spiking neural network simulator and trainer"};
    app.set_config("--config", "", "Read options from an INI file (flags win over the file)");
    app.require_subcommand(1);

    GenerateOptions gen_opt;
    auto* gen = app.add_subcommand("generate", "Generate a MADELON-style dataset");
    gen->add_option("--out", gen_opt.out, "Output directory")->required();
    gen->add_option("--seed", gen_opt.master_seed, "Master seed");
    gen->add_option("--points", gen_opt.params.n_points, "Number of datapoints");
    gen->add_option("--informative", gen_opt.params.n_informative, "Informative feature count");
    gen->add_option("--combination", gen_opt.params.n_combination, "Combination feature count");
    gen->add_option("--distractors", gen_opt.params.n_distractor, "Distractor feature count");
    gen->add_option("--clusters-per-class", gen_opt.params.n_clusters_per_class,
                    "Gaussian clusters per class");
    gen->add_option("--separation", gen_opt.params.cluster_separation, "Hypercube edge length");
    gen->add_option("--noise-sigma", gen_opt.params.noise_sigma, "Cluster standard deviation");
    gen->add_option("--distractor-sigma", gen_opt.params.distractor_sigma,
                    "Distractor standard deviation");
    gen->add_option("--labeling", gen_opt.labeling, "hyperplane | uniform_random");
    gen->add_option("--label-flips", gen_opt.params.n_label_flips,
                    "Cluster pairs swapped across classes");
    gen->add_option("--max-imbalance", gen_opt.params.max_class_imbalance,
                    "Allowed class count difference");

    LoadOptions load_opt;
    auto* load = app.add_subcommand("load", "Ingest NIPS-2003 format data/label files");
    load->add_option("--data", load_opt.data_file, "Data file")->required();
    load->add_option("--labels", load_opt.labels_file, "Labels file")->required();
    load->add_option("--out", load_opt.out, "Output directory")->required();
    load->add_flag("--standardize", load_opt.standardize_features,
                   "Zero-mean unit-variance columns");

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Encode a dataset and run the spiking reservoir");
    run->add_option("--data", run_opt.data_dir, "Dataset directory (from generate/load)")
        ->required();
    run->add_option("--out", run_opt.out, "Output directory")->required();
    run->add_option("--seed", run_opt.master_seed, "Master seed");
    run->add_option("--nv", run_opt.n_v, "Virtual node count");
    run->add_option("--theta", run_opt.drive.theta_s, "Node duration in seconds");
    run->add_option("--pad", run_opt.drive.n_pad, "Reset padding nodes per datapoint");
    run->add_option("--mask-dist", run_opt.mask_dist, "uniform01 | uniform_pm1 | binary_pm1");
    run->add_option("--mask-seed", run_opt.mask_seed, "Mask seed (default: derived from --seed)");
    run->add_flag("--standardize", run_opt.standardize_features, "Standardize features first");
    run->add_option("--tau", run_opt.neuron.tau_s, "Neuron time constant");
    run->add_option("--dt", run_opt.neuron.dt_s, "Integration step");
    run->add_option("--gain", run_opt.neuron.input_gain, "Drive gain (negative inverts)");
    run->add_option("--bias", run_opt.neuron.bias, "Constant drive bias");
    run->add_option("--refractory", run_opt.neuron.refractory_s, "Absolute refractory period");
    run->add_option("--spike-width", run_opt.neuron.spike_width_s, "Rendered spike width");
    run->add_option("--neuron-noise", run_opt.neuron.noise_sigma, "Per-step drive noise sigma");
    run->add_option("--noise-seed", run_opt.noise_seed, "Noise seed (default: derived)");
    run->add_option("--threshold", run_opt.threshold,
                    "Fixed spike threshold (skips calibration)");
    run->add_option("--calibrate-density", run_opt.calibrate_density,
                    "Target spike density for threshold calibration");
    run->add_option("--traces", run_opt.export_traces, "Export analog traces for the first N points");
    run->add_flag("--drive-csv", run_opt.export_drive, "Export the full drive waveform CSV");
    run->add_flag("--temporal-map", run_opt.export_temporal_map,
                  "Export the class-sorted temporal map");

    EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "Cross-validated readout training and scoring");
    eval->add_option("--raster", eval_opt.raster_file, "Raster CSV")->required();
    eval->add_option("--labels", eval_opt.labels_file, "Labels file")->required();
    eval->add_option("--out", eval_opt.out, "Output directory")->required();
    eval->add_option("--method", eval_opt.method, "ols | significance | both");
    eval->add_option("--nt", eval_opt.n_t, "Training points per class");
    eval->add_option("--nn", eval_opt.n_n, "Trained nodes per class (significance)");
    eval->add_option("--repeats", eval_opt.repeats, "Cross-validation repeats");
    eval->add_option("--seed", eval_opt.master_seed, "Master seed");
    eval->add_flag("--export-weights", eval_opt.export_weights,
                   "Write trained weights (and the significance table) for the first repeat's split");

    SweepOptions sweep_opt;
    auto* swp = app.add_subcommand("sweep", "Grid sweep over training set size and node count");
    swp->add_option("--raster", sweep_opt.raster_file, "Raster CSV")->required();
    swp->add_option("--labels", sweep_opt.labels_file, "Labels file")->required();
    swp->add_option("--out", sweep_opt.out, "Output directory")->required();
    swp->add_option("--method", sweep_opt.method, "ols | significance");
    swp->add_option("--nt-grid", sweep_opt.n_t_grid, "n_t grid: list a,b,c or range lo:hi[:step]");
    swp->add_option("--nn-grid", sweep_opt.n_n_grid, "n_n grid: list or range");
    swp->add_option("--repeats", sweep_opt.repeats, "Repeats per cell");
    swp->add_option("--seed", sweep_opt.master_seed, "Master seed");

    ReportOptions report_opt;
    auto* report = app.add_subcommand("report", "Summarize result files from an output directory");
    report->add_option("--in", report_opt.in, "Results directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_opt);
        if (load->parsed()) return cmd_load(load_opt);
        if (run->parsed()) return cmd_run(run_opt);
        if (eval->parsed()) return cmd_eval(eval_opt);
        if (swp->parsed()) return cmd_sweep(sweep_opt);
        if (report->parsed()) return cmd_report(report_opt);
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}
