// Acceptance suite: one checkable criterion per section, one [PASS]/[FAIL]
// line each. Usage: acceptance [criterion 1..9 | all] [path-to-cli].

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tmsnn/dataset.hpp"
#include "tmsnn/encoding.hpp"
#include "tmsnn/eval.hpp"
#include "tmsnn/io.hpp"
#include "tmsnn/reservoir.hpp"
#include "tmsnn/rng.hpp"
#include "tmsnn/training.hpp"

namespace fs = std::filesystem;
using namespace tmsnn;

namespace {

std::string g_cli_path;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool condition, const std::string& note)
    {
        if (!condition) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + note;
        }
    }
};

// The frozen desk-scale experiment behind criteria 6 and 7: dataset seed 1,
// generator defaults, +-1 mask, threshold calibrated to 7% spike density.
SpikeRaster frozen_raster(Eigen::Index n_v, std::uint64_t mask_base, Eigen::VectorXi& labels)
{
    MadelonParams params;
    params.seed = 1;
    const Dataset ds = generate_madelon(params);
    labels = ds.labels;
    const Mask mask = make_mask(ds.n_features(), n_v, MaskDistribution::uniform_pm1,
                                derive_seed(mask_base, "mask"));
    const EncodedDataset encoded = encode_dataset(ds, mask, DriveConfig{});
    NeuronParams neuron;
    neuron.threshold = calibrate_threshold(encoded.signals, neuron, 0.07).threshold;
    return run_reservoir(encoded.signals, neuron);
}

// --- criterion 1: significance-score exactness ---------------------------

Outcome criterion_1()
{
    Outcome out;
    struct Case {
        int s_minus, s_plus;
        double print_minus, print_plus;
    };
    // Worked node scores as printed (0.1 precision; node 853's pair was
    // truncated rather than rounded in print, so both decimal conventions
    // are accepted when comparing against the printed digits).
    const std::vector<Case> cases = {{88, 15, 75.1, 2.1}, {31, 26, 16.9, 11.9}, {8, 22, 2.1, 16.1}};

    auto matches_print = [](double z, double printed) {
        const double rounded = std::round(z * 10.0) / 10.0;
        const double truncated = std::floor(z * 10.0) / 10.0;
        return std::abs(rounded - printed) < 1e-9 || std::abs(truncated - printed) < 1e-9;
    };

    for (const auto& c : cases) {
        SignificanceTable table;
        table.counts.resize(1, 2);
        table.counts << c.s_minus, c.s_plus;
        table = score(table);
        const double total = c.s_minus + c.s_plus;
        const double exact_minus = c.s_minus * static_cast<double>(c.s_minus) / total;
        const double exact_plus = c.s_plus * static_cast<double>(c.s_plus) / total;
        out.require(std::abs(table.scores(0, 0) - exact_minus) < 1e-12,
                    "exact score mismatch (class -1)");
        out.require(std::abs(table.scores(0, 1) - exact_plus) < 1e-12,
                    "exact score mismatch (class +1)");
        out.require(matches_print(table.scores(0, 0), c.print_minus),
                    "printed-value mismatch for counts " + std::to_string(c.s_minus) + "," +
                        std::to_string(c.s_plus));
        out.require(matches_print(table.scores(0, 1), c.print_plus),
                    "printed-value mismatch for counts " + std::to_string(c.s_minus) + "," +
                        std::to_string(c.s_plus));
    }
    if (out.pass) out.detail = "scores 75.18/2.18, 16.86/11.86, 2.13/16.13 as printed at 0.1";
    return out;
}

// --- criterion 2: OLS oracle equivalence ----------------------------------

Outcome criterion_2()
{
    Outcome out;
    Rng rng(2024);
    double worst_w = 0.0, worst_residual = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        TrainingSet train;
        train.raster.resize(30, 512);
        for (Eigen::Index i = 0; i < train.raster.size(); ++i)
            train.raster(i) = rng.uniform01() < 0.5 ? 1 : 0;
        train.labels.resize(30);
        for (Eigen::Index i = 0; i < 30; ++i) train.labels[i] = i % 2 == 0 ? -1 : +1;
        train.n_t = 15;

        const ReadoutWeights ours = train_ols(train);
        const Eigen::MatrixXd x = train.raster.cast<double>();
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(30, 2);
        for (Eigen::Index i = 0; i < 30; ++i) y(i, train.labels[i] == -1 ? 0 : 1) = 1.0;

        const Eigen::MatrixXd oracle_w = oracles::pinv_svd(x) * y;
        worst_w = std::max(worst_w, (ours.w - oracle_w).cwiseAbs().maxCoeff());
        worst_residual =
            std::max(worst_residual, (x.transpose() * (y - x * ours.w)).cwiseAbs().maxCoeff());
    }
    out.require(worst_w < 1e-9,
                "W differs from the SVD-pseudoinverse oracle by " + format_double(worst_w));
    out.require(worst_residual < 1e-8, "normal-equation residual " + format_double(worst_residual));
    out.detail = "100 instances, max |dW| = " + format_double(worst_w) +
                 ", max residual = " + format_double(worst_residual);
    return out;
}

// --- criterion 3: filter-count equivalence --------------------------------

Outcome criterion_3()
{
    Outcome out;
    Rng rng(3033);
    ReadoutWeights weights;
    weights.method = TrainingMethod::significance;
    int agreements = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        if (t % 50 == 0) { // fresh random binary W every 50 rows
            weights.w.resize(256, 2);
            for (Eigen::Index i = 0; i < weights.w.size(); ++i)
                weights.w(i) = rng.uniform01() < 0.3 ? 1.0 : 0.0;
        }
        Eigen::RowVector<std::uint8_t, Eigen::Dynamic> row(256);
        for (Eigen::Index i = 0; i < 256; ++i) row[i] = rng.uniform01() < 0.5 ? 1 : 0;
        if (predict(row, weights) == oracles::filter_and_count_predict(row, weights.w))
            ++agreements;
    }
    out.require(agreements == trials, std::to_string(trials - agreements) + " of " +
                                          std::to_string(trials) + " rows disagreed");
    out.detail = std::to_string(agreements) + "/" + std::to_string(trials) + " rows agree";
    return out;
}

// --- criterion 4: ideal-case separability ----------------------------------

Outcome criterion_4()
{
    Outcome out;
    // One dedicated node per class, one always-on node, the rest silent.
    const Eigen::Index points = 60;
    SpikeRaster raster;
    raster.bits = RasterMatrix::Zero(points, 64);
    Eigen::VectorXi labels(points);
    for (Eigen::Index i = 0; i < points; ++i) {
        labels[i] = i % 2 == 0 ? -1 : +1;
        raster.bits(i, labels[i] == -1 ? 0 : 1) = 1;
        raster.bits(i, 2) = 1;
    }
    for (const int n_t : {1, 2, 3, 5, 8, 10, 15, 20}) {
        const EvalResult result =
            cross_validate(raster, labels, TrainingMethod::significance, n_t, 1, 5, 404);
        out.require(result.accuracy == 1.0, "accuracy " + format_double(result.accuracy) +
                                                " at n_t " + std::to_string(n_t));
    }
    if (out.pass) out.detail = "accuracy 1.0 for every n_t in {1..20}, n_n = 1";
    return out;
}

// --- criterion 5: generator sanity ------------------------------------------

Outcome criterion_5()
{
    Outcome out;
    MadelonParams params;
    params.seed = 1;
    const Dataset ds = generate_madelon(params);

    out.require(ds.n_features() == 500, "feature count != 500");
    int informative = 0, combination = 0, distractor = 0;
    for (const FeatureTag tag : ds.feature_meta) {
        informative += tag == FeatureTag::informative;
        combination += tag == FeatureTag::combination;
        distractor += tag == FeatureTag::distractor;
    }
    out.require(informative == 5 && combination == 15 && distractor == 480,
                "feature split != 5+15+480");
    out.require(ds.class_counts()[0] == ds.class_counts()[1], "classes not balanced");

    MadelonParams big = params;
    big.n_points = 1000;
    const Dataset ds1k = generate_madelon(big);
    const Eigen::VectorXd y = ds1k.labels.cast<double>();
    const double y_mean = y.mean();
    const double y_sd = std::sqrt((y.array() - y_mean).square().mean());
    double max_corr = 0.0;
    for (Eigen::Index j = 0; j < ds1k.n_features(); ++j) {
        if (ds1k.feature_meta[static_cast<std::size_t>(j)] != FeatureTag::distractor) continue;
        const Eigen::VectorXd col = ds1k.features.col(j);
        const double c_mean = col.mean();
        const double c_sd = std::sqrt((col.array() - c_mean).square().mean());
        max_corr = std::max(
            max_corr,
            std::abs(((col.array() - c_mean) * (y.array() - y_mean)).mean() / (c_sd * y_sd)));
    }
    out.require(max_corr < 0.1, "distractor/label correlation " + format_double(max_corr));

    std::vector<Eigen::Index> inf_cols, dist_cols;
    for (Eigen::Index j = 0; j < ds.n_features(); ++j) {
        if (ds.feature_meta[static_cast<std::size_t>(j)] == FeatureTag::distractor)
            dist_cols.push_back(j);
        else
            inf_cols.push_back(j);
    }
    Eigen::MatrixXd x_inf(ds.n_points(), static_cast<Eigen::Index>(inf_cols.size()));
    for (std::size_t k = 0; k < inf_cols.size(); ++k)
        x_inf.col(static_cast<Eigen::Index>(k)) = ds.features.col(inf_cols[k]);
    Eigen::MatrixXd x_dist(ds.n_points(), 20);
    for (Eigen::Index k = 0; k < 20; ++k)
        x_dist.col(k) = ds.features.col(dist_cols[static_cast<std::size_t>(k)]);

    const double acc_inf = oracles::linear_cv_accuracy(x_inf, ds.labels, 5, params.seed);
    const double acc_dist = oracles::linear_cv_accuracy(x_dist, ds.labels, 5, params.seed);
    out.require(acc_inf > 0.7, "informative linear CV " + format_double(acc_inf));
    out.require(acc_dist >= 0.4 && acc_dist <= 0.6,
                "distractor linear CV " + format_double(acc_dist));

    out.detail = "max distractor corr " + format_double(max_corr) + ", linear CV inf " +
                 format_double(acc_inf) + " / distractor " + format_double(acc_dist);
    return out;
}

// --- criterion 6: end-to-end pipeline target --------------------------------

Outcome criterion_6()
{
    Outcome out;
    Eigen::VectorXi labels;
    const SpikeRaster raster = frozen_raster(4096, 501, labels);

    const int repeats = 50;
    const std::uint64_t cv_seed = 1234;
    const EvalResult ols =
        cross_validate(raster, labels, TrainingMethod::ols, 15, {}, repeats, cv_seed);

    double best_sig = 0.0;
    int best_nn = 0;
    for (const int nn : {1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 28, 32, 40, 48, 56, 64}) {
        const EvalResult sig =
            cross_validate(raster, labels, TrainingMethod::significance, 15, nn, repeats, cv_seed);
        if (sig.accuracy > best_sig) {
            best_sig = sig.accuracy;
            best_nn = nn;
        }
    }
    const double gap = std::abs(ols.accuracy - best_sig);
    out.require(ols.accuracy >= 0.75, "OLS accuracy " + format_double(ols.accuracy) + " < 0.75");
    out.require(best_sig >= 0.75, "significance accuracy " + format_double(best_sig) + " < 0.75");
    out.require(gap <= 0.05, "methods differ by " + format_double(gap * 100.0) + " points");
    out.detail = "OLS " + format_double(ols.accuracy) + ", significance " + format_double(best_sig) +
                 " at n_n " + std::to_string(best_nn) + ", gap " + format_double(gap * 100.0) +
                 " pts";
    return out;
}

// --- criterion 7: sweep shape ------------------------------------------------

Outcome criterion_7()
{
    Outcome out;
    Eigen::VectorXi labels;
    const SpikeRaster raster = frozen_raster(2048, 1, labels);

    const SweepResult swept = sweep(raster, labels, TrainingMethod::significance,
                                    {5, 10, 20, 40, 80}, {1, 2, 4, 8, 16, 32, 64}, 10, 4242);

    const double n_n_cap = 0.05 * static_cast<double>(raster.n_nodes());
    std::string curve;
    for (std::size_t i = 0; i < swept.rows.size(); ++i) {
        const auto& row = swept.rows[i];
        curve += (i ? " -> " : "") + format_double(row.best_mean_accuracy);
        out.require(static_cast<double>(*row.best_n_n_mean) <= n_n_cap,
                    "optimal n_n " + std::to_string(*row.best_n_n_mean) +
                        " above 5% of N_v at n_t " + std::to_string(row.n_t));
        if (i > 0)
            out.require(row.best_mean_accuracy >= swept.rows[i - 1].best_mean_accuracy - 0.02,
                        "accuracy drop beyond 2 points at n_t " + std::to_string(row.n_t));
    }
    out.detail = "best mean accuracy " + curve;
    return out;
}

// --- criterion 8: reservoir physics -----------------------------------------

Outcome criterion_8()
{
    Outcome out;

    // closed-form first spike at several operating points
    for (const double ratio : {2.0, 1.5, 4.0}) {
        NeuronParams params;
        params.threshold = 0.5;
        const double v_inf = ratio * params.threshold;
        DriveSignal signal;
        signal.theta_s = 250e-12;
        signal.n_pad = 0;
        signal.node_values = Eigen::VectorXd::Constant(120, v_inf);
        const SimulationResult sim = simulate(signal, params);
        const double expected = params.tau_s * std::log(v_inf / (v_inf - params.threshold));
        out.require(!sim.spike_times.empty() &&
                        std::abs(sim.spike_times.front() - expected) <= params.dt_s,
                    "first spike off closed form at ratio " + format_double(ratio));
    }

    // refractory spacing on random drives
    Rng rng(808);
    NeuronParams params;
    params.threshold = 0.3;
    for (int trial = 0; trial < 20; ++trial) {
        DriveSignal signal;
        signal.theta_s = 250e-12;
        signal.n_pad = 8;
        signal.node_values = Eigen::VectorXd::Zero(264);
        for (Eigen::Index i = 0; i < 256; ++i) signal.node_values[i] = rng.uniform01();
        const SimulationResult sim = simulate(signal, params);
        for (std::size_t k = 1; k < sim.spike_times.size(); ++k)
            out.require(sim.spike_times[k] - sim.spike_times[k - 1] >= params.refractory_s - 1e-15,
                        "spikes closer than the refractory period");
    }

    // predecessor swap leaves a datapoint's raster row bit-identical
    auto random_signal = [&rng] {
        DriveSignal signal;
        signal.theta_s = 250e-12;
        signal.n_pad = 8;
        signal.node_values = Eigen::VectorXd::Zero(72);
        for (Eigen::Index i = 0; i < 64; ++i) signal.node_values[i] = rng.uniform01();
        return signal;
    };
    const DriveSignal a = random_signal(), b = random_signal(), c = random_signal();
    const SpikeRaster after_b = run_reservoir({b, a}, params);
    const SpikeRaster after_c = run_reservoir({c, a}, params);
    out.require(after_b.bits.row(1) == after_c.bits.row(1),
                "raster row depends on the preceding datapoint");

    // halving dt flips < 1% of bits at the calibrated operating point
    std::vector<DriveSignal> bench;
    for (int p = 0; p < 24; ++p) {
        DriveSignal signal;
        signal.theta_s = 250e-12;
        signal.n_pad = 8;
        signal.node_values = Eigen::VectorXd::Zero(264);
        for (Eigen::Index i = 0; i < 256; ++i) {
            double acc = 0.0;
            for (int k = 0; k < 12; ++k) acc += rng.uniform01() - 0.5;
            signal.node_values[i] = std::clamp(0.5 + acc / 6.0, 0.0, 1.0);
        }
        bench.push_back(signal);
    }
    NeuronParams coarse_params;
    coarse_params.threshold = calibrate_threshold(bench, coarse_params, 0.10).threshold;
    const SpikeRaster coarse = run_reservoir(bench, coarse_params);
    NeuronParams fine_params = coarse_params;
    fine_params.dt_s = coarse_params.dt_s / 2.0;
    const SpikeRaster fine = run_reservoir(bench, fine_params);
    Eigen::Index flips = 0;
    for (Eigen::Index i = 0; i < coarse.bits.rows(); ++i)
        for (Eigen::Index j = 0; j < coarse.bits.cols(); ++j)
            flips += coarse.bits(i, j) != fine.bits(i, j) ? 1 : 0;
    const double flip_rate = static_cast<double>(flips) / static_cast<double>(coarse.bits.size());
    out.require(flip_rate < 0.01, "dt halving flipped " + format_double(flip_rate * 100.0) + "%");

    out.detail = "first-spike within dt, refractory spacing held, predecessor swap exact, dt "
                 "halving flip rate " +
                 format_double(flip_rate * 100.0) + "%";
    return out;
}

// --- criterion 9: CLI determinism --------------------------------------------

int run_cli(const std::string& args)
{
    const std::string command = g_cli_path + " " + args + " > /dev/null 2>&1";
    return std::system(command.c_str());
}

bool trees_identical(const fs::path& lhs, const fs::path& rhs, std::string& mismatch)
{
    std::vector<fs::path> names;
    for (const auto& entry : fs::recursive_directory_iterator(lhs))
        if (entry.is_regular_file()) names.push_back(fs::relative(entry.path(), lhs));
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        std::ifstream fa(lhs / name, std::ios::binary);
        std::ifstream fb(rhs / name, std::ios::binary);
        if (!fb) {
            mismatch = "missing " + name.string();
            return false;
        }
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) {
            mismatch = name.string() + " differs";
            return false;
        }
    }
    return true;
}

int cli_exit_code(const std::string& args)
{
    const int status = std::system((g_cli_path + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

// Exit-code contract: 0 ok, 2 usage/parameter/format, 3 numeric input failure.
Outcome cli_contract()
{
    Outcome out;
    if (g_cli_path.empty()) {
        out.require(false, "no CLI path supplied (argument 2)");
        return out;
    }
    const fs::path base = fs::temp_directory_path() / "tmsnn_cli_contract";
    fs::remove_all(base);
    fs::create_directories(base);

    out.require(cli_exit_code("generate --points 0 --out " + (base / "zero").string()) == 2,
                "generate --points 0 should exit 2");
    out.require(cli_exit_code("run --data " + (base / "missing").string() + " --out " +
                              (base / "r").string()) == 2,
                "run with missing input should exit 2");
    out.require(cli_exit_code("eval --raster nowhere.csv --labels nowhere.txt --out " +
                              (base / "e").string()) == 2,
                "eval with missing files should exit 2");

    // non-finite feature value reaches the reservoir -> input failure (3)
    {
        fs::create_directories(base / "nan");
        std::ofstream data(base / "nan" / "dataset.data");
        data << "1 2\nnan 4\n";
        std::ofstream labels(base / "nan" / "dataset.labels");
        labels << "-1\n1\n";
    }
    out.require(cli_exit_code("run --data " + (base / "nan").string() + " --out " +
                              (base / "nanrun").string() + " --nv 8") == 3,
                "non-finite drive should exit 3");

    out.require(cli_exit_code("generate --points 40 --seed 3 --out " + (base / "ok").string()) == 0,
                "well-formed generate should exit 0");

    if (out.pass) out.detail = "exit codes 0/2/3 behave as documented";
    fs::remove_all(base);
    return out;
}

Outcome criterion_9()
{
    Outcome out;
    if (g_cli_path.empty()) {
        out.require(false, "no CLI path supplied (argument 2)");
        return out;
    }
    const fs::path base = fs::temp_directory_path() / "tmsnn_acceptance_cli";
    fs::remove_all(base);
    for (const std::string tree : {"a", "b"}) {
        const fs::path root = base / tree;
        fs::create_directories(root);
        const std::string data = (root / "data").string();
        const std::string run = (root / "run").string();
        int rc = run_cli("generate --out " + data + " --points 60 --seed 11");
        rc |= run_cli("run --data " + data + " --out " + run +
                      " --nv 256 --seed 11 --traces 1 --temporal-map");
        rc |= run_cli("eval --raster " + run + "/raster.csv --labels " + run + "/labels.csv --out " +
                      (root / "eval").string() + " --method both --nt 10 --nn 8 --seed 11");
        rc |= run_cli("sweep --raster " + run + "/raster.csv --labels " + run + "/labels.csv --out " +
                      (root / "sweep").string() + " --nt-grid 5,10 --nn-grid 1,4,16 --repeats 3 --seed 11");
        out.require(rc == 0, "a CLI command failed in tree " + tree);
    }
    if (out.pass) {
        std::string mismatch;
        out.require(trees_identical(base / "a", base / "b", mismatch), mismatch);
        if (out.pass) out.detail = "two full runs produced byte-identical output trees";
    }
    fs::remove_all(base);
    return out;
}

struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "significance-score exactness", criterion_1},
    {2, "OLS oracle equivalence", criterion_2},
    {3, "filter-and-count equivalence", criterion_3},
    {4, "ideal-case separability", criterion_4},
    {5, "generator sanity", criterion_5},
    {6, "end-to-end pipeline target", criterion_6},
    {7, "sweep shape", criterion_7},
    {8, "reservoir physics", criterion_8},
    {9, "CLI determinism", criterion_9},
};

} // namespace

int main(int argc, char** argv)
{
    const std::string selector = argc > 1 ? argv[1] : "all";
    if (argc > 2) g_cli_path = argv[2];

    if (selector == "cli") {
        const Outcome outcome = cli_contract();
        std::printf("[%s] cli exit-code contract%s%s\n", outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
        return outcome.pass ? 0 : 1;
    }

    bool all_pass = true;
    for (const auto& criterion : kCriteria) {
        if (selector != "all" && std::to_string(criterion.number) != selector) continue;
        const Outcome outcome = criterion.run();
        all_pass = all_pass && outcome.pass;
        std::printf("[%s] criterion %d: %s%s%s\n", outcome.pass ? "PASS" : "FAIL", criterion.number,
                    criterion.name, outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (selector == "all") {
        const Outcome outcome = cli_contract();
        all_pass = all_pass && outcome.pass;
        std::printf("[%s] cli exit-code contract%s%s\n", outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    }
    return all_pass ? 0 : 1;
}
