#include <benchmark/benchmark.h>

#include "tmsnn/dataset.hpp"
#include "tmsnn/encoding.hpp"
#include "tmsnn/eval.hpp"
#include "tmsnn/reservoir.hpp"
#include "tmsnn/training.hpp"

using namespace tmsnn;

namespace {

struct PipelineFixture {
    Dataset ds;
    EncodedDataset encoded;
    NeuronParams neuron;
    SpikeRaster raster;

    explicit PipelineFixture(int n_v)
    {
        MadelonParams params;
        params.n_points = 64;
        params.seed = 11;
        ds = generate_madelon(params);
        const Mask mask =
            make_mask(ds.n_features(), n_v, MaskDistribution::uniform_pm1, derive_seed(11, "mask"));
        encoded = encode_dataset(ds, mask, DriveConfig{});
        neuron.threshold = calibrate_threshold(encoded.signals, neuron, 0.07, 16).threshold;
        raster = run_reservoir(encoded.signals, neuron);
    }
};

PipelineFixture& fixture(int n_v)
{
    static PipelineFixture small(512);
    static PipelineFixture large(2048);
    return n_v == 512 ? small : large;
}

TrainingSet training_subset(const PipelineFixture& fix, int n_t)
{
    TrainingSet train;
    train.n_t = n_t;
    train.raster.resize(2 * n_t, fix.raster.n_nodes());
    train.labels.resize(2 * n_t);
    int row = 0;
    for (const int cls : {-1, +1})
        for (Eigen::Index i = 0; i < fix.ds.labels.size() && row < (cls == -1 ? n_t : 2 * n_t); ++i)
            if (fix.ds.labels[i] == cls) {
                train.raster.row(row) = fix.raster.bits.row(i);
                train.labels[row] = cls;
                ++row;
            }
    return train;
}

} // namespace

static void BM_EncodeDatapoint(benchmark::State& state)
{
    const auto n_v = static_cast<int>(state.range(0));
    const auto& fix = fixture(n_v);
    const Mask mask =
        make_mask(fix.ds.n_features(), n_v, MaskDistribution::uniform_pm1, derive_seed(11, "mask"));
    const Eigen::VectorXd features = fix.ds.features.row(0).transpose();
    for (auto _ : state)
        benchmark::DoNotOptimize(encode_datapoint(features, mask, fix.encoded.scale, DriveConfig{}));
}
BENCHMARK(BM_EncodeDatapoint)->Arg(512)->Arg(2048);

static void BM_Simulate(benchmark::State& state)
{
    const auto n_v = static_cast<int>(state.range(0));
    const auto& fix = fixture(n_v);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(fix.encoded.signals[0], fix.neuron));
}
BENCHMARK(BM_Simulate)->Arg(512)->Arg(2048);

static void BM_TrainOls(benchmark::State& state)
{
    const auto& fix = fixture(2048);
    const TrainingSet train = training_subset(fix, 15);
    for (auto _ : state) benchmark::DoNotOptimize(train_ols(train));
}
BENCHMARK(BM_TrainOls);

static void BM_TrainSignificance(benchmark::State& state)
{
    const auto& fix = fixture(2048);
    const TrainingSet train = training_subset(fix, 15);
    for (auto _ : state) benchmark::DoNotOptimize(train_significance(train, 20));
}
BENCHMARK(BM_TrainSignificance);

static void BM_Predict(benchmark::State& state)
{
    const auto& fix = fixture(2048);
    const ReadoutWeights weights = train_significance(training_subset(fix, 15), 20);
    for (auto _ : state) benchmark::DoNotOptimize(predict(fix.raster.bits.row(0), weights));
}
BENCHMARK(BM_Predict);

BENCHMARK_MAIN();
